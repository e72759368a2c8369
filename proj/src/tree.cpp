#include "stlopt/tree.hpp"

#include <sstream>

namespace stlopt {

static TreePtr make_leaf(const Predicate& p, int t) {
  auto n = std::make_shared<TreeNode>();
  n->kind = TreeNode::Leaf;
  n->pred = p;
  n->time = t;
  n->label = "(" + p.name + ", " + std::to_string(t) + ")";
  return n;
}

static TreePtr make_internal(TreeNode::Kind kind, std::vector<TreePtr> cs,
                             std::string label) {
  auto n = std::make_shared<TreeNode>();
  n->kind = kind;
  n->children = std::move(cs);
  n->label = std::move(label);
  return n;
}

TreePtr build_tree(const Formula& f, int t) {
  switch (f.op) {
    case Op::Pred:
      return make_leaf(f.pred, t);
    case Op::Not:
      throw std::invalid_argument("build_tree requires an NNF formula");
    case Op::And:
    case Op::Or: {
      std::vector<TreePtr> cs;
      cs.reserve(f.children.size());
      for (const auto& c : f.children) cs.push_back(build_tree(*c, t));
      auto kind = f.op == Op::And ? TreeNode::Min : TreeNode::Max;
      return make_internal(kind, std::move(cs),
                           std::string(f.op == Op::And ? "(and, " : "(or, ") +
                               std::to_string(t) + ")");
    }
    case Op::Always:
    case Op::Eventually: {
      std::vector<TreePtr> cs;
      for (int tp = f.interval.lo; tp <= f.interval.hi; ++tp)
        cs.push_back(build_tree(*f.children[0], t + tp));
      auto kind = f.op == Op::Always ? TreeNode::Min : TreeNode::Max;
      std::string name = f.op == Op::Always ? "G" : "F";
      return make_internal(kind, std::move(cs),
                           "(" + name + "[" + std::to_string(f.interval.lo) +
                               "," + std::to_string(f.interval.hi) + "], " +
                               std::to_string(t) + ")");
    }
    case Op::Until: {
      std::vector<TreePtr> blocks;
      for (int tp = f.interval.lo; tp <= f.interval.hi; ++tp) {
        std::vector<TreePtr> cs;
        for (int j = 0; j < tp; ++j)
          cs.push_back(build_tree(*f.children[0], t + j));
        cs.push_back(build_tree(*f.children[1], t + tp));
        blocks.push_back(make_internal(
            TreeNode::Min, std::move(cs),
            "(until-block t'=" + std::to_string(tp) + ", " +
                std::to_string(t) + ")"));
      }
      return make_internal(TreeNode::Max, std::move(blocks),
                           "(U[" + std::to_string(f.interval.lo) + "," +
                               std::to_string(f.interval.hi) + "], " +
                               std::to_string(t) + ")");
    }
  }
  throw std::logic_error("unreachable");
}

TreePtr flatten(const TreePtr& root, bool dedup) {
  if (root->kind == TreeNode::Leaf) return root;
  std::vector<TreePtr> merged;
  for (const auto& c : root->children) {
    TreePtr fc = flatten(c, dedup);
    if (fc->kind == root->kind) {
      // splice same-typed child's children in place
      merged.insert(merged.end(), fc->children.begin(), fc->children.end());
    } else {
      merged.push_back(fc);
    }
  }
  if (dedup) {
    std::vector<TreePtr> unique;
    for (const auto& c : merged) {
      bool dup = false;
      if (c->kind == TreeNode::Leaf) {
        for (const auto& u : unique)
          if (u->kind == TreeNode::Leaf && u->time == c->time &&
              u->pred.name == c->pred.name) {
            dup = true;
            break;
          }
      }
      if (!dup) unique.push_back(c);
    }
    merged = std::move(unique);
  }
  if (merged.size() == 1) return merged[0];
  return make_internal(root->kind, std::move(merged), root->label);
}

double eval_tree(const TreeNode& root, const Trajectory& x) {
  switch (root.kind) {
    case TreeNode::Leaf:
      return root.pred.h(x.states.col(root.time));
    case TreeNode::Min: {
      double v = eval_tree(*root.children[0], x);
      for (size_t i = 1; i < root.children.size(); ++i)
        v = std::min(v, eval_tree(*root.children[i], x));
      return v;
    }
    case TreeNode::Max: {
      double v = eval_tree(*root.children[0], x);
      for (size_t i = 1; i < root.children.size(); ++i)
        v = std::max(v, eval_tree(*root.children[i], x));
      return v;
    }
  }
  throw std::logic_error("unreachable");
}

int node_count(const TreeNode& root) {
  int n = 1;
  for (const auto& c : root.children) n += node_count(*c);
  return n;
}

int max_depth(const TreeNode& root) {
  int d = 0;
  for (const auto& c : root.children) d = std::max(d, max_depth(*c));
  return d + 1;
}

static void dump_impl(const TreeNode& n, int indent, std::ostringstream& out) {
  out << std::string(static_cast<size_t>(indent) * 2, ' ');
  switch (n.kind) {
    case TreeNode::Leaf:
      out << "leaf " << n.pred.name << " @t=" << n.time << "\n";
      break;
    case TreeNode::Min:
      out << "min " << n.label << "\n";
      break;
    case TreeNode::Max:
      out << "max " << n.label << "\n";
      break;
  }
  for (const auto& c : n.children) dump_impl(*c, indent + 1, out);
}

std::string dump_tree(const TreeNode& root) {
  std::ostringstream out;
  dump_impl(root, 0, out);
  return out.str();
}

}  // namespace stlopt
