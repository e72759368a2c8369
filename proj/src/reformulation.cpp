#include "stlopt/reformulation.hpp"

#include <sstream>

namespace stlopt {

static int index_node(Reformulation& r, const TreeNode& n) {
  int id = r.num_nodes();
  r.nodes.push_back(&n);
  r.children.emplace_back();
  r.lambda_offset.push_back(-1);
  std::vector<int> kids;
  kids.reserve(n.children.size());
  for (const auto& c : n.children) kids.push_back(index_node(r, *c));
  r.children[static_cast<size_t>(id)] = std::move(kids);
  return id;
}

Reformulation reformulate(const TreePtr& root) {
  Reformulation r;
  r.tree = root;
  index_node(r, *root);

  for (int v = 0; v < r.num_nodes(); ++v) {
    const TreeNode& n = *r.nodes[static_cast<size_t>(v)];
    const auto& kids = r.children[static_cast<size_t>(v)];
    switch (n.kind) {
      case TreeNode::Leaf:
        r.constraints.push_back({ReformConstraint::LeafLower, v, -1, -1});
        break;
      case TreeNode::Min:
        for (int u : kids)
          r.constraints.push_back({ReformConstraint::MinChild, v, u, -1});
        break;
      case TreeNode::Max: {
        r.lambda_offset[static_cast<size_t>(v)] = r.num_lambda;
        r.num_lambda += static_cast<int>(kids.size());
        for (int j = 0; j < static_cast<int>(kids.size()); ++j)
          r.constraints.push_back({ReformConstraint::SimplexNonneg, v, -1, j});
        r.constraints.push_back({ReformConstraint::SimplexSum, v, -1, -1});
        r.constraints.push_back({ReformConstraint::MaxCombo, v, -1, -1});
        break;
      }
    }
  }
  r.constraints.push_back({ReformConstraint::RootNonneg, r.root_id(), -1, -1});
  return r;
}

ReformAssignment warm_start(const Reformulation& r, const Trajectory& x_ref) {
  ReformAssignment a;
  a.rho = Vec::Zero(r.num_nodes());
  a.lambda = Vec::Zero(r.num_lambda);
  // nodes are preorder, so children come after parents: fill backwards
  for (int v = r.num_nodes() - 1; v >= 0; --v) {
    const TreeNode& n = *r.nodes[static_cast<size_t>(v)];
    const auto& kids = r.children[static_cast<size_t>(v)];
    switch (n.kind) {
      case TreeNode::Leaf:
        a.rho[v] = n.pred.h(x_ref.states.col(n.time));
        break;
      case TreeNode::Min: {
        double m = a.rho[kids[0]];
        for (int u : kids) m = std::min(m, a.rho[u]);
        a.rho[v] = m;
        break;
      }
      case TreeNode::Max: {
        int best = 0;
        for (int j = 1; j < static_cast<int>(kids.size()); ++j)
          if (a.rho[kids[static_cast<size_t>(j)]] >
              a.rho[kids[static_cast<size_t>(best)]])
            best = j;
        a.rho[v] = a.rho[kids[static_cast<size_t>(best)]];
        a.lambda[r.lambda_offset[static_cast<size_t>(v)] + best] = 1.0;
        break;
      }
    }
  }
  return a;
}

FeasReport check_feasible(const Reformulation& r, const ReformAssignment& a,
                          const Trajectory& x, double tol) {
  if (a.rho.size() != r.num_nodes() || a.lambda.size() != r.num_lambda)
    throw std::invalid_argument("check_feasible: assignment size mismatch");
  double worst = 0.0;
  for (const auto& c : r.constraints) {
    const TreeNode& n = *r.nodes[static_cast<size_t>(c.node)];
    const auto& kids = r.children[static_cast<size_t>(c.node)];
    double viol = 0.0;
    switch (c.kind) {
      case ReformConstraint::LeafLower:
        viol = a.rho[c.node] - n.pred.h(x.states.col(n.time));
        break;
      case ReformConstraint::MinChild:
        viol = a.rho[c.node] - a.rho[c.child];
        break;
      case ReformConstraint::SimplexNonneg:
        viol = -a.lambda[r.lambda_offset[static_cast<size_t>(c.node)] +
                         c.component];
        break;
      case ReformConstraint::SimplexSum: {
        double s = 0.0;
        for (size_t j = 0; j < kids.size(); ++j)
          s += a.lambda[r.lambda_offset[static_cast<size_t>(c.node)] +
                        static_cast<int>(j)];
        viol = std::abs(s - 1.0);
        break;
      }
      case ReformConstraint::MaxCombo: {
        double s = 0.0;
        for (size_t j = 0; j < kids.size(); ++j)
          s += a.lambda[r.lambda_offset[static_cast<size_t>(c.node)] +
                        static_cast<int>(j)] *
               a.rho[kids[j]];
        viol = a.rho[c.node] - s;
        break;
      }
      case ReformConstraint::RootNonneg:
        viol = -a.rho[c.node];
        break;
    }
    worst = std::max(worst, viol);
  }
  return {worst <= tol, worst};
}

std::string dump_constraints(const Reformulation& r) {
  std::ostringstream out;
  for (const auto& c : r.constraints) {
    const TreeNode& n = *r.nodes[static_cast<size_t>(c.node)];
    switch (c.kind) {
      case ReformConstraint::LeafLower:
        out << "h[" << n.pred.name << "](x_" << n.time << ") >= rho_"
            << c.node << "\n";
        break;
      case ReformConstraint::MinChild:
        out << "rho_" << c.child << " >= rho_" << c.node << "\n";
        break;
      case ReformConstraint::SimplexNonneg:
        out << "lambda_" << c.node << "[" << c.component << "] >= 0\n";
        break;
      case ReformConstraint::SimplexSum:
        out << "sum(lambda_" << c.node << ") == 1\n";
        break;
      case ReformConstraint::MaxCombo: {
        out << "sum_j lambda_" << c.node << "[j] * rho_child_j >= rho_"
            << c.node << "\n";
        break;
      }
      case ReformConstraint::RootNonneg:
        out << "rho_" << c.node << " >= 0\n";
        break;
    }
  }
  return out.str();
}

}  // namespace stlopt
