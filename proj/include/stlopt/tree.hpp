#pragma once

#include "stlopt/formula.hpp"

namespace stlopt {

/* Node of the robustness tree: leaves hold a predicate at a concrete time
 * step, internal nodes combine children by min or max. */
struct TreeNode {
  enum Kind { Leaf, Min, Max } kind = Leaf;
  Predicate pred;  // Leaf only
  int time = 0;    // Leaf only
  std::vector<std::shared_ptr<TreeNode>> children;
  std::string label;  // (subformula, t) description for debugging
};

using TreePtr = std::shared_ptr<TreeNode>;

/* Builds the robustness tree of an NNF formula anchored at time t.
 * And/Always map to min nodes, Or/Eventually/Until to max nodes; the
 * until node's t'-th child is a min block over the left child at
 * t..t+t'-1 and the right child at t+t'. Throws std::invalid_argument
 * if the formula still contains Not nodes. */
TreePtr build_tree(const Formula& f, int t);

/* Merges consecutive same-typed min/min and max/max nodes, collapses
 * single-child internal nodes, and (when dedup is set) drops duplicate
 * leaf children (same predicate name, same time) within one node. */
TreePtr flatten(const TreePtr& root, bool dedup = true);

/* Exact min/max evaluation; leaves evaluate h(x_t). */
double eval_tree(const TreeNode& root, const Trajectory& x);

int node_count(const TreeNode& root);
int max_depth(const TreeNode& root);

/* Indented human-readable dump (node type, label, leaf time). */
std::string dump_tree(const TreeNode& root);

}  // namespace stlopt
