#pragma once

#include "stlopt/tree.hpp"

namespace stlopt {

/* One constraint of the reformulated set C. Node and child are preorder
 * node ids into the indexed tree; `component` indexes a lambda entry for
 * SimplexNonneg. */
struct ReformConstraint {
  enum Kind {
    LeafLower,      // h^mu(x_t) >= rho_node
    MinChild,       // rho_child >= rho_node
    SimplexNonneg,  // lambda_node[component] >= 0
    SimplexSum,     // 1' lambda_node == 1
    MaxCombo,       // sum_j lambda_node[j] rho_child_j >= rho_node
    RootNonneg      // rho_root >= 0
  } kind;
  int node = 0;
  int child = -1;
  int component = -1;
};

/* Preorder index over a tree: one rho variable per node, one lambda vector
 * (length = child count) per max node. */
struct Reformulation {
  TreePtr tree;
  std::vector<const TreeNode*> nodes;      // preorder, nodes[0] is the root
  std::vector<std::vector<int>> children;  // child node ids per node
  std::vector<int> lambda_offset;  // per node; -1 unless max node
  int num_lambda = 0;              // total lambda components
  std::vector<ReformConstraint> constraints;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int root_id() const { return 0; }
};

/* Depth-first traversal emitting the constraint set: leaves get a lower
 * bound by the predicate, min nodes one inequality per child, max nodes a
 * simplex-weighted combination, and the root a nonnegativity constraint. */
Reformulation reformulate(const TreePtr& root);

struct ReformAssignment {
  Vec rho;     // per node id
  Vec lambda;  // concatenated per max node, in lambda_offset order
  double root() const { return rho[0]; }
};

/* Witness from a reference trajectory: node values are discrete
 * robustness, each max node's lambda is the indicator of its argmax child
 * (lowest index on ties). */
ReformAssignment warm_start(const Reformulation& r, const Trajectory& x_ref);

struct FeasReport {
  bool feasible;
  double max_violation;
};

/* Evaluates every constraint of C at the given assignment/trajectory. */
FeasReport check_feasible(const Reformulation& r, const ReformAssignment& a,
                          const Trajectory& x, double tol);

/* One constraint per line, for debugging. */
std::string dump_constraints(const Reformulation& r);

}  // namespace stlopt
