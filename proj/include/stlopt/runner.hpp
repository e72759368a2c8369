#pragma once

#include "stlopt/scenario.hpp"
#include "stlopt/solver.hpp"

#include <random>

namespace stlopt {

/* Parse -> NNF -> tree -> flatten -> reformulate, shared by both methods. */
struct Pipeline {
  FormulaPtr formula;      // as written
  FormulaPtr nnf;
  TreePtr tree;            // flattened
  Reformulation reform;
};

Pipeline build_pipeline(const Scenario& s);

struct RunResult {
  SolveReport report;
  Trajectory trajectory;        // returned (x, u)
  double discrete_robustness;   // exact min/max oracle on the trajectory
  double objective;             // -alpha * rho^phi(x) + quadratic terms
};

/* Exact reformulated NLP, warm-started from the given trajectory. */
RunResult solve_exact(const Scenario& s, const Pipeline& pl,
                      const Trajectory& init, const SolveOptions& opts);

/* Smooth under-approximation baseline with sharpness k. */
RunResult solve_smooth(const Scenario& s, const Pipeline& pl,
                       const Trajectory& init, double k,
                       const SolveOptions& opts);

/* Random initial trajectory: states/inputs i.i.d. normal(0, scale). */
Trajectory random_initial_trajectory(const Scenario& s, uint64_t seed,
                                     double scale = 1.0);

}  // namespace stlopt
