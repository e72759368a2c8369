#pragma once

#include "stlopt/nlp.hpp"

namespace stlopt {

struct SolveOptions {
  double kkt_tol = 1e-6;
  double feas_tol = 1e-6;
  int max_outer = 50;
  int max_inner = 2000;
  double timeout_s = 600.0;
  double init_penalty = 10.0;
};

enum class SolveStatus { Optimal, Feasible, Infeasible, MaxIter };

const char* to_string(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIter;
  double objective = 0.0;
  double max_violation = 0.0;
  double kkt_residual = 0.0;
  int outer_iterations = 0;
  int inner_iterations = 0;
  double wall_time_s = 0.0;
  Vec point;
  std::string diagnostic;
};

/* Augmented-Lagrangian outer loop over a bound-constrained L-BFGS inner
 * minimizer. Equalities use standard multiplier terms; inequalities
 * g >= 0 use the max(0, mu - rho g) form. Deterministic for fixed
 * (problem, init, opts). */
SolveReport solve(const NlpProblem& p, const Vec& init,
                  const SolveOptions& opts = {});

}  // namespace stlopt
