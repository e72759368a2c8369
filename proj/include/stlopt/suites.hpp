#pragma once

#include "stlopt/runner.hpp"
#include "stlopt/sampling.hpp"

namespace stlopt {

struct SuiteResult {
  std::string name;
  bool pass;
  std::string detail;
};

using SmoothOp = std::function<double(const Vec&, double)>;

/* eval_tree(build_tree(f)) == eval_robustness(f) and flatten preserves
 * the value, on random NNF formulas. */
SuiteResult suite_oracle_equivalence(uint64_t seed, int cases = 500);

/* Sign of the discrete robustness agrees with a Boolean evaluator. */
SuiteResult suite_sign_soundness(uint64_t seed, int cases = 500);

/* Lemma-style error lower bounds hold for the smooth operators. The
 * operators are injectable so a deliberately broken implementation can be
 * shown to fail. */
SuiteResult suite_error_bounds(uint64_t seed, int cases = 10000,
                               SmoothOp max_op = smooth_max,
                               SmoothOp min_op = smooth_min);

/* Warm-start witnesses satisfy the reformulated constraint set with the
 * root variable equal to the tree value. */
SuiteResult suite_warm_start(uint64_t seed, int cases = 500);

/* Finite-difference check of every assembled objective/constraint of the
 * builtin scenarios. */
SuiteResult suite_gradients(uint64_t seed, int points = 20,
                            double tol = 1e-5);

std::vector<SuiteResult> run_all_suites(uint64_t seed);

}  // namespace stlopt
