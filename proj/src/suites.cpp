#include "stlopt/suites.hpp"

#include <cmath>
#include <sstream>

namespace stlopt {

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

}  // namespace

SuiteResult suite_oracle_equivalence(uint64_t seed, int cases) {
  Rng rng(seed);
  SampleConfig cfg;
  cfg.allow_not = false;  // NNF inputs
  auto preds = random_predicates(rng, cfg);
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    FormulaPtr f = random_formula(rng, preds, cfg);
    Trajectory x = random_trajectory(rng, cfg.state_dim, 1, cfg.horizon);
    double ref = eval_robustness(*f, x, 0);
    TreePtr tree = build_tree(*f, 0);
    double via_tree = eval_tree(*tree, x);
    double via_flat = eval_tree(*flatten(tree), x);
    worst = std::max(worst, std::abs(via_tree - ref));
    worst = std::max(worst, std::abs(via_flat - ref));
  }
  return {"oracle-equivalence", worst == 0.0,
          "max |tree - recursive| = " + fmt(worst) + " over " +
              std::to_string(cases) + " formulas"};
}

SuiteResult suite_sign_soundness(uint64_t seed, int cases) {
  Rng rng(seed);
  SampleConfig cfg;
  auto preds = random_predicates(rng, cfg);
  int mismatches = 0;
  for (int i = 0; i < cases; ++i) {
    FormulaPtr f = random_formula(rng, preds, cfg);
    Trajectory x = random_trajectory(rng, cfg.state_dim, 1, cfg.horizon);
    bool sat = eval_boolean(*f, x, 0);
    double rho = eval_robustness(*f, x, 0);
    if (sat != (rho >= 0.0)) ++mismatches;
  }
  return {"sign-soundness", mismatches == 0,
          std::to_string(mismatches) + " sign mismatches over " +
              std::to_string(cases) + " formulas"};
}

SuiteResult suite_error_bounds(uint64_t seed, int cases, SmoothOp max_op,
                               SmoothOp min_op) {
  Rng rng(seed);
  std::uniform_int_distribution<int> size_pick(2, 8);
  std::uniform_real_distribution<double> entry(-10.0, 10.0);
  const double ks[] = {0.5, 1.0, 5.0, 25.0};
  const double tol = 1e-12;
  int failures = 0;
  double worst_slack = 0.0;
  for (int i = 0; i < cases; ++i) {
    int m = size_pick(rng);
    Vec a(m);
    for (int j = 0; j < m; ++j) a[j] = entry(rng);
    double k = ks[static_cast<size_t>(i) % 4];
    auto lb = error_lower_bounds(a, k);
    double dmax = a.maxCoeff() - max_op(a, k);
    double dmin = a.minCoeff() - min_op(a, k);
    if (dmax < lb.lb_max - tol || dmin < lb.lb_min - tol) ++failures;
    // Strict positivity of the min error is only observable in double
    // precision while e^{-k * gap} stays above one ulp of the entries.
    std::vector<double> sorted(a.data(), a.data() + m);
    std::sort(sorted.begin(), sorted.end());
    if (k * (sorted[1] - sorted[0]) <= 25.0 && dmin <= 0.0) ++failures;
    worst_slack = std::min(std::min(dmax - lb.lb_max, dmin - lb.lb_min),
                           worst_slack);
  }
  return {"error-lower-bounds", failures == 0,
          std::to_string(failures) + " bound violations over " +
              std::to_string(cases) + " vectors (worst slack " +
              fmt(worst_slack) + ")"};
}

SuiteResult suite_warm_start(uint64_t seed, int cases) {
  Rng rng(seed);
  SampleConfig cfg;
  cfg.allow_not = false;
  auto preds = random_predicates(rng, cfg);
  int failures = 0;
  double worst = 0.0;
  for (int i = 0; i < cases; ++i) {
    FormulaPtr f = random_formula(rng, preds, cfg);
    Trajectory x = random_trajectory(rng, cfg.state_dim, 1, cfg.horizon);
    TreePtr tree = flatten(build_tree(*f, 0));
    Reformulation r = reformulate(tree);
    ReformAssignment a = warm_start(r, x);
    double tree_val = eval_tree(*tree, x);
    if (a.root() != tree_val) ++failures;
    // only RootNonneg can be violated, and only when the trajectory does
    // not satisfy the formula; every other constraint holds exactly
    double expected = std::max(0.0, -tree_val);
    FeasReport fr = check_feasible(r, a, x, expected);
    if (!fr.feasible) ++failures;
    worst = std::max(worst, fr.max_violation - expected);
  }
  return {"warm-start-witness", failures == 0,
          std::to_string(failures) + " witness failures over " +
              std::to_string(cases) + " trees (worst violation " +
              fmt(worst) + ")"};
}

SuiteResult suite_gradients(uint64_t seed, int points, double tol) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  std::string worst_name;
  for (const Scenario& s : builtin_scenarios(10)) {
    Pipeline pl = build_pipeline(s);
    NlpProblem exact = assemble(*s.dynamics, s.x0, s.T, s.weights,
                                s.state_box, s.input_box, pl.reform);
    NlpProblem smooth = assemble_smooth(*s.dynamics, s.x0, s.T, s.weights,
                                        s.state_box, s.input_box, pl.tree, 25.0);
    for (const NlpProblem* p : {&exact, &smooth}) {
      auto check = [&](const DiffFunction& f) {
        for (int i = 0; i < points; ++i) {
          Vec local(static_cast<Eigen::Index>(f.vars.size()));
          for (Eigen::Index j = 0; j < local.size(); ++j)
            local[j] = normal(rng);
          double err = fd_check(f, local);
          if (err > worst) {
            worst = err;
            worst_name = f.name;
          }
        }
      };
      check(p->objective);
      for (const auto& c : p->eq) check(c);
      for (const auto& c : p->ineq) check(c);
    }
  }
  return {"gradients", worst <= tol,
          "max relative FD error " + fmt(worst) +
              (worst_name.empty() ? "" : " (" + worst_name + ")")};
}

std::vector<SuiteResult> run_all_suites(uint64_t seed) {
  return {suite_oracle_equivalence(seed), suite_sign_soundness(seed + 1),
          suite_error_bounds(seed + 2), suite_warm_start(seed + 3),
          suite_gradients(seed + 4)};
}

}  // namespace stlopt
