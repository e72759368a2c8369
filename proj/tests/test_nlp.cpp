#include <doctest.h>

#include "helpers.hpp"
#include "stlopt/runner.hpp"

using namespace stlopt;
using namespace stlopt::testhelpers;

namespace {

/* Tiny unconstrained-variable problem builder for solver tests. */
NlpProblem tiny_problem(int nvars) {
  NlpProblem p;
  p.vars.n = nvars;
  p.vars.m = 0;
  p.vars.T = 0;
  const double inf = std::numeric_limits<double>::infinity();
  p.vars.lower = Vec::Constant(nvars, -inf);
  p.vars.upper = Vec::Constant(nvars, inf);
  for (int i = 0; i < nvars; ++i) p.objective.vars.push_back(i);
  return p;
}

}  // namespace

TEST_CASE("solve: min x^2 subject to x >= 1") {
  NlpProblem p = tiny_problem(1);
  p.objective.value = [](const Vec& z) { return z[0] * z[0]; };
  p.objective.gradient = [](const Vec& z) { return Vec(2.0 * z); };
  DiffFunction g;
  g.vars = {0};
  g.value = [](const Vec& z) { return z[0] - 1.0; };
  g.gradient = [](const Vec&) { return Vec(Vec::Ones(1)); };
  p.ineq.push_back(g);

  Vec init(1);
  init << 5.0;
  SolveReport r = solve(p, init);
  CHECK(r.status == SolveStatus::Optimal);
  CHECK(r.point[0] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("solve: equality-constrained quadratic") {
  // min (x-2)^2 + (y+1)^2 s.t. x + y = 0  ->  (1.5, -1.5)
  NlpProblem p = tiny_problem(2);
  p.objective.value = [](const Vec& z) {
    return (z[0] - 2) * (z[0] - 2) + (z[1] + 1) * (z[1] + 1);
  };
  p.objective.gradient = [](const Vec& z) {
    Vec g(2);
    g << 2 * (z[0] - 2), 2 * (z[1] + 1);
    return g;
  };
  DiffFunction c;
  c.vars = {0, 1};
  c.value = [](const Vec& z) { return z[0] + z[1]; };
  c.gradient = [](const Vec&) { return Vec(Vec::Ones(2)); };
  p.eq.push_back(c);

  SolveReport r = solve(p, Vec::Zero(2));
  CHECK(r.status == SolveStatus::Optimal);
  CHECK(r.point[0] == doctest::Approx(1.5).epsilon(1e-5));
  CHECK(r.point[1] == doctest::Approx(-1.5).epsilon(1e-5));
}

TEST_CASE("solve: bounds are honored") {
  NlpProblem p = tiny_problem(1);
  p.vars.lower[0] = -0.5;
  p.vars.upper[0] = 0.5;
  p.objective.value = [](const Vec& z) { return (z[0] - 3.0) * (z[0] - 3.0); };
  p.objective.gradient = [](const Vec& z) { return Vec(2.0 * (z.array() - 3.0)); };
  Vec init(1);
  init << 0.0;
  SolveReport r = solve(p, init);
  CHECK(r.point[0] == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("solve: infeasible problem is reported") {
  // x >= 1 and x <= -1 simultaneously
  NlpProblem p = tiny_problem(1);
  p.objective.value = [](const Vec& z) { return z[0] * z[0]; };
  p.objective.gradient = [](const Vec& z) { return Vec(2.0 * z); };
  DiffFunction g1, g2;
  g1.vars = {0};
  g1.value = [](const Vec& z) { return z[0] - 1.0; };
  g1.gradient = [](const Vec&) { return Vec(Vec::Ones(1)); };
  g2.vars = {0};
  g2.value = [](const Vec& z) { return -z[0] - 1.0; };
  g2.gradient = [](const Vec&) { return Vec(-Vec::Ones(1)); };
  p.ineq.push_back(g1);
  p.ineq.push_back(g2);
  SolveReport r = solve(p, Vec::Zero(1));
  CHECK(r.status == SolveStatus::Infeasible);
}

TEST_CASE("solve: non-finite init is rejected") {
  NlpProblem p = tiny_problem(1);
  p.objective.value = [](const Vec& z) { return std::log(z[0]); };
  p.objective.gradient = [](const Vec& z) { return Vec(z.cwiseInverse()); };
  Vec init(1);
  init << -1.0;  // log of a negative number
  CHECK_THROWS_AS(solve(p, init), std::invalid_argument);
}

TEST_CASE("solve: deterministic across repeats") {
  Scenario s = builtin_scenario("two-target", 25);
  Pipeline pl = build_pipeline(s);
  Trajectory init = random_initial_trajectory(s, 42);
  SolveOptions opts;
  opts.max_outer = 8;
  RunResult a = solve_exact(s, pl, init, opts);
  RunResult b = solve_exact(s, pl, init, opts);
  CHECK(a.report.objective == b.report.objective);
  CHECK(a.report.status == b.report.status);
  CHECK((a.report.point - b.report.point).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("fd_check: exact for linear, tight for smooth composites") {
  DiffFunction lin;
  lin.vars = {0, 1, 2};
  Vec w(3);
  w << 1.0, -2.0, 0.5;
  lin.value = [w](const Vec& z) { return w.dot(z); };
  lin.gradient = [w](const Vec&) { return w; };
  Vec pt(3);
  pt << 0.3, -1.2, 4.0;
  CHECK(fd_check(lin, pt) <= 1e-10);

  DiffFunction comp;
  comp.vars = {0, 1};
  comp.value = [](const Vec& z) { return smooth_min(z, 25.0); };
  comp.gradient = [](const Vec& z) {
    double shift = z.minCoeff();
    Vec e = (-25.0 * (z.array() - shift)).exp();
    return Vec(e / e.sum());
  };
  Vec pt2(2);
  pt2 << 0.21, 0.17;
  CHECK(fd_check(comp, pt2) <= 1e-5);
}

TEST_CASE("assemble: degenerate horizon T=0 without formula constraints") {
  LtiDynamics dyn = double_integrator();
  Weights w;
  w.alpha = 1.0;
  w.Q = Mat::Zero(4, 4);
  w.R = Mat::Zero(2, 2);
  Box none;
  // single-leaf formula keeps the reformulation non-empty but trivial
  auto f = make_pred(coord_pred("mu", 0));
  Reformulation reform = reformulate(build_tree(*f, 0));
  NlpProblem p = assemble(dyn, Vec::Zero(4), 0, w, none, none, reform);
  // no dynamics rows at T=0; only the 4 x0-fixing equalities
  CHECK(p.eq.size() == 4);
}

TEST_CASE("assemble: single-leaf problem structure at T=1") {
  LtiDynamics dyn = double_integrator();
  Weights w;
  w.alpha = 1.0;
  w.Q = Mat::Zero(4, 4);
  w.R = Mat::Zero(2, 2);
  Box none;
  auto f = make_pred(coord_pred("mu", 0));
  Reformulation reform = reformulate(build_tree(*f, 0));
  NlpProblem p = assemble(dyn, Vec::Zero(4), 1, w, none, none, reform);
  // 8 states + 4 inputs + 1 rho (the root is the leaf variable)
  CHECK(p.vars.size() == 13);
  CHECK(p.eq.size() == 8);    // 4 dynamics rows + 4 x0 rows
  CHECK(p.ineq.size() == 2);  // LeafLower + RootNonneg
}

TEST_CASE("assemble: horizon violation rejected") {
  LtiDynamics dyn = double_integrator();
  Weights w;
  w.Q = Mat::Zero(4, 4);
  w.R = Mat::Zero(2, 2);
  Box none;
  auto f = make_always({0, 5}, make_pred(coord_pred("mu", 0)));
  Reformulation reform = reformulate(build_tree(*f, 0));
  CHECK_THROWS_AS(assemble(dyn, Vec::Zero(4), 3, w, none, none, reform),
                  std::invalid_argument);
  CHECK_THROWS_AS(assemble(dyn, Vec::Zero(3), 6, w, none, none, reform),
                  std::invalid_argument);
}

TEST_CASE("end-to-end: double integrator reaches a target region") {
  Scenario s = builtin_scenario("two-target", 25);
  Pipeline pl = build_pipeline(s);
  RunResult r = solve_exact(s, pl, s.reference_trajectory(), SolveOptions{});
  CHECK((r.report.status == SolveStatus::Optimal ||
         r.report.status == SolveStatus::Feasible));
  CHECK(r.discrete_robustness >= -1e-6);
}

TEST_CASE("objective equivalence at warm-start witnesses") {
  Scenario s = builtin_scenario("two-target", 25);
  Pipeline pl = build_pipeline(s);
  NlpProblem p = assemble(*s.dynamics, s.x0, s.T, s.weights, s.state_box,
                          s.input_box, pl.reform);
  for (int i = 0; i < 20; ++i) {
    Trajectory traj = random_initial_trajectory(s, 100 + static_cast<uint64_t>(i));
    Vec z = initial_point(p, pl.reform, traj);
    double via_nlp = p.objective.eval(z);
    double direct = -s.weights.alpha * eval_robustness(*pl.formula, traj, 0) +
                    quadratic_cost(s.weights, traj);
    CHECK(via_nlp == direct);
  }
}
