#include "stlopt/runner.hpp"

#include <chrono>

namespace stlopt {

// sharpness of the smooth presolve inside solve_exact
constexpr double kPresolveSharpness = 25.0;

Pipeline build_pipeline(const Scenario& s) {
  Pipeline pl;
  pl.formula = s.formula();
  if (horizon(*pl.formula) > s.T)
    throw std::invalid_argument("formula horizon exceeds scenario T");
  pl.nnf = to_nnf(pl.formula);
  pl.tree = flatten(build_tree(*pl.nnf, 0));
  pl.reform = reformulate(pl.tree);
  return pl;
}

static RunResult finish(const Scenario& s, const Pipeline& pl,
                        const NlpProblem& p, SolveReport rep) {
  RunResult res;
  res.trajectory = p.vars.trajectory(rep.point);
  // reported robustness always comes from the discrete oracle
  res.discrete_robustness = eval_robustness(*pl.formula, res.trajectory, 0);
  res.objective = -s.weights.alpha * res.discrete_robustness +
                  quadratic_cost(s.weights, res.trajectory);
  res.report = std::move(rep);
  return res;
}

RunResult solve_exact(const Scenario& s, const Pipeline& pl,
                      const Trajectory& init, const SolveOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  auto remaining = [&] {
    return opts.timeout_s - std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
  };
  auto solved = [](const RunResult& r) {
    return r.report.status == SolveStatus::Optimal ||
           r.report.status == SolveStatus::Feasible;
  };

  // Stage 1: cheap smooth presolve to land the trajectory in a good basin.
  // The exact NLP then starts from the warm-start witness of that
  // trajectory, which is feasible whenever its robustness is nonnegative,
  // so the exact stage can only improve on it.
  Trajectory start = init;
  {
    SolveOptions pre_opts = opts;
    pre_opts.timeout_s = std::max(1.0, 0.4 * remaining());
    RunResult pre = solve_smooth(s, pl, init, kPresolveSharpness, pre_opts);
    double init_obj = -s.weights.alpha * eval_robustness(*pl.formula, init, 0) +
                      quadratic_cost(s.weights, init);
    if (solved(pre) && pre.objective <= init_obj) start = pre.trajectory;
  }

  // Stage 2: the exact reformulated NLP, with witness-refresh passes: each
  // pass rebuilds the rho/lambda warm start at the latest trajectory, which
  // realigns the max-node weights with the current argmax times.
  NlpProblem p = assemble(*s.dynamics, s.x0, s.T, s.weights, s.state_box,
                          s.input_box, pl.reform);
  auto run_once = [&](const Trajectory& warm) {
    SolveOptions stage = opts;
    stage.timeout_s = std::max(1.0, remaining());
    return finish(s, pl, p, solve(p, initial_point(p, pl.reform, warm), stage));
  };
  RunResult best = run_once(start);
  for (int pass = 0; pass < 3; ++pass) {
    if (remaining() <= 1.0) break;
    RunResult next = run_once(best.trajectory);
    bool better = next.objective < best.objective - 1e-9 &&
                  (solved(next) || !solved(best));
    if (!better) break;
    best = next;
  }
  return best;
}

RunResult solve_smooth(const Scenario& s, const Pipeline& pl,
                       const Trajectory& init, double k,
                       const SolveOptions& opts) {
  NlpProblem p = assemble_smooth(*s.dynamics, s.x0, s.T, s.weights,
                                 s.state_box, s.input_box, pl.tree, k);
  Vec z0 = initial_point_smooth(p, init);
  return finish(s, pl, p, solve(p, z0, opts));
}

Trajectory random_initial_trajectory(const Scenario& s, uint64_t seed,
                                     double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Trajectory traj;
  traj.T = s.T;
  const int n = s.dynamics->state_dim(), m = s.dynamics->input_dim();
  traj.states = Mat(n, s.T + 1);
  traj.inputs = Mat(m, s.T + 1);
  for (int t = 0; t <= s.T; ++t) {
    for (int i = 0; i < n; ++i) traj.states(i, t) = scale * normal(rng);
    for (int i = 0; i < m; ++i) traj.inputs(i, t) = scale * normal(rng);
  }
  traj.states.col(0) = s.x0;
  return traj;
}

}  // namespace stlopt
