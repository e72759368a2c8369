#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stlopt/runner.hpp"
#include "stlopt/suites.hpp"

using namespace stlopt;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string scenario;        // builtin name or path to a JSON file
  std::string method = "exact";  // exact | smooth-approx | both
  double k = -1.0;             // <= 0 means default / grid-searched
  int horizon = -1;            // -1 keeps the scenario's T
  uint64_t seed = 0;
  bool random_init = false;
  double init_scale = 1.0;
  int seeds = 1;
  std::string out_dir;
  SolveOptions solver;
};

Scenario resolve_scenario(const RunConfig& cfg) {
  const std::vector<std::string> builtins = {
      "two-target", "many-target", "narrow-passage", "door-puzzle",
      "nonlinear"};
  if (std::find(builtins.begin(), builtins.end(), cfg.scenario) !=
      builtins.end())
    return builtin_scenario(cfg.scenario,
                            cfg.horizon > 0 ? cfg.horizon : 25);
  if (!std::filesystem::exists(cfg.scenario)) {
    std::cerr << "error: scenario file not found: " << cfg.scenario << "\n";
    std::exit(2);
  }
  Scenario s = load_scenario(cfg.scenario);
  if (cfg.horizon > 0) {
    if (horizon(*s.formula()) > cfg.horizon)
      throw std::runtime_error("horizon override below formula horizon");
    s.T = cfg.horizon;
  }
  return s;
}

std::vector<std::string> state_names(const Scenario& s) {
  int n = s.dynamics->state_dim();
  if (s.dynamics_type == "double_integrator")
    return {"px", "py", "vx", "vy"};
  if (s.dynamics_type == "unicycle") return {"px", "py", "theta"};
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

void write_csv(const Scenario& s, const Trajectory& traj,
               const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t";
  for (const auto& nm : state_names(s)) out << "," << nm;
  for (int i = 0; i < s.dynamics->input_dim(); ++i) out << ",u" << i + 1;
  out << "\n";
  out.precision(17);
  for (int t = 0; t <= traj.T; ++t) {
    out << t;
    for (int i = 0; i < traj.states.rows(); ++i) out << "," << traj.states(i, t);
    for (int i = 0; i < traj.inputs.rows(); ++i) out << "," << traj.inputs(i, t);
    out << "\n";
  }
}

json result_json(const RunResult& r) {
  return json{{"status", to_string(r.report.status)},
              {"nlp_objective", r.report.objective},
              {"objective", r.objective},
              {"discrete_robustness", r.discrete_robustness},
              {"max_violation", r.report.max_violation},
              {"kkt_residual", r.report.kkt_residual},
              {"outer_iterations", r.report.outer_iterations},
              {"inner_iterations", r.report.inner_iterations},
              {"solve_time_s", r.report.wall_time_s},
              {"diagnostic", r.report.diagnostic}};
}

json config_json(const RunConfig& cfg) {
  return json{{"scenario", cfg.scenario}, {"method", cfg.method},
              {"k", cfg.k},               {"horizon", cfg.horizon},
              {"seed", cfg.seed},         {"seeds", cfg.seeds},
              {"random_init", cfg.random_init},
              {"kkt_tol", cfg.solver.kkt_tol},
              {"feas_tol", cfg.solver.feas_tol},
              {"max_outer", cfg.solver.max_outer},
              {"timeout", cfg.solver.timeout_s}};
}

/* Grid search k over the paper's candidates, keeping the best objective. */
double pick_k(const Scenario& s, const Pipeline& pl, const Trajectory& init,
              const SolveOptions& opts) {
  const double grid[] = {1, 2, 5, 10, 25, 50, 100};
  double best_k = 25.0;
  double best_obj = std::numeric_limits<double>::infinity();
  for (double k : grid) {
    RunResult r = solve_smooth(s, pl, init, k, opts);
    if ((r.report.status == SolveStatus::Optimal ||
         r.report.status == SolveStatus::Feasible) &&
        r.objective < best_obj) {
      best_obj = r.objective;
      best_k = k;
    }
  }
  return best_k;
}

double effective_k(const RunConfig& cfg, const Scenario& s,
                   const Pipeline& pl, const Trajectory& init) {
  if (cfg.k > 0) return cfg.k;
  if (s.dynamics->is_affine()) return pick_k(s, pl, init, cfg.solver);
  return 25.0;
}

int cmd_solve(const RunConfig& cfg) {
  Scenario s = resolve_scenario(cfg);
  Pipeline pl = build_pipeline(s);
  Trajectory init = cfg.random_init
                        ? random_initial_trajectory(s, cfg.seed, cfg.init_scale)
                        : s.reference_trajectory();

  json report;
  report["config"] = config_json(cfg);
  report["version"] = kVersion;
  report["scenario_name"] = s.name;

  std::filesystem::path out =
      cfg.out_dir.empty() ? "." : std::filesystem::path(cfg.out_dir);
  std::filesystem::create_directories(out);

  auto emit = [&](const std::string& method, const RunResult& r) {
    report["methods"][method] = result_json(r);
    write_csv(s, r.trajectory, (out / ("trajectory_" + method + ".csv")).string());
    std::cout << method << ": status=" << to_string(r.report.status)
              << " objective=" << r.objective
              << " discrete_robustness=" << r.discrete_robustness
              << " time=" << r.report.wall_time_s << "s\n";
  };

  if (cfg.method == "exact" || cfg.method == "both")
    emit("exact", solve_exact(s, pl, init, cfg.solver));
  if (cfg.method == "smooth-approx" || cfg.method == "both") {
    double k = effective_k(cfg, s, pl, init);
    RunResult r = solve_smooth(s, pl, init, k, cfg.solver);
    emit("smooth-approx", r);
    report["methods"]["smooth-approx"]["k"] = k;
  }

  std::ofstream rf(out / "report.json");
  rf << report.dump(2) << "\n";
  return 0;
}

int cmd_compare(const RunConfig& cfg) {
  Scenario s = resolve_scenario(cfg);
  Pipeline pl = build_pipeline(s);
  double k = cfg.k > 0 ? cfg.k
             : s.dynamics->is_affine()
                 ? pick_k(s, pl, s.reference_trajectory(), cfg.solver)
                 : 25.0;

  struct Row {
    uint64_t seed;
    RunResult exact, smooth;
  };
  std::vector<Row> rows;
  for (int i = 0; i < cfg.seeds; ++i) {
    uint64_t seed = cfg.seed + static_cast<uint64_t>(i);
    Trajectory init = random_initial_trajectory(s, seed, cfg.init_scale);
    Row row{seed, solve_exact(s, pl, init, cfg.solver),
            solve_smooth(s, pl, init, k, cfg.solver)};
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.seed < b.seed; });

  auto ok = [](const RunResult& r) {
    return r.report.status == SolveStatus::Optimal ||
           r.report.status == SolveStatus::Feasible;
  };
  auto aggregate = [&](auto pick) {
    json agg;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> times;
    int infeasible = 0;
    double best_rob = -std::numeric_limits<double>::infinity();
    for (const Row& row : rows) {
      const RunResult& r = pick(row);
      times.push_back(r.report.wall_time_s);
      if (!ok(r)) {
        ++infeasible;
        continue;
      }
      best = std::min(best, r.objective);
      best_rob = std::max(best_rob, r.discrete_robustness);
    }
    std::sort(times.begin(), times.end());
    agg["best_objective"] = best;
    agg["best_robustness"] = best_rob;
    agg["median_solve_time_s"] =
        times.empty() ? 0.0 : times[times.size() / 2];
    agg["infeasible"] = infeasible;
    return agg;
  };

  json report;
  report["config"] = config_json(cfg);
  report["version"] = kVersion;
  report["k"] = k;
  json per_seed = json::array();
  std::cout << "seed  exact(obj, rob, status)  smooth(obj, rob, status)\n";
  for (const Row& row : rows) {
    per_seed.push_back(json{{"seed", row.seed},
                            {"exact", result_json(row.exact)},
                            {"smooth-approx", result_json(row.smooth)}});
    std::cout << row.seed << "  " << row.exact.objective << ", "
              << row.exact.discrete_robustness << ", "
              << to_string(row.exact.report.status) << "  |  "
              << row.smooth.objective << ", "
              << row.smooth.discrete_robustness << ", "
              << to_string(row.smooth.report.status) << "\n";
  }
  report["per_seed"] = per_seed;
  report["aggregate"]["exact"] =
      aggregate([](const Row& r) -> const RunResult& { return r.exact; });
  report["aggregate"]["smooth-approx"] =
      aggregate([](const Row& r) -> const RunResult& { return r.smooth; });
  std::cout << "aggregate: " << report["aggregate"].dump() << "\n";

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream rf(std::filesystem::path(cfg.out_dir) / "compare.json");
    rf << report.dump(2) << "\n";
  }
  return 0;
}

int cmd_check(const RunConfig& cfg) {
  bool all = true;
  for (const SuiteResult& r : run_all_suites(cfg.seed + 1)) {
    std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << ": "
              << r.detail << "\n";
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

int cmd_dump_tree(const RunConfig& cfg, bool no_flatten) {
  Scenario s = resolve_scenario(cfg);
  FormulaPtr nnf = to_nnf(s.formula());
  TreePtr tree = build_tree(*nnf, 0);
  if (!no_flatten) tree = flatten(tree);
  std::cout << dump_tree(*tree);
  std::cout << "nodes: " << node_count(*tree) << "\n";
  return 0;
}

int cmd_dump_nlp(const RunConfig& cfg) {
  Scenario s = resolve_scenario(cfg);
  Pipeline pl = build_pipeline(s);
  NlpProblem p = assemble(*s.dynamics, s.x0, s.T, s.weights, s.state_box,
                          s.input_box, pl.reform);
  std::cout << "variables: " << p.vars.size() << " (" << p.vars.n << "x"
            << (p.vars.T + 1) << " states, " << p.vars.m << "x"
            << (p.vars.T + 1) << " inputs, " << p.vars.num_rho << " rho, "
            << p.vars.num_lambda << " lambda)\n";
  std::cout << "equalities: " << p.eq.size()
            << ", inequalities: " << p.ineq.size() << "\n";
  std::cout << dump_constraints(pl.reform);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trajectory optimization under STL specifications via exact "
               "smooth reformulation"};
  app.require_subcommand(1);

  RunConfig cfg;
  bool no_flatten = false;

  auto add_common = [&](CLI::App* sub, bool needs_scenario) {
    if (needs_scenario)
      sub->add_option("--scenario", cfg.scenario,
                      "builtin name or scenario JSON path")
          ->required();
    sub->add_option("--k", cfg.k, "smoothing sharpness for smooth-approx");
    sub->add_option("--horizon", cfg.horizon, "override T");
    sub->add_option("--seed", cfg.seed, "base RNG seed");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--kkt-tol", cfg.solver.kkt_tol, "KKT tolerance");
    sub->add_option("--feas-tol", cfg.solver.feas_tol, "feasibility tolerance");
    sub->add_option("--max-outer", cfg.solver.max_outer, "outer iteration cap");
    sub->add_option("--timeout", cfg.solver.timeout_s,
                    "per-solve wall-clock cap in seconds");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve one scenario");
  add_common(solve_cmd, true);
  solve_cmd->add_option("--method", cfg.method,
                        "exact | smooth-approx | both");
  solve_cmd->add_flag("--random-init", cfg.random_init,
                      "random normal initial guess instead of the reference");
  solve_cmd->add_option("--init-scale", cfg.init_scale,
                        "stddev scale of random initial guesses");

  CLI::App* compare_cmd =
      app.add_subcommand("compare", "compare exact vs smooth over seeds");
  add_common(compare_cmd, true);
  compare_cmd->add_option("--seeds", cfg.seeds, "number of random seeds");
  compare_cmd->add_option("--init-scale", cfg.init_scale,
                          "stddev scale of random initial guesses");

  CLI::App* check_cmd =
      app.add_subcommand("check", "run the property suites");
  check_cmd->add_option("--seed", cfg.seed, "base RNG seed");

  CLI::App* dump_tree_cmd =
      app.add_subcommand("dump-tree", "print the robustness tree");
  add_common(dump_tree_cmd, true);
  dump_tree_cmd->add_flag("--no-flatten", no_flatten, "skip flattening");

  CLI::App* dump_nlp_cmd =
      app.add_subcommand("dump-nlp", "print the assembled NLP summary");
  add_common(dump_nlp_cmd, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return cmd_solve(cfg);
    if (compare_cmd->parsed()) return cmd_compare(cfg);
    if (check_cmd->parsed()) return cmd_check(cfg);
    if (dump_tree_cmd->parsed()) return cmd_dump_tree(cfg, no_flatten);
    if (dump_nlp_cmd->parsed()) return cmd_dump_nlp(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
