#include "stlopt/sampling.hpp"

namespace stlopt {

std::vector<Predicate> random_predicates(Rng& rng, const SampleConfig& cfg) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Predicate> preds;
  for (int i = 0; i < cfg.num_predicates; ++i) {
    Vec a(cfg.state_dim);
    for (int d = 0; d < cfg.state_dim; ++d) a[d] = normal(rng);
    double b = normal(rng);
    Predicate p;
    p.name = "p" + std::to_string(i);
    p.h = [a, b](const Vec& x) { return a.dot(x) + b; };
    p.grad = [a](const Vec& x) {
      Vec g = Vec::Zero(x.size());
      g.head(a.size()) = a;
      return g;
    };
    preds.push_back(std::move(p));
  }
  return preds;
}

namespace {

FormulaPtr gen(Rng& rng, const std::vector<Predicate>& preds, int depth,
               int budget, bool allow_until, bool allow_not) {
  std::uniform_int_distribution<int> pred_pick(
      0, static_cast<int>(preds.size()) - 1);
  if (depth <= 0) return make_pred(preds[static_cast<size_t>(pred_pick(rng))]);

  // op weights: pred 2, and 2, or 2, not 1, always 2, eventually 2, until 2
  std::vector<int> ops{0, 0, 1, 1, 2, 2, 4, 4, 5, 5};
  if (allow_not) ops.push_back(3);
  if (allow_until && budget >= 1) {
    ops.push_back(6);
    ops.push_back(6);
  }
  std::uniform_int_distribution<size_t> op_pick(0, ops.size() - 1);
  int op = ops[op_pick(rng)];
  std::uniform_int_distribution<int> arity_pick(2, 3);

  switch (op) {
    case 0:
      return make_pred(preds[static_cast<size_t>(pred_pick(rng))]);
    case 1:
    case 2: {
      int arity = arity_pick(rng);
      std::vector<FormulaPtr> cs;
      for (int i = 0; i < arity; ++i)
        cs.push_back(gen(rng, preds, depth - 1, budget, allow_until, allow_not));
      return op == 1 ? make_and(std::move(cs)) : make_or(std::move(cs));
    }
    case 3:
      // negation never sits above an until so NNF always succeeds
      return make_not(gen(rng, preds, depth - 1, budget, false, allow_not));
    case 4:
    case 5: {
      std::uniform_int_distribution<int> hi_pick(0, std::max(0, budget));
      int hi = hi_pick(rng);
      std::uniform_int_distribution<int> lo_pick(0, hi);
      Interval iv{lo_pick(rng), hi};
      FormulaPtr c =
          gen(rng, preds, depth - 1, budget - hi, allow_until, allow_not);
      return op == 4 ? make_always(iv, c) : make_eventually(iv, c);
    }
    default: {
      std::uniform_int_distribution<int> hi_pick(1, std::max(1, budget));
      int hi = hi_pick(rng);
      std::uniform_int_distribution<int> lo_pick(0, hi);
      Interval iv{lo_pick(rng), hi};
      FormulaPtr lhs =
          gen(rng, preds, depth - 1, budget - hi, allow_until, allow_not);
      FormulaPtr rhs =
          gen(rng, preds, depth - 1, budget - hi, allow_until, allow_not);
      return make_until(iv, lhs, rhs);
    }
  }
}

}  // namespace

FormulaPtr random_formula(Rng& rng, const std::vector<Predicate>& preds,
                          const SampleConfig& cfg) {
  std::uniform_int_distribution<int> depth_pick(1, cfg.max_depth);
  FormulaPtr f = gen(rng, preds, depth_pick(rng), cfg.horizon, cfg.allow_until,
                     cfg.allow_not);
  return f;
}

Trajectory random_trajectory(Rng& rng, int n, int m, int T, double scale) {
  std::uniform_real_distribution<double> uni(-scale, scale);
  Trajectory traj;
  traj.T = T;
  traj.states = Mat(n, T + 1);
  traj.inputs = Mat::Zero(m, T + 1);
  for (int t = 0; t <= T; ++t)
    for (int i = 0; i < n; ++i) traj.states(i, t) = uni(rng);
  return traj;
}

Vec random_simplex(Rng& rng, int m) {
  std::exponential_distribution<double> expo(1.0);
  Vec lam(m);
  for (int i = 0; i < m; ++i) lam[i] = expo(rng);
  lam /= lam.sum();
  return lam;
}

}  // namespace stlopt
