#include "stlopt/solver.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <deque>
#include <cstdio>
#include <cstdlib>

namespace stlopt {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Feasible: return "feasible";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::MaxIter: return "max_iter";
  }
  return "unknown";
}

namespace {

struct AlState {
  const NlpProblem& p;
  Vec mu;   // equality multipliers
  Vec nu;   // inequality multipliers (>= 0)
  double penalty;

  double value_grad(const Vec& z, Vec& g) const {
    g.setZero();
    double val = p.objective.eval(z);
    p.objective.accumulate_grad(z, 1.0, g);
    for (size_t i = 0; i < p.eq.size(); ++i) {
      double c = p.eq[i].eval(z);
      val += mu[static_cast<Eigen::Index>(i)] * c + 0.5 * penalty * c * c;
      p.eq[i].accumulate_grad(
          z, mu[static_cast<Eigen::Index>(i)] + penalty * c, g);
    }
    for (size_t i = 0; i < p.ineq.size(); ++i) {
      double gv = p.ineq[i].eval(z);
      double t = std::max(0.0, nu[static_cast<Eigen::Index>(i)] - penalty * gv);
      val += (t * t - nu[static_cast<Eigen::Index>(i)] *
                          nu[static_cast<Eigen::Index>(i)]) /
             (2.0 * penalty);
      if (t > 0.0) p.ineq[i].accumulate_grad(z, -t, g);
    }
    return val;
  }

  double value(const Vec& z) const {
    double val = p.objective.eval(z);
    for (size_t i = 0; i < p.eq.size(); ++i) {
      double c = p.eq[i].eval(z);
      val += mu[static_cast<Eigen::Index>(i)] * c + 0.5 * penalty * c * c;
    }
    for (size_t i = 0; i < p.ineq.size(); ++i) {
      double gv = p.ineq[i].eval(z);
      double t = std::max(0.0, nu[static_cast<Eigen::Index>(i)] - penalty * gv);
      val += (t * t - nu[static_cast<Eigen::Index>(i)] *
                          nu[static_cast<Eigen::Index>(i)]) /
             (2.0 * penalty);
    }
    return val;
  }
};

Vec project(const Vec& z, const VarSpace& vs) {
  return z.cwiseMax(vs.lower).cwiseMin(vs.upper);
}

double proj_grad_norm(const Vec& z, const Vec& g, const VarSpace& vs) {
  return (z - project(z - g, vs)).lpNorm<Eigen::Infinity>();
}

/* Bound-constrained spectral projected gradient (Barzilai-Borwein step
 * with nonmonotone Armijo backtracking). The search direction
 * P(z - alpha g) - z is a guaranteed descent direction, which keeps the
 * method stable on the piecewise-quadratic augmented Lagrangian whose
 * curvature jumps at every constraint-activation kink. Returns iterations
 * used; `fail` is set when no descent step was found. */
int spg_inner(const AlState& al, const VarSpace& vs, Vec& z, double tol,
              int max_iter, bool& fail) {
  const bool debug = std::getenv("STLOPT_DEBUG") != nullptr;
  const double alpha_min = 1e-10, alpha_max = 1e10;
  const int nonmonotone_window = 10;
  std::deque<double> f_hist;
  Vec g(z.size()), g_new(z.size());
  double fz = al.value_grad(z, g);
  f_hist.push_back(fz);
  double alpha = 1.0 / std::max(1e-8, proj_grad_norm(z, g, vs));
  alpha = std::min(std::max(alpha, alpha_min), alpha_max);
  fail = false;
  int it = 0;
  double last_step = 0.0;
  for (; it < max_iter; ++it) {
    if (proj_grad_norm(z, g, vs) <= tol) break;
    Vec d = project(z - alpha * g, vs) - z;
    double slope = g.dot(d);
    if (slope >= 0.0) {
      // alpha too small to move off the bound face; reset it
      alpha = std::min(1.0, alpha_max);
      d = project(z - alpha * g, vs) - z;
      slope = g.dot(d);
      if (slope >= 0.0) break;  // projected-stationary
    }
    double f_ref = *std::max_element(f_hist.begin(), f_hist.end());
    double lambda = 1.0;
    bool accepted = false;
    Vec z_new;
    double f_new = 0.0;
    for (int ls = 0; ls < 60; ++ls) {
      z_new = z + lambda * d;
      f_new = al.value(z_new);
      if (std::isfinite(f_new) && f_new <= f_ref + 1e-4 * lambda * slope) {
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) {
      fail = true;
      break;
    }
    last_step = lambda;
    f_new = al.value_grad(z_new, g_new);
    Vec s = z_new - z;
    Vec y = g_new - g;
    double sy = s.dot(y);
    alpha = sy > 0.0 ? std::min(std::max(s.dot(s) / sy, alpha_min), alpha_max)
                     : alpha_max;
    z = z_new;
    g = g_new;
    fz = f_new;
    f_hist.push_back(fz);
    if (static_cast<int>(f_hist.size()) > nonmonotone_window)
      f_hist.pop_front();
  }
  if (debug)
    std::fprintf(stderr, "  inner: it=%d last_step=%.2e pgn=%.3e f=%.8f\n",
                 it, last_step, proj_grad_norm(z, g, vs), fz);
  return it;
}

}  // namespace

SolveReport solve(const NlpProblem& p, const Vec& init,
                  const SolveOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  const VarSpace& vs = p.vars;
  if (init.size() != vs.size())
    throw std::invalid_argument("solve: init size mismatch");
  Vec z = project(init, vs);
  if (!std::isfinite(p.objective.eval(z)))
    throw std::invalid_argument("solve: non-finite objective at init");

  AlState al{p, Vec::Zero(static_cast<Eigen::Index>(p.eq.size())),
             Vec::Zero(static_cast<Eigen::Index>(p.ineq.size())),
             opts.init_penalty};

  auto violation = [&](const Vec& pt) {
    double v = 0.0;
    for (const auto& c : p.eq) v = std::max(v, std::abs(c.eval(pt)));
    for (const auto& gfun : p.ineq) v = std::max(v, -gfun.eval(pt));
    return v;
  };
  auto kkt = [&](const Vec& pt) {
    Vec g = Vec::Zero(pt.size());
    p.objective.accumulate_grad(pt, 1.0, g);
    for (size_t i = 0; i < p.eq.size(); ++i)
      p.eq[i].accumulate_grad(pt, al.mu[static_cast<Eigen::Index>(i)], g);
    for (size_t i = 0; i < p.ineq.size(); ++i)
      if (al.nu[static_cast<Eigen::Index>(i)] > 0.0)
        p.ineq[i].accumulate_grad(pt, -al.nu[static_cast<Eigen::Index>(i)], g);
    return proj_grad_norm(pt, g, vs);
  };

  const bool debug = std::getenv("STLOPT_DEBUG") != nullptr;
  SolveReport rep;
  // classic augmented-Lagrangian schedules: the feasibility target eta and
  // the inner tolerance follow powers of the penalty, so the subproblem is
  // never asked for more accuracy than the current penalty supports
  double inner_tol = 1.0 / al.penalty;
  double eta = std::pow(al.penalty, -0.1);
  double best_viol = std::numeric_limits<double>::infinity();
  // best feasible iterate seen so far, by true objective; a feasible
  // initial point is the incumbent, so the result never regresses below it
  Vec best_z;
  double best_obj = std::numeric_limits<double>::infinity();
  if (violation(z) <= opts.feas_tol) {
    best_obj = p.objective.eval(z);
    best_z = z;
  }
  int stall = 0;
  bool line_search_failed = false;
  for (int outer = 0; outer < opts.max_outer; ++outer) {
    bool fail = false;
    rep.inner_iterations +=
        spg_inner(al, vs, z, std::max(inner_tol, opts.kkt_tol * 0.5),
                    opts.max_inner, fail);
    rep.outer_iterations = outer + 1;
    double viol = violation(z);
    if (viol <= opts.feas_tol) {
      double obj = p.objective.eval(z);
      if (obj < best_obj) {
        best_obj = obj;
        best_z = z;
      }
    }
    if (debug) {
      Vec gdbg(z.size());
      al.value_grad(z, gdbg);
      std::fprintf(stderr,
                   "outer %3d: viol=%.3e pen=%.1e pgn(AL)=%.3e kkt=%.3e "
                   "obj=%.6f fail=%d\n",
                   outer, viol, al.penalty, proj_grad_norm(z, gdbg, vs),
                   kkt(z), p.objective.eval(z), static_cast<int>(fail));
    }

    if (viol <= std::max(eta, opts.feas_tol)) {
      // multiplier update
      for (size_t i = 0; i < p.eq.size(); ++i)
        al.mu[static_cast<Eigen::Index>(i)] +=
            al.penalty * p.eq[i].eval(z);
      for (size_t i = 0; i < p.ineq.size(); ++i)
        al.nu[static_cast<Eigen::Index>(i)] = std::max(
            0.0, al.nu[static_cast<Eigen::Index>(i)] -
                     al.penalty * p.ineq[i].eval(z));
      eta = std::max(opts.feas_tol * 0.1, eta * std::pow(al.penalty, -0.9));
      inner_tol = std::max(opts.kkt_tol * 0.5, inner_tol / al.penalty);
    } else {
      al.penalty = std::min(al.penalty * 10.0, 1e10);
      eta = std::max(opts.feas_tol * 0.1, 0.1 * std::pow(al.penalty, -0.1));
      inner_tol = std::max(opts.kkt_tol * 0.5, 1.0 / al.penalty);
    }

    double res = kkt(z);
    if (viol <= opts.feas_tol && res <= opts.kkt_tol) {
      rep.status = SolveStatus::Optimal;
      rep.kkt_residual = res;
      rep.max_violation = viol;
      break;
    }
    if (viol < best_viol - 1e-10) {
      best_viol = viol;
      stall = 0;
    } else {
      ++stall;
    }
    rep.kkt_residual = res;
    rep.max_violation = viol;
    // An inner line-search failure is not fatal: the multiplier/penalty
    // update reshapes the subproblem, which often unsticks it. The stall
    // counter bounds how long this can go on.
    if (fail) {
      line_search_failed = true;
      ++stall;
    }
    // Only declare infeasibility when progress has stopped far from the
    // tolerance; hovering within a few orders of it is still convergence.
    if (stall >= 5 && viol > 1e3 * opts.feas_tol && best_z.size() == 0) {
      rep.status = SolveStatus::Infeasible;
      rep.diagnostic = "stalled with constraint violation above tolerance";
      break;
    }
    auto now = std::chrono::steady_clock::now();
    if (std::chrono::duration<double>(now - t0).count() > opts.timeout_s) {
      rep.diagnostic = "timeout";
      break;
    }
  }

  if (rep.status != SolveStatus::Optimal &&
      rep.status != SolveStatus::Infeasible) {
    // fall back to the best feasible iterate if the final one drifted
    if (best_z.size() > 0 &&
        (violation(z) > opts.feas_tol || p.objective.eval(z) > best_obj))
      z = best_z;
    rep.max_violation = violation(z);
    if (rep.max_violation <= opts.feas_tol)
      rep.status = SolveStatus::Feasible;
    else if (line_search_failed)
      rep.status = SolveStatus::MaxIter;
    else
      rep.status = stall >= 5 ? SolveStatus::Infeasible : SolveStatus::MaxIter;
    if (line_search_failed && rep.diagnostic.empty())
      rep.diagnostic = "line search failed to find a descent step";
  }
  rep.objective = p.objective.eval(z);
  rep.point = z;
  rep.wall_time_s = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  return rep;
}

}  // namespace stlopt
