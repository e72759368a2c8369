#pragma once

#include "stlopt/formula.hpp"

namespace stlopt {

/* Scalar differentiable function over a sparse subset of the decision
 * variables. `value`/`gradient` take the local vector gathered from
 * `vars` (global indices, in order). */
struct DiffFunction {
  std::string name;
  std::vector<int> vars;
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;

  double eval(const Vec& z) const {
    Vec local(static_cast<Eigen::Index>(vars.size()));
    for (size_t i = 0; i < vars.size(); ++i)
      local[static_cast<Eigen::Index>(i)] = z[vars[i]];
    return value(local);
  }
  void accumulate_grad(const Vec& z, double weight, Vec& g) const {
    Vec local(static_cast<Eigen::Index>(vars.size()));
    for (size_t i = 0; i < vars.size(); ++i)
      local[static_cast<Eigen::Index>(i)] = z[vars[i]];
    Vec gl = gradient(local);
    for (size_t i = 0; i < vars.size(); ++i)
      g[vars[i]] += weight * gl[static_cast<Eigen::Index>(i)];
  }
};

/* Central finite-difference check of the gradient at a local point.
 * Steps are 1e-6 * (1 + |x_i|) per coordinate unless overridden.
 * Returns the max relative error over coordinates. */
double fd_check(const DiffFunction& f, const Vec& local_point,
                double step = 0.0);

/* Ordered decision variables with bounds and named groups:
 * states x_0..x_T, inputs u_0..u_T, then rho and lambda auxiliaries. */
struct VarSpace {
  int n = 0, m = 0, T = 0;
  int num_rho = 0, num_lambda = 0;
  Vec lower, upper;

  int size() const { return n * (T + 1) + m * (T + 1) + num_rho + num_lambda; }
  int x_index(int t, int i) const { return t * n + i; }
  int u_index(int t, int i) const { return n * (T + 1) + t * m + i; }
  int rho_index(int node) const { return (n + m) * (T + 1) + node; }
  int lambda_index(int k) const { return (n + m) * (T + 1) + num_rho + k; }

  Trajectory trajectory(const Vec& z) const {
    Trajectory traj;
    traj.T = T;
    traj.states = Mat(n, T + 1);
    traj.inputs = Mat(m, T + 1);
    for (int t = 0; t <= T; ++t)
      for (int i = 0; i < n; ++i) traj.states(i, t) = z[x_index(t, i)];
    for (int t = 0; t <= T; ++t)
      for (int i = 0; i < m; ++i) traj.inputs(i, t) = z[u_index(t, i)];
    return traj;
  }
};

struct NlpProblem {
  VarSpace vars;
  DiffFunction objective;               // dense over all variables
  std::vector<DiffFunction> eq;         // c(z) == 0
  std::vector<DiffFunction> ineq;       // g(z) >= 0
};

}  // namespace stlopt
