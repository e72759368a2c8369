#include "stlopt/assemble.hpp"

namespace stlopt {

double quadratic_cost(const Weights& w, const Trajectory& traj) {
  double c = 0.0;
  for (int t = 0; t <= traj.T; ++t) {
    c += traj.states.col(t).dot(w.Q * traj.states.col(t));
    c += traj.inputs.col(t).dot(w.R * traj.inputs.col(t));
  }
  return c;
}

namespace {

VarSpace make_var_space(const Dynamics& dyn, int T, const Box& state_box,
                        const Box& input_box, int num_rho, int num_lambda) {
  VarSpace vs;
  vs.n = dyn.state_dim();
  vs.m = dyn.input_dim();
  vs.T = T;
  vs.num_rho = num_rho;
  vs.num_lambda = num_lambda;
  const double inf = std::numeric_limits<double>::infinity();
  vs.lower = Vec::Constant(vs.size(), -inf);
  vs.upper = Vec::Constant(vs.size(), inf);
  for (int t = 0; t <= T; ++t) {
    for (int i = 0; i < vs.n; ++i) {
      if (state_box.lower.size() > 0) {
        vs.lower[vs.x_index(t, i)] = state_box.lower[i];
        vs.upper[vs.x_index(t, i)] = state_box.upper[i];
      }
    }
    for (int i = 0; i < vs.m; ++i) {
      if (input_box.lower.size() > 0) {
        vs.lower[vs.u_index(t, i)] = input_box.lower[i];
        vs.upper[vs.u_index(t, i)] = input_box.upper[i];
      }
    }
  }
  for (int j = 0; j < num_lambda; ++j) {
    vs.lower[vs.lambda_index(j)] = 0.0;
    vs.upper[vs.lambda_index(j)] = 1.0;
  }
  return vs;
}

std::vector<int> state_vars(const VarSpace& vs, int t) {
  std::vector<int> ids(static_cast<size_t>(vs.n));
  for (int i = 0; i < vs.n; ++i) ids[static_cast<size_t>(i)] = vs.x_index(t, i);
  return ids;
}

void add_dynamics_constraints(const Dynamics& dyn, const VarSpace& vs,
                              std::vector<DiffFunction>& eq) {
  const int n = vs.n, m = vs.m;
  for (int t = 0; t < vs.T; ++t) {
    for (int row = 0; row < n; ++row) {
      DiffFunction c;
      c.name = "dyn[t=" + std::to_string(t) + ",row=" + std::to_string(row) + "]";
      // locals: x_t (n), u_t (m), x_{t+1}[row]
      for (int i = 0; i < n; ++i) c.vars.push_back(vs.x_index(t, i));
      for (int i = 0; i < m; ++i) c.vars.push_back(vs.u_index(t, i));
      c.vars.push_back(vs.x_index(t + 1, row));
      const Dynamics* d = &dyn;
      c.value = [d, n, m, row](const Vec& local) {
        Vec x = local.head(n), u = local.segment(n, m);
        return d->step(x, u)[row] - local[n + m];
      };
      c.gradient = [d, n, m, row](const Vec& local) {
        Vec x = local.head(n), u = local.segment(n, m);
        Vec g(n + m + 1);
        g.head(n) = d->jac_state(x, u).row(row);
        g.segment(n, m) = d->jac_input(x, u).row(row);
        g[n + m] = -1.0;
        return g;
      };
      eq.push_back(std::move(c));
    }
  }
}

void add_initial_state_constraints(const Vec& x0, const VarSpace& vs,
                                   std::vector<DiffFunction>& eq) {
  for (int i = 0; i < vs.n; ++i) {
    DiffFunction c;
    c.name = "x0[" + std::to_string(i) + "]";
    c.vars = {vs.x_index(0, i)};
    double v = x0[i];
    c.value = [v](const Vec& local) { return local[0] - v; };
    c.gradient = [](const Vec&) { return Vec::Ones(1); };
    eq.push_back(std::move(c));
  }
}

DiffFunction quadratic_objective(const Weights& w, const VarSpace& vs,
                                 int rho_root_var) {
  DiffFunction f;
  f.name = "objective";
  f.vars.resize(static_cast<size_t>(vs.size()));
  for (int i = 0; i < vs.size(); ++i) f.vars[static_cast<size_t>(i)] = i;
  VarSpace vsc = vs;
  Weights wc = w;
  f.value = [vsc, wc, rho_root_var](const Vec& z) {
    Trajectory traj = vsc.trajectory(z);
    double val = quadratic_cost(wc, traj);
    if (rho_root_var >= 0) val -= wc.alpha * z[rho_root_var];
    return val;
  };
  f.gradient = [vsc, wc, rho_root_var](const Vec& z) {
    Vec g = Vec::Zero(z.size());
    for (int t = 0; t <= vsc.T; ++t) {
      Vec x(vsc.n), u(vsc.m);
      for (int i = 0; i < vsc.n; ++i) x[i] = z[vsc.x_index(t, i)];
      for (int i = 0; i < vsc.m; ++i) u[i] = z[vsc.u_index(t, i)];
      Vec gx = 2.0 * (wc.Q * x), gu = 2.0 * (wc.R * u);
      for (int i = 0; i < vsc.n; ++i) g[vsc.x_index(t, i)] += gx[i];
      for (int i = 0; i < vsc.m; ++i) g[vsc.u_index(t, i)] += gu[i];
    }
    if (rho_root_var >= 0) g[rho_root_var] -= wc.alpha;
    return g;
  };
  return f;
}

}  // namespace

NlpProblem assemble(const Dynamics& dyn, const Vec& x0, int T,
                    const Weights& w, const Box& state_box,
                    const Box& input_box, const Reformulation& reform) {
  if (x0.size() != dyn.state_dim())
    throw std::invalid_argument("assemble: x0 dimension mismatch");
  for (const TreeNode* n : reform.nodes)
    if (n->kind == TreeNode::Leaf && n->time > T)
      throw std::invalid_argument("assemble: formula horizon exceeds T");

  NlpProblem p;
  p.vars = make_var_space(dyn, T, state_box, input_box, reform.num_nodes(),
                          reform.num_lambda);
  const VarSpace& vs = p.vars;
  p.objective = quadratic_objective(w, vs, vs.rho_index(reform.root_id()));
  add_dynamics_constraints(dyn, vs, p.eq);
  add_initial_state_constraints(x0, vs, p.eq);

  for (const auto& c : reform.constraints) {
    const TreeNode& node = *reform.nodes[static_cast<size_t>(c.node)];
    const auto& kids = reform.children[static_cast<size_t>(c.node)];
    switch (c.kind) {
      case ReformConstraint::LeafLower: {
        DiffFunction g;
        g.name = "leaf[" + node.pred.name + ",t=" + std::to_string(node.time) + "]";
        g.vars = state_vars(vs, node.time);
        g.vars.push_back(vs.rho_index(c.node));
        Predicate pred = node.pred;
        int n = vs.n;
        g.value = [pred, n](const Vec& local) {
          return pred.h(local.head(n)) - local[n];
        };
        g.gradient = [pred, n](const Vec& local) {
          Vec gr(n + 1);
          gr.head(n) = pred.grad(local.head(n));
          gr[n] = -1.0;
          return gr;
        };
        p.ineq.push_back(std::move(g));
        break;
      }
      case ReformConstraint::MinChild: {
        DiffFunction g;
        g.name = "min[" + std::to_string(c.node) + "<=" + std::to_string(c.child) + "]";
        g.vars = {vs.rho_index(c.child), vs.rho_index(c.node)};
        g.value = [](const Vec& local) { return local[0] - local[1]; };
        g.gradient = [](const Vec&) {
          Vec gr(2);
          gr << 1.0, -1.0;
          return gr;
        };
        p.ineq.push_back(std::move(g));
        break;
      }
      case ReformConstraint::SimplexNonneg:
        // enforced by the [0, 1] bounds on lambda variables
        break;
      case ReformConstraint::SimplexSum: {
        DiffFunction g;
        g.name = "simplex_sum[" + std::to_string(c.node) + "]";
        int off = reform.lambda_offset[static_cast<size_t>(c.node)];
        int m = static_cast<int>(kids.size());
        for (int j = 0; j < m; ++j) g.vars.push_back(vs.lambda_index(off + j));
        g.value = [](const Vec& local) { return local.sum() - 1.0; };
        g.gradient = [m](const Vec&) { return Vec(Vec::Ones(m)); };
        p.eq.push_back(std::move(g));
        break;
      }
      case ReformConstraint::MaxCombo: {
        DiffFunction g;
        g.name = "max_combo[" + std::to_string(c.node) + "]";
        int off = reform.lambda_offset[static_cast<size_t>(c.node)];
        int m = static_cast<int>(kids.size());
        for (int j = 0; j < m; ++j) g.vars.push_back(vs.lambda_index(off + j));
        for (int u : kids) g.vars.push_back(vs.rho_index(u));
        g.vars.push_back(vs.rho_index(c.node));
        g.value = [m](const Vec& local) {
          return local.head(m).dot(local.segment(m, m)) - local[2 * m];
        };
        g.gradient = [m](const Vec& local) {
          Vec gr(2 * m + 1);
          gr.head(m) = local.segment(m, m);
          gr.segment(m, m) = local.head(m);
          gr[2 * m] = -1.0;
          return gr;
        };
        p.ineq.push_back(std::move(g));
        break;
      }
      case ReformConstraint::RootNonneg: {
        DiffFunction g;
        g.name = "root_nonneg";
        g.vars = {vs.rho_index(c.node)};
        g.value = [](const Vec& local) { return local[0]; };
        g.gradient = [](const Vec&) { return Vec(Vec::Ones(1)); };
        p.ineq.push_back(std::move(g));
        break;
      }
    }
  }
  return p;
}

NlpProblem assemble_smooth(const Dynamics& dyn, const Vec& x0, int T,
                           const Weights& w, const Box& state_box,
                           const Box& input_box, const TreePtr& tree,
                           double k) {
  if (k <= 0) throw std::invalid_argument("assemble_smooth: k must be positive");
  NlpProblem p;
  p.vars = make_var_space(dyn, T, state_box, input_box, 0, 0);
  const VarSpace& vs = p.vars;

  DiffFunction quad = quadratic_objective(w, vs, -1);
  TreePtr tr = tree;
  VarSpace vsc = vs;
  double alpha = w.alpha;
  auto rho_tilde = [tr, vsc, k](const Vec& z) {
    return smooth_robustness(*tr, vsc.trajectory(z), k);
  };
  auto rho_tilde_grad = [tr, vsc, k](const Vec& z) {
    Trajectory traj = vsc.trajectory(z);
    Mat dstates;
    smooth_robustness_grad(*tr, traj, k, dstates);
    Vec g = Vec::Zero(z.size());
    for (int t = 0; t <= vsc.T; ++t)
      for (int i = 0; i < vsc.n; ++i) g[vsc.x_index(t, i)] = dstates(i, t);
    return g;
  };

  p.objective.name = "objective_smooth";
  p.objective.vars = quad.vars;
  p.objective.value = [quad, rho_tilde, alpha](const Vec& z) {
    return quad.value(z) - alpha * rho_tilde(z);
  };
  p.objective.gradient = [quad, rho_tilde_grad, alpha](const Vec& z) {
    Vec g = quad.gradient(z);
    g -= alpha * rho_tilde_grad(z);
    return g;
  };

  add_dynamics_constraints(dyn, vs, p.eq);
  add_initial_state_constraints(x0, vs, p.eq);

  DiffFunction g;
  g.name = "smooth_robustness_nonneg";
  g.vars = quad.vars;
  g.value = rho_tilde;
  g.gradient = rho_tilde_grad;
  p.ineq.push_back(std::move(g));
  return p;
}

Vec initial_point(const NlpProblem& p, const Reformulation& reform,
                  const Trajectory& traj, bool uniform_lambda) {
  const VarSpace& vs = p.vars;
  Vec z = Vec::Zero(vs.size());
  for (int t = 0; t <= vs.T; ++t) {
    for (int i = 0; i < vs.n; ++i) z[vs.x_index(t, i)] = traj.states(i, t);
    for (int i = 0; i < vs.m; ++i) z[vs.u_index(t, i)] = traj.inputs(i, t);
  }
  ReformAssignment a = warm_start(reform, traj);
  for (int v = 0; v < reform.num_nodes(); ++v) z[vs.rho_index(v)] = a.rho[v];
  if (uniform_lambda) {
    for (int v = 0; v < reform.num_nodes(); ++v) {
      int off = reform.lambda_offset[static_cast<size_t>(v)];
      if (off < 0) continue;
      int m = static_cast<int>(reform.children[static_cast<size_t>(v)].size());
      for (int j = 0; j < m; ++j)
        z[vs.lambda_index(off + j)] = 1.0 / static_cast<double>(m);
    }
  } else {
    for (int j = 0; j < reform.num_lambda; ++j)
      z[vs.lambda_index(j)] = a.lambda[j];
  }
  return z;
}

Vec initial_point_smooth(const NlpProblem& p, const Trajectory& traj) {
  const VarSpace& vs = p.vars;
  Vec z = Vec::Zero(vs.size());
  for (int t = 0; t <= vs.T; ++t) {
    for (int i = 0; i < vs.n; ++i) z[vs.x_index(t, i)] = traj.states(i, t);
    for (int i = 0; i < vs.m; ++i) z[vs.u_index(t, i)] = traj.inputs(i, t);
  }
  return z;
}

}  // namespace stlopt
