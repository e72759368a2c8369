#pragma once

#include "stlopt/nlp.hpp"
#include "stlopt/reformulation.hpp"
#include "stlopt/smooth.hpp"

namespace stlopt {

struct Weights {
  double alpha = 1.0;
  Mat Q;  // n x n, symmetric PSD
  Mat R;  // m x m, symmetric PSD
};

struct Box {
  Vec lower, upper;  // elementwise; empty means unbounded
};

/* Discrete-time dynamics x_{t+1} = f(x_t, u_t) with exact Jacobians. */
class Dynamics {
public:
  virtual ~Dynamics() = default;
  virtual int state_dim() const = 0;
  virtual int input_dim() const = 0;
  virtual Vec step(const Vec& x, const Vec& u) const = 0;
  virtual Mat jac_state(const Vec& x, const Vec& u) const = 0;
  virtual Mat jac_input(const Vec& x, const Vec& u) const = 0;
  virtual bool is_affine() const { return false; }
};

/* Assembles the reformulated smooth NLP: objective
 * -alpha * rho_root + sum_t (x' Q x + u' R u), dynamics and x_0
 * equalities, box bounds, and every constraint of C as a smooth
 * equality/inequality. Lambda variables are bounded to [0, 1]; the
 * simplex nonnegativity is enforced through those bounds. */
NlpProblem assemble(const Dynamics& dyn, const Vec& x0, int T,
                    const Weights& w, const Box& state_box,
                    const Box& input_box, const Reformulation& reform);

/* Baseline NLP over (x, u) only: objective -alpha * smooth_robustness
 * + quadratic terms, with the smooth robustness >= 0 constraint. */
NlpProblem assemble_smooth(const Dynamics& dyn, const Vec& x0, int T,
                           const Weights& w, const Box& state_box,
                           const Box& input_box, const TreePtr& tree,
                           double k);

/* Full initial point: trajectory plus warm-start auxiliaries. When
 * uniform_lambda is set, each max node gets lambda = 1/m instead of the
 * argmax indicator. */
Vec initial_point(const NlpProblem& p, const Reformulation& reform,
                  const Trajectory& traj, bool uniform_lambda = false);

/* Initial point for the baseline problem (no auxiliaries). */
Vec initial_point_smooth(const NlpProblem& p, const Trajectory& traj);

/* Quadratic part of the objective: sum_t x_t' Q x_t + u_t' R u_t. */
double quadratic_cost(const Weights& w, const Trajectory& traj);

}  // namespace stlopt
