#pragma once

#include "stlopt/assemble.hpp"

#include <map>
#include <optional>

namespace stlopt {

/* Linear time-invariant dynamics x_{t+1} = A x + B u. */
class LtiDynamics : public Dynamics {
public:
  LtiDynamics(Mat A, Mat B) : A_(std::move(A)), B_(std::move(B)) {
    if (A_.rows() != A_.cols() || A_.rows() != B_.rows())
      throw std::invalid_argument("LtiDynamics: inconsistent dimensions");
  }
  int state_dim() const override { return static_cast<int>(A_.rows()); }
  int input_dim() const override { return static_cast<int>(B_.cols()); }
  Vec step(const Vec& x, const Vec& u) const override { return A_ * x + B_ * u; }
  Mat jac_state(const Vec&, const Vec&) const override { return A_; }
  Mat jac_input(const Vec&, const Vec&) const override { return B_; }
  bool is_affine() const override { return true; }
  const Mat& A() const { return A_; }
  const Mat& B() const { return B_; }

private:
  Mat A_, B_;
};

/* Planar double integrator: positions += velocities, velocities += inputs. */
LtiDynamics double_integrator();

/* Euler-discretized kinematic unicycle with state (px, py, theta) and
 * input (v, omega). */
class UnicycleDynamics : public Dynamics {
public:
  explicit UnicycleDynamics(double dt) : dt_(dt) {
    if (dt <= 0) throw std::invalid_argument("UnicycleDynamics: dt must be positive");
  }
  int state_dim() const override { return 3; }
  int input_dim() const override { return 2; }
  Vec step(const Vec& x, const Vec& u) const override;
  Mat jac_state(const Vec& x, const Vec& u) const override;
  Mat jac_input(const Vec& x, const Vec& u) const override;
  double dt() const { return dt_; }

private:
  double dt_;
};

/* h = r^2 - |p - c|^2 when inside, the negation otherwise; p is the first
 * two state components. */
Predicate circle_predicate(const std::string& name, const Vec& center,
                           double radius, bool inside = true);

/* h = normal' p - offset over the leading state components. */
Predicate halfplane_predicate(const std::string& name, const Vec& normal,
                              double offset);

/* Declarative predicate description, kept for scenario file round trips. */
struct PredicateSpec {
  std::string name;
  std::string type;  // "circle" | "halfplane"
  Vec center;        // circle
  double radius = 0; // circle
  bool inside = true;
  Vec normal;        // halfplane
  double offset = 0; // halfplane

  Predicate materialize() const;
};

struct Scenario {
  std::string name;
  std::shared_ptr<Dynamics> dynamics;
  std::string dynamics_type;  // "double_integrator" | "unicycle" | "lti"
  double dt = 0.0;            // unicycle only
  int T = 0;
  Vec x0;
  Weights weights;
  Box state_box, input_box;
  std::vector<PredicateSpec> predicates;
  std::string formula_text;
  std::optional<Mat> reference_inputs;  // m x (T+1) warm-start schedule

  Predicate lookup(const std::string& pred_name) const;
  FormulaPtr formula() const;  // parsed against the named predicates
  /* Rolls an input schedule through the dynamics from x0. */
  Trajectory rollout(const Mat& inputs) const;
  /* Reference trajectory: rollout of reference_inputs, or of zeros. */
  Trajectory reference_trajectory() const;
};

/* The four linear benchmarks (stand-in geometry; the published region
 * layouts are not part of this codebase) plus the nonlinear unicycle
 * case study. linear_T applies to the linear scenarios only. */
std::vector<Scenario> builtin_scenarios(int linear_T = 25);

/* Builds one builtin by name; throws std::out_of_range on unknown names.
 * Names: two-target, many-target, narrow-passage, door-puzzle, nonlinear. */
Scenario builtin_scenario(const std::string& name, int linear_T = 25);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

}  // namespace stlopt
