#pragma once

#include "stlopt/tree.hpp"

namespace stlopt {

/* Smooth under-approximation of max: sum(a_i e^{k a_i}) / sum(e^{k a_i}),
 * evaluated with exponents shifted by max(a). Result <= max(a). */
double smooth_max(const Vec& a, double k);

/* Smooth under-approximation of min: -(1/k) log sum(e^{-k a_i}),
 * evaluated with exponents shifted by min(a). Result <= min(a), strictly
 * so for two or more entries. */
double smooth_min(const Vec& a, double k);

struct ErrorLowerBounds {
  double lb_max;  // lower bound on max(a) - smooth_max(a, k)
  double lb_min;  // lower bound on min(a) - smooth_min(a, k)
};

/* Lower bounds on the approximation errors of smooth_max/smooth_min.
 * Requires at least two entries. */
ErrorLowerBounds error_lower_bounds(const Vec& a, double k);

/* Tree evaluation with smooth_max/smooth_min replacing exact max/min. */
double smooth_robustness(const TreeNode& root, const Trajectory& x, double k);

/* Smooth robustness together with its exact gradient with respect to the
 * state trajectory (same shape as x.states), via a reverse sweep. */
double smooth_robustness_grad(const TreeNode& root, const Trajectory& x,
                              double k, Mat& dstates);

}  // namespace stlopt
