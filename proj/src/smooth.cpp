#include "stlopt/smooth.hpp"

#include <cmath>

namespace stlopt {

static void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double smooth_max(const Vec& a, double k) {
  require(a.size() > 0, "smooth_max: empty vector");
  require(k > 0, "smooth_max: k must be positive");
  double shift = a.maxCoeff();
  double num = 0.0, den = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double w = std::exp(k * (a[i] - shift));
    num += a[i] * w;
    den += w;
  }
  return num / den;
}

double smooth_min(const Vec& a, double k) {
  require(a.size() > 0, "smooth_min: empty vector");
  require(k > 0, "smooth_min: k must be positive");
  // Sum the shifted exponentials as 1 + rest and use log1p so the strict
  // under-approximation survives in floating point even when the rest is
  // far below machine epsilon.
  Eigen::Index argmin = 0;
  double shift = a.minCoeff(&argmin);
  double rest = 0.0;  // all terms except the (exactly 1) argmin term
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (i != argmin) rest += std::exp(-k * (a[i] - shift));
  return shift - std::log1p(rest) / k;
}

ErrorLowerBounds error_lower_bounds(const Vec& a, double k) {
  require(a.size() >= 2, "error_lower_bounds: need at least two entries");
  require(k > 0, "error_lower_bounds: k must be positive");
  const Eigen::Index m = a.size();
  std::vector<double> s(a.data(), a.data() + m);
  std::sort(s.begin(), s.end(), std::greater<double>());

  Eigen::Index r = 1;
  while (r < m && s[static_cast<size_t>(r)] == s[0]) ++r;
  Eigen::Index smin = 1;
  while (smin < m && s[static_cast<size_t>(m - 1 - smin)] == s[static_cast<size_t>(m - 1)])
    ++smin;

  // softmax weights, shifted by the max entry
  double den = 0.0;
  std::vector<double> w(static_cast<size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    w[static_cast<size_t>(i)] = std::exp(k * (s[static_cast<size_t>(i)] - s[0]));
    den += w[static_cast<size_t>(i)];
  }

  double lb_max = 0.0;
  if (r < m) {
    double tail = 0.0;
    for (Eigen::Index i = r; i < m; ++i) tail += w[static_cast<size_t>(i)] / den;
    lb_max = (s[0] - s[static_cast<size_t>(r)]) * tail;
  }

  double amin = s[static_cast<size_t>(m - 1)];
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m - smin; ++i)
    sum += std::exp(-k * (s[static_cast<size_t>(i)] - amin));
  double lb_min = std::log1p(static_cast<double>(smin - 1) + sum) / k;

  return {lb_max, lb_min};
}

double smooth_robustness(const TreeNode& root, const Trajectory& x, double k) {
  switch (root.kind) {
    case TreeNode::Leaf:
      return root.pred.h(x.states.col(root.time));
    case TreeNode::Min:
    case TreeNode::Max: {
      Vec vals(static_cast<Eigen::Index>(root.children.size()));
      for (size_t i = 0; i < root.children.size(); ++i)
        vals[static_cast<Eigen::Index>(i)] =
            smooth_robustness(*root.children[i], x, k);
      return root.kind == TreeNode::Min ? smooth_min(vals, k)
                                        : smooth_max(vals, k);
    }
  }
  throw std::logic_error("unreachable");
}

/* Reverse sweep: `weight` is d(root value)/d(this node value). */
static double grad_impl(const TreeNode& n, const Trajectory& x, double k,
                        double weight, Mat& dstates) {
  if (n.kind == TreeNode::Leaf) {
    double v = n.pred.h(x.states.col(n.time));
    dstates.col(n.time) += weight * n.pred.grad(x.states.col(n.time));
    return v;
  }
  const size_t m = n.children.size();
  Vec vals(static_cast<Eigen::Index>(m));
  // First pass without gradient to get child values for the local weights.
  for (size_t i = 0; i < m; ++i)
    vals[static_cast<Eigen::Index>(i)] =
        smooth_robustness(*n.children[i], x, k);

  Vec dv(static_cast<Eigen::Index>(m));
  double value;
  if (n.kind == TreeNode::Min) {
    double shift = vals.minCoeff();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < vals.size(); ++i)
      sum += std::exp(-k * (vals[i] - shift));
    value = shift - std::log(sum) / k;
    for (Eigen::Index i = 0; i < vals.size(); ++i)
      dv[i] = std::exp(-k * (vals[i] - shift)) / sum;
  } else {
    double shift = vals.maxCoeff();
    double num = 0.0, den = 0.0;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
      double w = std::exp(k * (vals[i] - shift));
      num += vals[i] * w;
      den += w;
    }
    value = num / den;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
      double w = std::exp(k * (vals[i] - shift)) / den;
      dv[i] = w * (1.0 + k * (vals[i] - value));
    }
  }
  for (size_t i = 0; i < m; ++i)
    grad_impl(*n.children[i], x, k,
              weight * dv[static_cast<Eigen::Index>(i)], dstates);
  return value;
}

double smooth_robustness_grad(const TreeNode& root, const Trajectory& x,
                              double k, Mat& dstates) {
  dstates = Mat::Zero(x.states.rows(), x.states.cols());
  return grad_impl(root, x, k, 1.0, dstates);
}

}  // namespace stlopt
