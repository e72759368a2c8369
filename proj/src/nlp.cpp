#include "stlopt/nlp.hpp"

#include <cmath>

namespace stlopt {

double fd_check(const DiffFunction& f, const Vec& local_point, double step) {
  Vec g = f.gradient(local_point);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < local_point.size(); ++i) {
    double h = step > 0 ? step : 1e-6 * (1.0 + std::abs(local_point[i]));
    Vec p = local_point, q = local_point;
    p[i] += h;
    q[i] -= h;
    double fd = (f.value(p) - f.value(q)) / (2.0 * h);
    double err = std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i]));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace stlopt
