#pragma once

#include "stlopt/formula.hpp"

namespace stlopt::testhelpers {

/* Predicate reading one state coordinate: h(x) = x[i]. */
inline Predicate coord_pred(const std::string& name, int i) {
  Predicate p;
  p.name = name;
  p.h = [i](const Vec& x) { return x[i]; };
  p.grad = [i](const Vec& x) {
    Vec g = Vec::Zero(x.size());
    g[i] = 1.0;
    return g;
  };
  return p;
}

/* 1-d trajectory whose single state coordinate follows `values`. */
inline Trajectory traj1(const std::vector<double>& values) {
  Trajectory x;
  x.T = static_cast<int>(values.size()) - 1;
  x.states = Mat(1, x.T + 1);
  for (int t = 0; t <= x.T; ++t) x.states(0, t) = values[static_cast<size_t>(t)];
  x.inputs = Mat::Zero(1, x.T + 1);
  return x;
}

/* 2-row trajectory: coordinate 0 follows `a`, coordinate 1 follows `b`. */
inline Trajectory traj2(const std::vector<double>& a,
                        const std::vector<double>& b) {
  Trajectory x;
  x.T = static_cast<int>(a.size()) - 1;
  x.states = Mat(2, x.T + 1);
  for (int t = 0; t <= x.T; ++t) {
    x.states(0, t) = a[static_cast<size_t>(t)];
    x.states(1, t) = b[static_cast<size_t>(t)];
  }
  x.inputs = Mat::Zero(1, x.T + 1);
  return x;
}

inline PredicateLookup lookup_of(std::vector<Predicate> preds) {
  return [preds](const std::string& name) -> Predicate {
    for (const auto& p : preds)
      if (p.name == name) return p;
    throw std::out_of_range(name);
  };
}

}  // namespace stlopt::testhelpers
