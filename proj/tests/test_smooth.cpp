#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "stlopt/sampling.hpp"
#include "stlopt/smooth.hpp"

using namespace stlopt;
using namespace stlopt::testhelpers;

static Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

TEST_CASE("smooth_max values") {
  CHECK(smooth_max(v2(0, 0), 1.0) == doctest::Approx(0.0).epsilon(1e-14));
  // [1, 0], k=1: (1*e + 0) / (e + 1)
  double e = std::exp(1.0);
  CHECK(smooth_max(v2(1, 0), 1.0) == doctest::Approx(e / (e + 1)).epsilon(1e-12));
  Vec single(1);
  single << -3.7;
  CHECK(smooth_max(single, 5.0) == -3.7);
  CHECK_THROWS_AS(smooth_max(Vec(0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(smooth_max(v2(1, 0), 0.0), std::invalid_argument);
}

TEST_CASE("smooth_min values") {
  CHECK(smooth_min(v2(0, 0), 1.0) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-12));
  CHECK(smooth_min(v2(1, 0), 1.0) ==
        doctest::Approx(-std::log(1.0 + std::exp(-1.0))).epsilon(1e-12));
  Vec single(1);
  single << 2.5;
  CHECK(smooth_min(single, 0.1) == 2.5);
  CHECK_THROWS_AS(smooth_min(Vec(0), 1.0), std::invalid_argument);
}

TEST_CASE("overflow safety at huge magnitudes") {
  Vec big = v2(1e4, -1e4);
  CHECK(std::isfinite(smooth_max(big, 25.0)));
  CHECK(std::isfinite(smooth_min(big, 25.0)));
  CHECK(smooth_max(big, 25.0) <= 1e4);
  CHECK(smooth_min(big, 25.0) <= -1e4);
}

TEST_CASE("error_lower_bounds on the worked examples") {
  auto lb = error_lower_bounds(v2(1, 0), 1.0);
  double e = std::exp(1.0);
  CHECK(lb.lb_max == doctest::Approx(1.0 / (e + 1)).epsilon(1e-12));
  CHECK(lb.lb_min == doctest::Approx(std::log(1 + std::exp(-1.0))).epsilon(1e-12));
  // equality of bound and error at m = 2
  CHECK(1.0 - smooth_max(v2(1, 0), 1.0) == doctest::Approx(lb.lb_max).epsilon(1e-12));
  CHECK(0.0 - smooth_min(v2(1, 0), 1.0) == doctest::Approx(lb.lb_min).epsilon(1e-12));

  auto eq = error_lower_bounds(v2(5, 5), 2.0);
  CHECK(eq.lb_max == 0.0);
  CHECK(eq.lb_min == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));

  Vec one(1);
  one << 1.0;
  CHECK_THROWS_AS(error_lower_bounds(one, 1.0), std::invalid_argument);
}

TEST_CASE("property: under-approximation and lemma bounds") {
  Rng rng(31);
  std::uniform_int_distribution<int> size_pick(2, 8);
  std::uniform_real_distribution<double> entry(-10.0, 10.0);
  const double ks[] = {0.5, 1.0, 5.0, 25.0};
  for (int i = 0; i < 10000; ++i) {
    int m = size_pick(rng);
    Vec a(m);
    for (int j = 0; j < m; ++j) a[j] = entry(rng);
    double k = ks[static_cast<size_t>(i) % 4];
    double dmax = a.maxCoeff() - smooth_max(a, k);
    double dmin = a.minCoeff() - smooth_min(a, k);
    CHECK(dmax >= -1e-12);
    CHECK(dmin >= 0.0);
    // strict positivity is only representable while e^{-k gap} > ulp
    std::vector<double> sorted(a.data(), a.data() + m);
    std::sort(sorted.begin(), sorted.end());
    if (k * (sorted[1] - sorted[0]) <= 25.0) CHECK(dmin > 0.0);
    auto lb = error_lower_bounds(a, k);
    CHECK(dmax >= lb.lb_max - 1e-12);
    CHECK(dmin >= lb.lb_min - 1e-12);
  }
}

TEST_CASE("property: permutation invariance of the smooth operators") {
  Rng rng(37);
  std::uniform_real_distribution<double> entry(-5.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    Vec a(5);
    for (int j = 0; j < 5; ++j) a[j] = entry(rng);
    Vec b = a.reverse();
    CHECK(smooth_max(a, 2.0) == doctest::Approx(smooth_max(b, 2.0)).epsilon(1e-14));
    CHECK(smooth_min(a, 2.0) == doctest::Approx(smooth_min(b, 2.0)).epsilon(1e-14));
  }
}

TEST_CASE("smooth_robustness: single leaf matches eval_tree") {
  auto f = make_pred(coord_pred("mu", 0));
  TreePtr t = build_tree(*f, 0);
  Trajectory x = traj1({0.5});
  CHECK(smooth_robustness(*t, x, 25.0) == eval_tree(*t, x));
}

TEST_CASE("smooth_robustness: min node of equal values") {
  auto f = make_and({make_pred(coord_pred("a", 0)),
                     make_pred(coord_pred("b", 1))});
  TreePtr t = build_tree(*f, 0);
  Trajectory x = traj2({0.0}, {0.0});
  CHECK(smooth_robustness(*t, x, 1.0) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("property: smooth robustness under-approximates the tree value") {
  Rng rng(41);
  SampleConfig cfg;
  cfg.allow_not = false;
  auto preds = random_predicates(rng, cfg);
  const double ks[] = {0.5, 1.0, 5.0, 25.0};
  for (int i = 0; i < 1000; ++i) {
    auto f = random_formula(rng, preds, cfg);
    Trajectory x = random_trajectory(rng, cfg.state_dim, 1, cfg.horizon);
    TreePtr t = flatten(build_tree(*f, 0));
    double k = ks[static_cast<size_t>(i) % 4];
    CHECK(smooth_robustness(*t, x, k) <= eval_tree(*t, x) + 1e-12);
  }
}

TEST_CASE("smooth_robustness_grad matches finite differences") {
  Rng rng(43);
  SampleConfig cfg;
  cfg.allow_not = false;
  auto preds = random_predicates(rng, cfg);
  for (int i = 0; i < 20; ++i) {
    auto f = random_formula(rng, preds, cfg);
    Trajectory x = random_trajectory(rng, cfg.state_dim, 1, cfg.horizon);
    TreePtr t = flatten(build_tree(*f, 0));
    Mat g;
    smooth_robustness_grad(*t, x, 5.0, g);
    for (int trial = 0; trial < 5; ++trial) {
      std::uniform_int_distribution<int> row(0, cfg.state_dim - 1),
          col(0, x.T);
      int r = row(rng), c = col(rng);
      Trajectory xp = x, xm = x;
      xp.states(r, c) += 1e-6;
      xm.states(r, c) -= 1e-6;
      double fd = (smooth_robustness(*t, xp, 5.0) -
                   smooth_robustness(*t, xm, 5.0)) / 2e-6;
      CHECK(std::abs(fd - g(r, c)) <= 1e-5 * std::max(1.0, std::abs(g(r, c))));
    }
  }
}
