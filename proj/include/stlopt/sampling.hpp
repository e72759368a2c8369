#pragma once

#include "stlopt/tree.hpp"

#include <random>

namespace stlopt {

using Rng = std::mt19937_64;

struct SampleConfig {
  int state_dim = 2;
  int max_depth = 4;
  int horizon = 20;      // generated formulas keep horizon within this
  int num_predicates = 6;
  bool allow_until = true;
  bool allow_not = true;
};

/* Pool of random affine predicates h = a'x + b with unique names. */
std::vector<Predicate> random_predicates(Rng& rng, const SampleConfig& cfg);

/* Random formula over the given predicates with horizon <= cfg.horizon.
 * Negations, when allowed, are only placed where NNF can remove them. */
FormulaPtr random_formula(Rng& rng, const std::vector<Predicate>& preds,
                          const SampleConfig& cfg);

Trajectory random_trajectory(Rng& rng, int n, int m, int T,
                             double scale = 5.0);

/* Random simplex point via normalized exponentials. */
Vec random_simplex(Rng& rng, int m);

}  // namespace stlopt
