#pragma once

#include <cstdint>
#include <vector>

#include "fvddp/dataset.hpp"

namespace fvddp {

// Synthetic benchmark generator: a two-component Poisson mixture whose
// inverse means start at 5 and whose underlying rates mu_i, nu_i follow
// independent Exp(1) random walks across collection times,
//   Y ~ 1/2 Pois(1/mu_i) + 1/2 Pois(5 + 1/nu_i),  mu_0 = nu_0 = 0.2.
// Labels are the sampled integers as strings; deterministic per seed.
struct SimulateParams {
  double theta = 1.0;
  std::vector<double> times;
  std::vector<int> counts;
  uint64_t seed = 0;
};

Dataset simulate_dataset(const SimulateParams& params);

// Small positive integer theta drawn NegBin(2, 0.5), redrawn until nonzero;
// deterministic per seed.
double draw_theta_negbin(uint64_t seed);

}  // namespace fvddp
