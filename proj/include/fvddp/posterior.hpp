#pragma once

#include <string>
#include <vector>

#include "fvddp/rng.hpp"
#include "fvddp/state.hpp"

namespace fvddp {

// Next-draw probabilities: one entry per registered label plus the
// probability of an unseen type. Entries sum to 1.
struct PredictiveSummary {
  std::vector<double> per_type;
  double new_type = 0.0;
};

// Mixture average of the component urns:
//   per_type[k] = sum_m w_m (alpha_k + m_k) / (theta + |m|)
//   new_type    = sum_m w_m  novelty      / (theta + |m|).
PredictiveSummary predictive(const FVDDPState& state);

// Draws one mixture component, then `count` sequential urn draws from it;
// brand-new types receive fresh synthetic labels.
std::vector<std::string> sample_next(const FVDDPState& state, int count,
                                     Rng& rng);

// Posterior mean population frequency per registered label; identical
// numbers to predictive().per_type, exposed for reporting.
std::vector<double> mean_frequencies(const FVDDPState& state);

}  // namespace fvddp
