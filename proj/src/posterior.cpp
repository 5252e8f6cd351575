#include "fvddp/posterior.hpp"

#include <cmath>

#include "fvddp/stable_sum.hpp"

namespace fvddp {

PredictiveSummary predictive(const FVDDPState& state) {
  const std::vector<double> alphas = state.alpha_vector();
  const double novelty = state.novelty_mass();
  PredictiveSummary out;
  out.per_type.assign(state.K(), 0.0);
  StableSum new_type;
  for (const auto& [node, w] : state.nodes()) {
    const double denom = state.theta() + node.cardinality();
    for (size_t k = 0; k < state.K(); ++k)
      out.per_type[k] += w * (alphas[k] + node[k]) / denom;
    new_type.add(w * novelty / denom);
  }
  out.new_type = new_type.get();
  return out;
}

std::vector<std::string> sample_next(const FVDDPState& state, int count,
                                     Rng& rng) {
  if (count < 1) throw ValidationError("draw count must be at least 1");

  // One mixture component per call; the urn then evolves with the draws.
  std::vector<double> cdf;
  std::vector<const Node*> nodes;
  double acc = 0.0;
  for (const auto& [node, w] : state.nodes()) {
    acc += w;
    cdf.push_back(acc);
    nodes.push_back(&node);
  }
  cdf.back() = 1.0;
  const Node& component = *nodes[rng.discrete(cdf)];

  const std::vector<double> alphas = state.alpha_vector();
  const double novelty = state.novelty_mass();
  std::vector<double> mass(state.K());
  for (size_t k = 0; k < state.K(); ++k) mass[k] = alphas[k] + component[k];
  double total = state.theta() + component.cardinality();

  std::vector<std::string> labels{state.registry().labels()};
  std::vector<std::string> result;
  result.reserve(static_cast<size_t>(count));
  int fresh = 0;
  for (int i = 0; i < count; ++i) {
    double u = rng.uniform01() * total;
    size_t chosen = mass.size();
    double cum = 0.0;
    for (size_t k = 0; k < mass.size(); ++k) {
      cum += mass[k];
      if (u < cum) {
        chosen = k;
        break;
      }
    }
    if (chosen < mass.size()) {
      result.push_back(labels[chosen]);
      mass[chosen] += 1.0;
    } else {
      // Novelty region: a type never seen before gets a fresh label and is
      // tracked with its own accumulating count from now on.
      std::string label;
      do {
        label = "new-" + std::to_string(++fresh);
      } while (state.registry().contains(label));
      labels.push_back(label);
      mass.push_back(1.0);
      result.push_back(label);
    }
    total += 1.0;
  }
  return result;
}

std::vector<double> mean_frequencies(const FVDDPState& state) {
  return predictive(state).per_type;
}

}  // namespace fvddp
