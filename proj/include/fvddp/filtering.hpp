#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fvddp/dataset.hpp"
#include "fvddp/death_process.hpp"
#include "fvddp/state.hpp"

namespace fvddp {

// Labels observed at one collection time.
struct ObservationBatch {
  std::vector<std::string> labels;
};

// Multiplicity vector of the batch over an already-extended registry.
Node batch_multiplicities(const TypeRegistry& registry,
                          const std::vector<std::string>& labels);

// Prior state: single zero node with weight 1. An atomic baseline
// pre-registers its listed atoms (they are known types with positive mass);
// a nonatomic baseline starts with an empty registry.
FVDDPState init_state(double theta, const Baseline& baseline);

// Per-label urn data for one update: alpha masses, the novelty mass backing
// first draws of brand-new types, and which coordinates were first observed
// in the current batch.
struct UrnContext {
  double theta = 0.0;
  std::vector<double> alphas;
  double novelty_mass = 0.0;
  std::vector<uint8_t> first_observation;
};

UrnContext make_urn_context(const FVDDPState& state,
                            const std::vector<uint8_t>& first_observation);

// Probability of drawing multiplicity pattern n by sequential sampling from
// an urn with composition alpha + sum_k m_k delta_{y_k*}: the multinomial
// coefficient times the ordered product of predictive probabilities for one
// fixed order (the scheme is exchangeable). A brand-new type's first draw
// uses the novelty mass; a registered type absent from both the urn and the
// atom table contributes zero.
double polya_urn_prob(const Node& n, const Node& m, const UrnContext& ctx);

// Conditions the mixture on one batch: registry extended by unseen labels,
// every node m shifted to m + n and reweighted by polya_urn_prob.
FVDDPState update(const FVDDPState& state, const ObservationBatch& batch);

inline constexpr size_t kDefaultExactEnumerationBudget = 200'000'000;

// Spreads each node's mass over its lower set through the death-process
// transition probabilities. ExactInfeasibleError above the cardinality
// ceiling or the enumeration budget.
FVDDPState propagate_exact(const FVDDPState& state, double elapsed,
                           CCoefficientCache* cache = nullptr,
                           size_t enumeration_budget =
                               kDefaultExactEnumerationBudget);

struct McOptions {
  uint64_t particles = 1'000'000;
  double epsilon = 1e-9;
  uint64_t seed = 0;
  int threads = 1;
};

// Particle approximation of propagate_exact: draw a node from the current
// weights, run the death chain, tally arrivals; pruned at epsilon and
// renormalized. Deterministic for a fixed seed and any thread count.
FVDDPState propagate_mc(const FVDDPState& state, double elapsed,
                        const McOptions& opts);

enum class Mode { kExact, kMc, kAuto };

struct FilterOptions {
  Mode mode = Mode::kAuto;
  uint64_t particles = 1'000'000;
  double epsilon = 1e-9;
  uint64_t seed = 0;
  int threads = 1;
  // Auto mode propagates exactly while the mixture stays below this many
  // components and within the cardinality ceiling, then switches to MC.
  size_t auto_node_budget = 50'000;
};

// Alternates update and propagation over the collection times; returns the
// law of the signal at the last time given all data.
FVDDPState filter_dataset(const Dataset& dataset, const FilterOptions& opts);

}  // namespace fvddp
