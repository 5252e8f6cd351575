#include "fvddp/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "fvddp/parallel.hpp"
#include "fvddp/stable_sum.hpp"

namespace fvddp {

namespace {

constexpr uint64_t kMcChunk = 1 << 14;
constexpr uint64_t kTagPropagate = 0x70726F7061676174ULL;

// Cumulative weight table over the canonical node order.
struct SamplingTable {
  std::vector<Node> nodes;
  std::vector<double> cdf;
};

SamplingTable make_sampling_table(const FVDDPState& state) {
  SamplingTable t;
  t.nodes.reserve(state.component_count());
  t.cdf.reserve(state.component_count());
  double acc = 0.0;
  for (const auto& [node, w] : state.nodes()) {
    acc += w;
    t.nodes.push_back(node);
    t.cdf.push_back(acc);
  }
  t.cdf.back() = 1.0;
  return t;
}

}  // namespace

Node batch_multiplicities(const TypeRegistry& registry,
                          const std::vector<std::string>& labels) {
  std::vector<int> counts(registry.K(), 0);
  for (const auto& label : labels) {
    int k = registry.index_of(label);
    if (k < 0)
      throw ValidationError("label not resolvable in registry: " + label);
    ++counts[static_cast<size_t>(k)];
  }
  return Node(std::move(counts));
}

FVDDPState init_state(double theta, const Baseline& baseline) {
  if (theta <= 0.0)
    throw NonpositiveThetaError("theta must be positive, got " +
                                std::to_string(theta));
  TypeRegistry registry;
  if (baseline.is_atomic())
    for (const auto& [label, mass] : baseline.atom_masses())
      registry.append(label);
  NodeWeights nodes;
  nodes.emplace(Node::zeros(registry.K()), 1.0);
  return FVDDPState(theta, baseline, std::move(registry), std::move(nodes));
}

UrnContext make_urn_context(const FVDDPState& state,
                            const std::vector<uint8_t>& first_observation) {
  UrnContext ctx;
  ctx.theta = state.theta();
  ctx.alphas = state.alpha_vector();
  ctx.novelty_mass = state.novelty_mass();
  ctx.first_observation = first_observation;
  ctx.first_observation.resize(state.K(), 0);
  return ctx;
}

double polya_urn_prob(const Node& n, const Node& m, const UrnContext& ctx) {
  const int total = n.cardinality();
  if (total == 0) return 1.0;
  double log_p = std::lgamma(total + 1.0);
  for (size_t k = 0; k < n.size(); ++k) {
    const int draws = n[k];
    if (draws == 0) continue;
    log_p -= std::lgamma(draws + 1.0);
    const double base = ctx.alphas[k] + m[k];
    if (base > 0.0) {
      log_p += std::lgamma(base + draws) - std::lgamma(base);
    } else if (ctx.first_observation[k] && ctx.novelty_mass > 0.0) {
      // First draw of a brand-new type takes the whole novelty mass, later
      // same-batch repeats use their accumulated count: nu * (draws-1)!.
      log_p += std::log(ctx.novelty_mass) + std::lgamma(static_cast<double>(draws));
    } else {
      return 0.0;
    }
  }
  const double denom = ctx.theta + m.cardinality();
  log_p -= std::lgamma(denom + total) - std::lgamma(denom);
  return std::exp(log_p);
}

FVDDPState update(const FVDDPState& state, const ObservationBatch& batch) {
  if (batch.labels.empty())
    throw ValidationError("update requires a nonempty batch");
  std::vector<std::string> unseen;
  std::set<std::string> queued;
  for (const auto& label : batch.labels)
    if (!state.registry().contains(label) && queued.insert(label).second)
      unseen.push_back(label);

  FVDDPState extended = extend_registry(state, unseen);
  std::vector<uint8_t> first_observation(extended.K(), 0);
  for (const auto& label : unseen)
    first_observation[static_cast<size_t>(
        extended.registry().index_of(label))] = 1;

  const Node n = batch_multiplicities(extended.registry(), batch.labels);
  const UrnContext ctx = make_urn_context(extended, first_observation);
  NodeWeights out;
  for (const auto& [node, w] : extended.nodes())
    out.emplace(node.plus(n), w * polya_urn_prob(n, node, ctx));
  return FVDDPState(extended.theta(), extended.baseline(),
                    extended.registry(), normalize(std::move(out)));
}

FVDDPState propagate_exact(const FVDDPState& state, double elapsed,
                           CCoefficientCache* cache,
                           size_t enumeration_budget) {
  if (elapsed <= 0.0) throw ValidationError("elapsed must be positive");
  if (state.max_cardinality() > kExactCardinalityCeiling)
    throw ExactInfeasibleError(
        "a node exceeds the exact cardinality ceiling; use the Monte Carlo "
        "path");
  size_t cost = 0;
  for (const auto& [node, w] : state.nodes()) {
    cost += box_volume(node, enumeration_budget);
    if (cost >= enumeration_budget)
      throw ExactInfeasibleError(
          "exact propagation exceeds the enumeration budget; use the Monte "
          "Carlo path");
  }

  const DeathModel model{state.theta()};
  CCoefficientCache local;
  if (cache == nullptr) cache = &local;

  NodeWeights acc;
  for (const auto& [node, w] : state.nodes()) {
    for_each_below(node, [&](const std::vector<int>& cur) {
      Node n(cur);
      acc[n] += w * transition_prob(node, n, elapsed, model, cache);
    });
  }
  StableSum total;
  for (const auto& [node, w] : acc) total.add(w);
  if (std::abs(total.get() - 1.0) > 1e-6)
    throw CancellationFailureError(
        "propagated weights lost row-stochasticity; use the Monte Carlo path");
  return FVDDPState(state.theta(), state.baseline(), state.registry(),
                    normalize(std::move(acc)));
}

FVDDPState propagate_mc(const FVDDPState& state, double elapsed,
                        const McOptions& opts) {
  if (elapsed <= 0.0) throw ValidationError("elapsed must be positive");
  if (opts.particles < 1)
    throw ValidationError("particle count must be at least 1");

  const SamplingTable table = make_sampling_table(state);
  const DeathModel model{state.theta()};

  using Counts = std::map<Node, uint64_t>;
  auto slots = run_chunked<Counts>(
      opts.particles, kMcChunk, opts.threads,
      [&](uint64_t chunk, uint64_t count) {
        Rng rng(mix_seed({opts.seed, kTagPropagate, chunk}));
        Counts counts;
        for (uint64_t i = 0; i < count; ++i) {
          size_t idx = rng.discrete(table.cdf);
          ++counts[gillespie_arrival(table.nodes[idx], elapsed, model, rng)];
        }
        return counts;
      });

  Counts total;
  for (const Counts& c : slots)
    for (const auto& [node, k] : c) total[node] += k;

  NodeWeights weights;
  for (const auto& [node, k] : total)
    weights.emplace(node, static_cast<double>(k) /
                              static_cast<double>(opts.particles));
  FVDDPState out(state.theta(), state.baseline(), state.registry(),
                 normalize(std::move(weights)));
  return prune(out, opts.epsilon);
}

FVDDPState filter_dataset(const Dataset& dataset, const FilterOptions& opts) {
  Dataset ds = dataset.canonical();
  ds.validate();

  FVDDPState state = init_state(ds.theta, ds.baseline);
  CCoefficientCache cache;
  for (size_t j = 0; j < ds.times.size(); ++j) {
    if (j > 0) {
      const double dt = ds.times[j] - ds.times[j - 1];
      bool exact = opts.mode == Mode::kExact;
      if (opts.mode == Mode::kAuto)
        exact = state.component_count() <= opts.auto_node_budget &&
                state.max_cardinality() <= kExactCardinalityCeiling;
      if (exact) {
        state = propagate_exact(state, dt, &cache);
      } else {
        McOptions mc{opts.particles, opts.epsilon,
                     mix_seed({opts.seed, kTagPropagate, j}), opts.threads};
        state = propagate_mc(state, dt, mc);
      }
    }
    if (!ds.observations[j].empty())
      state = update(state, ObservationBatch{ds.observations[j]});
  }
  return state;
}

}  // namespace fvddp
