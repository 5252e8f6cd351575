#include "fvddp/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "fvddp/parallel.hpp"
#include "fvddp/stable_sum.hpp"

namespace fvddp {

namespace {

constexpr uint64_t kMcChunk = 1 << 14;
constexpr uint64_t kTagSmoothDraw = 0x736D6F6F74686472ULL;
constexpr uint64_t kTagForwardPass = 0x666F727761726466ULL;
constexpr uint64_t kTagBackwardPass = 0x6261636B77617264ULL;

double log_pochhammer(double x, int n) {
  if (n == 0) return 0.0;
  return std::lgamma(x + n) - std::lgamma(x);
}

// log of (c-1)! under the convention (-1)! = 1.
double log_shifted_factorial(int c) {
  return c == 0 ? 0.0 : std::lgamma(static_cast<double>(c));
}

// log m(v) = log B(alpha + v) / B(alpha) for the Dirichlet-multinomial
// marginal with parameter vector alphas.
double log_dm_marginal(const Node& v, const std::vector<double>& alphas,
                       double alpha_sum) {
  double lg = -log_pochhammer(alpha_sum, v.cardinality());
  for (size_t k = 0; k < v.size(); ++k) {
    if (v[k] == 0) continue;
    if (alphas[k] <= 0.0)
      throw ValidationError(
          "atomic baseline must cover every registered label used in "
          "smoothing");
    lg += log_pochhammer(alphas[k], v[k]);
  }
  return lg;
}

struct TransitionRow {
  Node ancestor;
  double weight = 0.0;
  std::vector<std::pair<Node, double>> arrivals;  // lexicographic in Node
};

std::vector<TransitionRow> transition_rows(const FVDDPState& state, double dt,
                                           CCoefficientCache* cache) {
  const DeathModel model{state.theta()};
  std::vector<TransitionRow> rows;
  rows.reserve(state.component_count());
  for (const auto& [m, w] : state.nodes()) {
    TransitionRow row;
    row.ancestor = m;
    row.weight = w;
    for_each_below(m, [&](const std::vector<int>& cur) {
      Node n(cur);
      row.arrivals.emplace_back(n, transition_prob(m, n, dt, model, cache));
    });
    rows.push_back(std::move(row));
  }
  return rows;
}

size_t enumeration_cost(const FVDDPState& state, size_t cap) {
  size_t cost = 0;
  for (const auto& [m, w] : state.nodes()) {
    cost += box_volume(m, cap);
    if (cost >= cap) return cap;
  }
  return cost;
}

void check_exact_feasible(const FVDDPState& forward,
                          const FVDDPState& backward, size_t budget) {
  if (forward.max_cardinality() > kExactCardinalityCeiling ||
      backward.max_cardinality() > kExactCardinalityCeiling)
    throw ExactInfeasibleError(
        "a node exceeds the exact cardinality ceiling; use the Monte Carlo "
        "path");
  size_t c1 = enumeration_cost(forward, budget);
  size_t c2 = enumeration_cost(backward, budget);
  if (c1 >= budget || c2 >= budget || c1 > budget / std::max<size_t>(c2, 1))
    throw ExactInfeasibleError(
        "exact smoothing exceeds the enumeration budget; use the Monte Carlo "
        "path");
}

void append_node(std::string& out, const Node& node) {
  for (size_t i = 0; i < node.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += std::to_string(node[i]);
  }
}

Node parse_node(const std::string& text) {
  std::vector<int> values;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    values.push_back(std::stoi(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  return Node(std::move(values));
}

double q_weight(const FVDDPState& context, const Node& k1, const Node& n_t,
                const Node& k2, const SharedIndexSets& sets,
                const std::vector<double>& alphas) {
  if (context.baseline().is_atomic())
    return q_weight_atomic(k1, n_t, k2, context.theta(), alphas);
  return q_weight_nonatomic(k1, n_t, k2, context.theta(), sets);
}

}  // namespace

SharedIndexSets shared_index_sets(const Node& m1, const Node& n,
                                  const Node& m2) {
  if (m1.size() != n.size() || m2.size() != n.size())
    throw ValidationError("shared_index_sets requires equal vector lengths");
  SharedIndexSets sets;
  for (size_t k = 0; k < n.size(); ++k) {
    bool past = m1[k] > 0 && (n[k] > 0 || m2[k] > 0);
    bool future = m2[k] > 0 && (n[k] > 0 || m1[k] > 0);
    if (past) sets.d_past.push_back(static_cast<int>(k));
    if (future) sets.d_future.push_back(static_cast<int>(k));
    if (past || future) sets.s.push_back(static_cast<int>(k));
  }
  return sets;
}

double q_weight_atomic(const Node& k1, const Node& n, const Node& k2,
                       double theta, const std::vector<double>& alphas) {
  (void)theta;
  StableSum alpha_sum;
  for (double a : alphas) alpha_sum.add(a);
  const double a_total = alpha_sum.get();
  const Node combined = k1.plus(n).plus(k2);
  double lg = log_dm_marginal(combined, alphas, a_total) -
              log_dm_marginal(k1, alphas, a_total) -
              log_dm_marginal(n, alphas, a_total) -
              log_dm_marginal(k2, alphas, a_total);
  return std::exp(lg);
}

double q_weight_nonatomic(const Node& k1, const Node& n, const Node& k2,
                          double theta, const SharedIndexSets& sets) {
  for (int k : sets.d_past)
    if (k1[static_cast<size_t>(k)] == 0) return 0.0;
  for (int k : sets.d_future)
    if (k2[static_cast<size_t>(k)] == 0) return 0.0;
  double lg = log_pochhammer(theta, k1.cardinality()) +
              log_pochhammer(theta, k2.cardinality()) -
              log_pochhammer(theta + n.cardinality(),
                             k1.cardinality() + k2.cardinality());
  for (int ki : sets.s) {
    const size_t k = static_cast<size_t>(ki);
    const int c = k1[k] + n[k] + k2[k];
    lg += log_shifted_factorial(c) - log_shifted_factorial(k1[k]) -
          log_shifted_factorial(n[k]) - log_shifted_factorial(k2[k]);
  }
  return std::exp(lg);
}

FVDDPState backward_filter(const Dataset& suffix, const FilterOptions& opts) {
  Dataset ds = suffix.canonical();
  ds.validate();
  if (ds.times.empty())
    throw ValidationError("backward_filter requires a nonempty suffix");
  Dataset reversed;
  reversed.theta = ds.theta;
  reversed.baseline = ds.baseline;
  const double last = ds.times.back();
  for (size_t i = ds.times.size(); i-- > 0;) {
    reversed.times.push_back(last - ds.times[i]);
    reversed.observations.push_back(ds.observations[i]);
  }
  return filter_dataset(reversed, opts);
}

FVDDPState smooth_exact(const FVDDPState& forward, const FVDDPState& backward,
                        const Node& n_t, double dt_past, double dt_future,
                        CCoefficientCache* cache, size_t enumeration_budget) {
  if (dt_past <= 0.0 || dt_future <= 0.0)
    throw ValidationError("propagation intervals must be positive");
  if (!(forward.registry() == backward.registry()) ||
      n_t.size() != forward.K())
    throw ValidationError("smoothing inputs must share one registry");
  check_exact_feasible(forward, backward, enumeration_budget);

  CCoefficientCache local;
  if (cache == nullptr) cache = &local;
  const auto rows1 = transition_rows(forward, dt_past, cache);
  const auto rows2 = transition_rows(backward, dt_future, cache);
  const std::vector<double> alphas = forward.alpha_vector();

  NodeWeights acc;
  for (const TransitionRow& r1 : rows1) {
    for (const TransitionRow& r2 : rows2) {
      const double uv = r1.weight * r2.weight;
      const SharedIndexSets sets =
          shared_index_sets(r1.ancestor, n_t, r2.ancestor);
      for (const auto& [k1, p1] : r1.arrivals) {
        const Node partial = k1.plus(n_t);
        for (const auto& [k2, p2] : r2.arrivals) {
          const double q = q_weight(forward, k1, n_t, k2, sets, alphas);
          if (q > 0.0) acc[partial.plus(k2)] += uv * p1 * p2 * q;
        }
      }
    }
  }
  return FVDDPState(forward.theta(), forward.baseline(), forward.registry(),
                    normalize(std::move(acc)));
}

std::string encode_node_pair(const Node& a, const Node& b) {
  std::string key;
  key.reserve(4 * (a.size() + b.size()) + 1);
  append_node(key, a);
  key.push_back('|');
  append_node(key, b);
  return key;
}

std::pair<Node, Node> decode_node_pair(const std::string& key) {
  size_t bar = key.find('|');
  if (bar == std::string::npos)
    throw ValidationError("malformed node-pair key: " + key);
  return {parse_node(key.substr(0, bar)), parse_node(key.substr(bar + 1))};
}

BinTable sample_ancestor_bins(const FVDDPState& forward,
                              const FVDDPState& backward, double dt_past,
                              double dt_future, uint64_t particles,
                              uint64_t seed, int threads) {
  struct Table {
    std::vector<Node> nodes;
    std::vector<double> cdf;
  };
  auto make_table = [](const FVDDPState& s) {
    Table t;
    double acc = 0.0;
    for (const auto& [node, w] : s.nodes()) {
      acc += w;
      t.nodes.push_back(node);
      t.cdf.push_back(acc);
    }
    t.cdf.back() = 1.0;
    return t;
  };
  const Table fwd = make_table(forward);
  const Table bwd = make_table(backward);
  const DeathModel model{forward.theta()};

  using ChunkBins = std::map<std::string, std::map<std::string, uint64_t>>;
  auto slots = run_chunked<ChunkBins>(
      particles, kMcChunk, threads, [&](uint64_t chunk, uint64_t count) {
        Rng rng(mix_seed({seed, kTagSmoothDraw, chunk}));
        ChunkBins bins;
        for (uint64_t i = 0; i < count; ++i) {
          const Node& m1 = fwd.nodes[rng.discrete(fwd.cdf)];
          const Node& m2 = bwd.nodes[rng.discrete(bwd.cdf)];
          Node k1 = gillespie_arrival(m1, dt_past, model, rng);
          Node k2 = gillespie_arrival(m2, dt_future, model, rng);
          ++bins[encode_node_pair(m1, m2)][encode_node_pair(k1, k2)];
        }
        return bins;
      });

  BinTable table;
  for (const ChunkBins& bins : slots) {
    for (const auto& [bin_key, entries] : bins) {
      AncestorBin& bin = table[bin_key];
      bin.key = bin_key;
      for (const auto& [pair_key, count] : entries)
        bin.entries[pair_key].draw_count += count;
    }
  }
  for (auto& [bin_key, bin] : table) {
    uint64_t total = 0;
    for (const auto& [pair_key, entry] : bin.entries)
      total += entry.draw_count;
    for (auto& [pair_key, entry] : bin.entries)
      entry.mass = static_cast<double>(entry.draw_count) /
                   static_cast<double>(total);
  }
  return table;
}

FVDDPState combine_bins(BinTable& bins, const FVDDPState& forward,
                        const FVDDPState& backward, const Node& n_t) {
  const std::vector<double> alphas = forward.alpha_vector();
  NodeWeights acc;
  for (auto& [bin_key, bin] : bins) {
    auto [m1, m2] = decode_node_pair(bin_key);
    const double uv =
        forward.nodes().at(m1) * backward.nodes().at(m2);
    const SharedIndexSets sets = shared_index_sets(m1, n_t, m2);
    for (auto& [pair_key, entry] : bin.entries) {
      auto [k1, k2] = decode_node_pair(pair_key);
      entry.q_value = q_weight(forward, k1, n_t, k2, sets, alphas);
      if (entry.q_value > 0.0 && entry.mass > 0.0)
        acc[k1.plus(n_t).plus(k2)] += uv * entry.q_value * entry.mass;
    }
  }
  bool any = false;
  for (const auto& [node, w] : acc) any |= w > 0.0;
  if (!any)
    throw DegenerateBinsError(
        "every sampled descendant pair has zero q weight; increase the "
        "particle count");
  return FVDDPState(forward.theta(), forward.baseline(), forward.registry(),
                    normalize(std::move(acc)));
}

FVDDPState smooth_mc(const FVDDPState& forward, const FVDDPState& backward,
                     const Node& n_t, double dt_past, double dt_future,
                     const McOptions& opts) {
  if (dt_past <= 0.0 || dt_future <= 0.0)
    throw ValidationError("propagation intervals must be positive");
  if (!(forward.registry() == backward.registry()) ||
      n_t.size() != forward.K())
    throw ValidationError("smoothing inputs must share one registry");
  if (opts.particles < 1)
    throw ValidationError("particle count must be at least 1");
  BinTable bins =
      sample_ancestor_bins(forward, backward, dt_past, dt_future,
                           opts.particles, opts.seed, opts.threads);
  FVDDPState combined = combine_bins(bins, forward, backward, n_t);
  return prune(combined, opts.epsilon);
}

FVDDPState smooth_at(const Dataset& dataset, double t,
                     const SmoothOptions& opts) {
  Dataset ds = dataset.canonical();
  ds.validate();
  if (ds.times.empty()) throw ValidationError("dataset has no collection times");
  if (t < ds.times.front() || t > ds.times.back())
    throw ValidationError("smoothing time must lie within the data horizon");

  FilterOptions fopts{opts.mode,    opts.particles, opts.epsilon,
                      opts.seed,    opts.threads,   opts.auto_node_budget};

  if (t == ds.times.back()) {
    fopts.seed = mix_seed({opts.seed, kTagForwardPass});
    return filter_dataset(ds, fopts);
  }

  size_t past_end = 0;  // number of times strictly before t
  while (past_end < ds.times.size() && ds.times[past_end] < t) ++past_end;
  bool at_collection =
      past_end < ds.times.size() && ds.times[past_end] == t;
  size_t future_begin = at_collection ? past_end + 1 : past_end;

  FVDDPState forward = init_state(ds.theta, ds.baseline);
  double dt_past = 1.0;  // the prior is stationary, the interval is moot
  if (past_end > 0) {
    FilterOptions fw = fopts;
    fw.seed = mix_seed({opts.seed, kTagForwardPass});
    forward = filter_dataset(ds.slice(0, past_end - 1), fw);
    dt_past = t - ds.times[past_end - 1];
  }

  FilterOptions bw = fopts;
  bw.seed = mix_seed({opts.seed, kTagBackwardPass});
  FVDDPState backward =
      backward_filter(ds.slice(future_begin, ds.times.size() - 1), bw);
  double dt_future = ds.times[future_begin] - t;

  // Align both passes and the time-t data over one registry.
  TypeRegistry registry = forward.registry();
  for (const auto& label : backward.registry().labels())
    if (!registry.contains(label)) registry.append(label);
  std::vector<std::string> at_labels =
      at_collection ? ds.observations[past_end] : std::vector<std::string>{};
  for (const auto& label : at_labels)
    if (!registry.contains(label)) registry.append(label);

  FVDDPState fwd = align_to(forward, registry);
  FVDDPState bwd = align_to(backward, registry);
  const Node n_t = batch_multiplicities(registry, at_labels);

  if (fwd.baseline().is_atomic()) {
    for (const auto& label : registry.labels())
      if (fwd.baseline().atom_mass(label) <= 0.0)
        throw ValidationError(
            "smoothing with an atomic baseline requires atom mass for every "
            "observed label (missing: " + label + ")");
  }

  bool exact = opts.mode == Mode::kExact;
  if (opts.mode == Mode::kAuto) {
    exact = fwd.component_count() <= opts.auto_node_budget &&
            bwd.component_count() <= opts.auto_node_budget &&
            fwd.max_cardinality() <= kExactCardinalityCeiling &&
            bwd.max_cardinality() <= kExactCardinalityCeiling;
    if (exact) {
      try {
        check_exact_feasible(fwd, bwd, opts.enumeration_budget);
      } catch (const ExactInfeasibleError&) {
        exact = false;
      }
    }
  }
  if (exact)
    return smooth_exact(fwd, bwd, n_t, dt_past, dt_future, nullptr,
                        opts.enumeration_budget);
  McOptions mc{opts.particles, opts.epsilon,
               mix_seed({opts.seed, kTagSmoothDraw}), opts.threads};
  return smooth_mc(fwd, bwd, n_t, dt_past, dt_future, mc);
}

}  // namespace fvddp
