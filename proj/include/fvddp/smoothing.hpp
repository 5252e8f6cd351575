#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fvddp/filtering.hpp"

namespace fvddp {

// Coordinates shared between the past-side ancestor, the time-t data and the
// future-side ancestor. d_past holds indices the past component must keep
// alive, d_future the future ones; s is their union.
struct SharedIndexSets {
  std::vector<int> d_past;
  std::vector<int> d_future;
  std::vector<int> s;
};

SharedIndexSets shared_index_sets(const Node& m1, const Node& n,
                                  const Node& m2);

// Reweighting factor combining the two death-process arrivals with the
// time-t data, for an atomic baseline covering all registered labels:
// m(k1+n+k2) / (m(k1) m(n) m(k2)) with m(.) the Dirichlet-multinomial
// marginal, evaluated in log space.
double q_weight_atomic(const Node& k1, const Node& n, const Node& k2,
                       double theta, const std::vector<double>& alphas);

// Nonatomic counterpart: zero outside the support condition (every index in
// d_past kept by k1, every index in d_future kept by k2), otherwise the
// ascending-factorial ratio times the shared-coordinate factorial product
// under the convention (-1)! = 1.
double q_weight_nonatomic(const Node& k1, const Node& n, const Node& k2,
                          double theta, const SharedIndexSets& sets);

// Filters the time-reversed suffix (intervals preserved); returns the law of
// the signal at the suffix's first time given the data from then on.
FVDDPState backward_filter(const Dataset& suffix, const FilterOptions& opts);

// Exact smoothing combination: enumerates every ancestor pair and all
// descendant pairs below them, accumulates
//   u_{m1} v_{m2} p_{m1,k1}(dt_past) p_{m2,k2}(dt_future) q(k1, n_t, k2)
// on node k1 + n_t + k2, and normalizes once globally at the end.
// Both states must be expressed over the same registry.
FVDDPState smooth_exact(const FVDDPState& forward, const FVDDPState& backward,
                        const Node& n_t, double dt_past, double dt_future,
                        CCoefficientCache* cache = nullptr,
                        size_t enumeration_budget =
                            kDefaultExactEnumerationBudget);

// One descendant pair inside an ancestor bin: how often it was drawn, its
// share of the bin's draws, and the q value attached when bins are combined.
struct BinEntry {
  double q_value = 0.0;
  uint64_t draw_count = 0;
  double mass = 0.0;  // relative draw frequency within the bin
};

// Counting structure for the two-death-process sampler: ancestor pairs keyed
// by canonical delimited integer strings, each holding a table over the
// descendant pairs drawn from it.
struct AncestorBin {
  std::string key;
  std::map<std::string, BinEntry> entries;
};

using BinTable = std::map<std::string, AncestorBin>;

std::string encode_node_pair(const Node& a, const Node& b);
std::pair<Node, Node> decode_node_pair(const std::string& key);

// Runs the paired Gillespie chains for the requested number of particles and
// tallies descendant pairs per ancestor pair. Deterministic for a fixed seed
// and any thread count.
BinTable sample_ancestor_bins(const FVDDPState& forward,
                              const FVDDPState& backward, double dt_past,
                              double dt_future, uint64_t particles,
                              uint64_t seed, int threads);

// Combination step shared by the sampler and by analytic checks: fills each
// entry's q_value, accumulates u v q * mass per output node and normalizes
// globally. DegenerateBinsError when every entry has q * mass = 0.
FVDDPState combine_bins(BinTable& bins, const FVDDPState& forward,
                        const FVDDPState& backward, const Node& n_t);

// Monte Carlo smoothing: sample bins, set each entry's mass to its share of
// the bin's draws, combine, then prune at epsilon and renormalize.
FVDDPState smooth_mc(const FVDDPState& forward, const FVDDPState& backward,
                     const Node& n_t, double dt_past, double dt_future,
                     const McOptions& opts);

struct SmoothOptions {
  Mode mode = Mode::kAuto;
  uint64_t particles = 1'000'000;
  double epsilon = 1e-9;
  uint64_t seed = 0;
  int threads = 1;
  size_t auto_node_budget = 50'000;
  size_t enumeration_budget = kDefaultExactEnumerationBudget;
};

// Full smoothing pipeline at time t in [t0, T]: forward-filters the strict
// past, backward-filters the strict future, aligns both states over the
// union registry and combines them with the data observed at t (the zero
// vector when t is not a collection time). At t = T this reduces to
// filtering.
FVDDPState smooth_at(const Dataset& dataset, double t,
                     const SmoothOptions& opts);

}  // namespace fvddp
