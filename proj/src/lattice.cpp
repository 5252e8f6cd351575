#include <algorithm>
#include <cmath>
#include <limits>

#include "fvddp/stable_sum.hpp"
#include "fvddp/state.hpp"

namespace fvddp {

size_t box_volume(const Node& m, size_t cap) {
  size_t vol = 1;
  for (int v : m.values()) {
    size_t f = static_cast<size_t>(v) + 1;
    if (vol > cap / f) return cap;
    vol *= f;
  }
  return vol;
}

std::set<Node> lower_set(const std::set<Node>& nodes) {
  if (nodes.empty())
    throw ValidationError("lower_set requires a nonempty input set");
  std::set<Node> out;
  for (const Node& m : nodes)
    for_each_below(m,
                   [&](const std::vector<int>& cur) { out.emplace(Node(cur)); });
  return out;
}

FVDDPState::FVDDPState(double theta, Baseline baseline, TypeRegistry registry,
                       NodeWeights nodes)
    : theta_(theta),
      baseline_(std::move(baseline)),
      registry_(std::move(registry)),
      nodes_(std::move(nodes)) {
  if (theta_ <= 0.0)
    throw NonpositiveThetaError("theta must be positive, got " +
                                std::to_string(theta_));
}

int FVDDPState::max_cardinality() const {
  int m = 0;
  for (const auto& [node, w] : nodes_) m = std::max(m, node.cardinality());
  return m;
}

std::vector<double> FVDDPState::alpha_vector() const {
  std::vector<double> out(registry_.K(), 0.0);
  if (baseline_.is_atomic())
    for (size_t k = 0; k < registry_.K(); ++k)
      out[k] = theta_ * baseline_.atom_mass(registry_.label(k));
  return out;
}

double FVDDPState::alpha_total() const {
  StableSum total;
  for (double a : alpha_vector()) total.add(a);
  return total.get();
}

double FVDDPState::novelty_mass() const {
  if (!baseline_.is_atomic()) return theta_;
  return std::max(0.0, theta_ - alpha_total());
}

void FVDDPState::validate() const {
  if (nodes_.empty()) throw ValidationError("state has no mixture components");
  StableSum total;
  for (const auto& [node, w] : nodes_) {
    if (node.size() != registry_.K())
      throw ValidationError("node length does not match registry size");
    if (!(w > 0.0))
      throw ValidationError("node weights must be strictly positive");
    total.add(w);
  }
  if (std::abs(total.get() - 1.0) > 1e-12)
    throw ValidationError("node weights do not sum to 1 within 1e-12");
}

std::vector<double> normalize(const std::vector<double>& weights) {
  StableSum total;
  for (double w : weights) {
    if (w < 0.0)
      throw NegativeWeightError("weights must be nonnegative");
    total.add(w);
  }
  double sum = total.get();
  if (!(sum > 0.0)) throw AllZeroError("all weights are zero");
  std::vector<double> out(weights.size());
  for (size_t i = 0; i < weights.size(); ++i) out[i] = weights[i] / sum;
  return out;
}

NodeWeights normalize(NodeWeights table) {
  StableSum total;
  for (auto it = table.begin(); it != table.end();) {
    if (it->second < 0.0)
      throw NegativeWeightError("weights must be nonnegative");
    if (it->second == 0.0) {
      it = table.erase(it);
      continue;
    }
    total.add(it->second);
    ++it;
  }
  double sum = total.get();
  if (!(sum > 0.0) || !std::isfinite(sum))
    throw AllZeroError("all weights are zero");
  NodeWeights::iterator largest = table.begin();
  StableSum check;
  for (auto it = table.begin(); it != table.end(); ++it) {
    it->second /= sum;
    check.add(it->second);
    if (it->second > largest->second) largest = it;
  }
  // Fold the rounding residual into the largest entry so the total stays at
  // 1 to machine precision regardless of table size.
  largest->second -= check.get() - 1.0;
  return table;
}

FVDDPState prune(const FVDDPState& state, double epsilon) {
  if (epsilon < 0.0 || epsilon >= 1.0)
    throw ValidationError("prune threshold must lie in [0, 1)");
  NodeWeights kept;
  for (const auto& [node, w] : state.nodes())
    if (w >= epsilon) kept.emplace(node, w);
  if (kept.empty())
    throw EverythingPrunedError(
        "no node has weight >= epsilon; lower the threshold");
  return FVDDPState(state.theta(), state.baseline(), state.registry(),
                    normalize(std::move(kept)));
}

NodeWeights merge(const std::vector<std::pair<Node, double>>& entries) {
  NodeWeights out;
  for (const auto& [node, w] : entries) {
    if (w < 0.0) throw NegativeWeightError("weights must be nonnegative");
    out[node] += w;
  }
  return out;
}

FVDDPState extend_registry(const FVDDPState& state,
                           const std::vector<std::string>& new_labels) {
  if (new_labels.empty()) return state;
  TypeRegistry registry = state.registry();
  for (const auto& label : new_labels) registry.append(label);
  NodeWeights nodes;
  for (const auto& [node, w] : state.nodes())
    nodes.emplace(node.padded(registry.K()), w);
  return FVDDPState(state.theta(), state.baseline(), std::move(registry),
                    std::move(nodes));
}

FVDDPState align_to(const FVDDPState& state, const TypeRegistry& target) {
  std::vector<int> where(state.K());
  for (size_t k = 0; k < state.K(); ++k) {
    where[k] = target.index_of(state.registry().label(k));
    if (where[k] < 0)
      throw ValidationError("target registry is missing label " +
                            state.registry().label(k));
  }
  NodeWeights nodes;
  for (const auto& [node, w] : state.nodes()) {
    std::vector<int> values(target.K(), 0);
    for (size_t k = 0; k < state.K(); ++k)
      values[static_cast<size_t>(where[k])] = node[k];
    nodes.emplace(Node(std::move(values)), w);
  }
  return FVDDPState(state.theta(), state.baseline(), target, std::move(nodes));
}

}  // namespace fvddp
