#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "fvddp/errors.hpp"

namespace fvddp {

// Multiplicity vector over the registered types. The lexicographic order on
// the entries is the canonical total order used by every node table, so all
// reductions iterate in a fixed, reproducible sequence.
class Node {
 public:
  Node() = default;
  explicit Node(std::vector<int> values)
      : values_(std::move(values)),
        cardinality_(std::accumulate(values_.begin(), values_.end(), 0)) {
    for (int v : values_)
      if (v < 0) throw ValidationError("node entries must be nonnegative");
  }

  static Node zeros(size_t k) { return Node(std::vector<int>(k, 0)); }

  size_t size() const { return values_.size(); }
  int operator[](size_t i) const { return values_[i]; }
  const std::vector<int>& values() const { return values_; }
  int cardinality() const { return cardinality_; }
  bool is_zero() const { return cardinality_ == 0; }

  // other <= this, componentwise.
  bool dominates(const Node& other) const {
    if (other.size() != size()) return false;
    for (size_t i = 0; i < size(); ++i)
      if (other.values_[i] > values_[i]) return false;
    return true;
  }

  Node plus(const Node& other) const {
    std::vector<int> out(values_);
    for (size_t i = 0; i < out.size(); ++i) out[i] += other.values_[i];
    return Node(std::move(out));
  }

  Node padded(size_t new_size) const {
    std::vector<int> out(values_);
    out.resize(new_size, 0);
    return Node(std::move(out));
  }

  int active_types() const {
    int n = 0;
    for (int v : values_) n += (v > 0);
    return n;
  }

  bool operator==(const Node& other) const { return values_ == other.values_; }
  auto operator<=>(const Node& other) const { return values_ <=> other.values_; }

 private:
  std::vector<int> values_;
  int cardinality_ = 0;
};

// Node tables are ordered maps so iteration follows the canonical order.
using NodeWeights = std::map<Node, double>;

// Visits {n : n <= m} in ascending lexicographic order; fn receives the
// coordinates of the current point.
template <typename Fn>
void for_each_below(const Node& m, Fn fn) {
  const auto& cap = m.values();
  std::vector<int> cur(cap.size(), 0);
  for (;;) {
    fn(static_cast<const std::vector<int>&>(cur));
    size_t i = cur.size();
    for (;;) {
      if (i == 0) return;
      --i;
      if (cur[i] < cap[i]) {
        ++cur[i];
        std::fill(cur.begin() + static_cast<long>(i) + 1, cur.end(), 0);
        break;
      }
    }
  }
}

// Number of lattice points below m, i.e. the box volume prod_k (m_k + 1).
// Saturates instead of overflowing so callers can budget-check safely.
size_t box_volume(const Node& m, size_t cap);

// All n with n <= m for some m in the input, inputs and zero vector included.
std::set<Node> lower_set(const std::set<Node>& nodes);

}  // namespace fvddp
