#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "fvddp/errors.hpp"

namespace fvddp {

// Append-only list of the distinct observation labels seen so far. The
// position of a label is the coordinate it owns in every node vector.
class TypeRegistry {
 public:
  TypeRegistry() = default;
  explicit TypeRegistry(const std::vector<std::string>& labels) {
    for (const auto& l : labels) append(l);
  }

  size_t K() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(size_t k) const { return labels_[k]; }

  bool contains(const std::string& label) const {
    return index_.find(label) != index_.end();
  }

  // -1 when absent.
  int index_of(const std::string& label) const {
    auto it = index_.find(label);
    return it == index_.end() ? -1 : it->second;
  }

  int append(const std::string& label) {
    if (contains(label))
      throw DuplicateLabelError("label already registered: " + label);
    labels_.push_back(label);
    index_.emplace(label, static_cast<int>(labels_.size()) - 1);
    return static_cast<int>(labels_.size()) - 1;
  }

  bool operator==(const TypeRegistry& other) const {
    return labels_ == other.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace fvddp
