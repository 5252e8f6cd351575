#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fvddp/baseline.hpp"
#include "fvddp/node.hpp"
#include "fvddp/registry.hpp"

namespace fvddp {

// A finite mixture of Dirichlet-process laws: each node m carries the
// component Pi_{alpha + sum_k m_k delta_{y_k*}} with its mixture weight.
// Values are immutable after construction; every operation returns a new
// state, so instances are safe to share read-only across workers.
class FVDDPState {
 public:
  FVDDPState(double theta, Baseline baseline, TypeRegistry registry,
             NodeWeights nodes);

  double theta() const { return theta_; }
  const Baseline& baseline() const { return baseline_; }
  const TypeRegistry& registry() const { return registry_; }
  const NodeWeights& nodes() const { return nodes_; }

  size_t K() const { return registry_.K(); }
  size_t component_count() const { return nodes_.size(); }
  int max_cardinality() const;

  // alpha(y_k*) = theta * P0({y_k*}) per registered label.
  std::vector<double> alpha_vector() const;
  double alpha_total() const;
  // Mass backing types that are not individually registered: theta for a
  // nonatomic baseline, the uncovered remainder for an atomic one.
  double novelty_mass() const;

  // Throws ValidationError when an invariant is broken (weights positive and
  // summing to 1 within 1e-12, vector lengths equal to K).
  void validate() const;

 private:
  double theta_;
  Baseline baseline_;
  TypeRegistry registry_;
  NodeWeights nodes_;
};

// Rescales positive weights to sum to 1; AllZeroError when every weight is
// zero, NegativeWeightError on any negative input.
std::vector<double> normalize(const std::vector<double>& weights);

// Map form used internally: entries with zero weight are dropped, the rest
// renormalized; the residual of the compensated total is folded into the
// largest entry so the invariant sum holds to machine precision.
NodeWeights normalize(NodeWeights table);

// Removes nodes with weight strictly below epsilon and renormalizes.
// EverythingPrunedError when no node survives.
FVDDPState prune(const FVDDPState& state, double epsilon);

// Accumulates duplicate nodes by summation; order independent.
NodeWeights merge(const std::vector<std::pair<Node, double>>& entries);

// Appends labels; every existing node is zero-padded in the new coordinates.
FVDDPState extend_registry(const FVDDPState& state,
                           const std::vector<std::string>& new_labels);

// Re-expresses a state over a registry that contains all of its labels
// (coordinates permuted/padded by label; weights untouched).
FVDDPState align_to(const FVDDPState& state, const TypeRegistry& target);

}  // namespace fvddp
