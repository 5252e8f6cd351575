#pragma once

#include <cstdint>
#include <map>
#include <tuple>

#include "fvddp/node.hpp"
#include "fvddp/rng.hpp"

namespace fvddp {

struct DeathModel {
  double theta;
};

// Above this total count the exact coefficients are refused: the lambda
// products overflow what double precision can cancel, and the Monte Carlo
// path has no such ceiling.
inline constexpr int kExactCardinalityCeiling = 170;

// lambda_{|m|} = |m| (theta + |m| - 1) / 2, the total jump rate out of a
// node of the given cardinality; zero only at the absorbing empty node.
double total_rate(int cardinality, double theta);

// Multivariate hypergeometric mass of n when |n| units survive out of m.
// DominationViolatedError when n is not componentwise below m.
double mvh_pmf(const Node& n, const Node& m);

// Probability that the total count falls from total_from to total_to in the
// given time. The alternating sum is evaluated from log-magnitudes, largest
// terms first, under compensated summation; values within 1e-8 of [0,1] are
// clamped, anything worse raises CancellationFailureError.
double c_coefficient(int total_from, int total_to, double elapsed,
                     const DeathModel& model);

// Memo table for c_coefficient keyed by (from, to, elapsed); the value only
// depends on cardinalities, so one cache serves a whole propagate or smooth
// call. Callers share it by reference; one instance per worker when
// parallel. A cache is bound to a single theta.
class CCoefficientCache {
 public:
  double get(int total_from, int total_to, double elapsed,
             const DeathModel& model);
  size_t size() const { return table_.size(); }

 private:
  std::map<std::tuple<int, int, uint64_t>, double> table_;
};

// p_{m,n}(elapsed): e^{-lambda_{|m|} elapsed} on the diagonal, otherwise
// C_{|m|,|n|} * MVH(n; |n|, m). Rows over {n <= m} sum to 1.
double transition_prob(const Node& m, const Node& n, double elapsed,
                       const DeathModel& model,
                       CCoefficientCache* cache = nullptr);

// Event-driven simulation of the death chain: exponential holding times at
// the current total rate, one unit removed from coordinate j with
// probability m_j / |m|. Returns the state at the elapsed horizon.
Node gillespie_arrival(const Node& m, double elapsed, const DeathModel& model,
                       Rng& rng);

}  // namespace fvddp
