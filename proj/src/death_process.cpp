#include "fvddp/death_process.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "fvddp/stable_sum.hpp"

namespace fvddp {

namespace {

double log_binomial(int a, int b) {
  return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

}  // namespace

double total_rate(int cardinality, double theta) {
  return cardinality * (theta + cardinality - 1.0) / 2.0;
}

double mvh_pmf(const Node& n, const Node& m) {
  if (!m.dominates(n))
    throw DominationViolatedError("n must be componentwise below m");
  double log_p = -log_binomial(m.cardinality(), n.cardinality());
  for (size_t j = 0; j < m.size(); ++j) log_p += log_binomial(m[j], n[j]);
  return std::exp(log_p);
}

double c_coefficient(int total_from, int total_to, double elapsed,
                     const DeathModel& model) {
  if (total_to < 0 || total_to >= total_from)
    throw ValidationError("c_coefficient requires 0 <= total_to < total_from");
  if (elapsed <= 0.0) throw ValidationError("elapsed must be positive");
  if (total_from > kExactCardinalityCeiling)
    throw ExactInfeasibleError("cardinality " + std::to_string(total_from) +
                               " exceeds the exact ceiling of " +
                               std::to_string(kExactCardinalityCeiling) +
                               "; use the Monte Carlo path");

  const int lo = total_to, hi = total_from;
  std::vector<double> rate(hi - lo + 1);
  for (int h = lo; h <= hi; ++h) rate[h - lo] = total_rate(h, model.theta);

  double log_pref = 0.0;
  for (int h = lo + 1; h <= hi; ++h) log_pref += std::log(rate[h - lo]);

  // Terms alternate in sign starting positive at k = total_to; evaluating
  // them as log-magnitudes and summing scaled by the largest keeps the
  // cancellation as benign as double precision allows.
  const int n_terms = hi - lo + 1;
  std::vector<double> log_mag(n_terms);
  for (int k = lo; k <= hi; ++k) {
    double log_denom = 0.0;
    for (int h = lo; h <= hi; ++h)
      if (h != k) log_denom += std::log(std::abs(rate[k - lo] - rate[h - lo]));
    log_mag[k - lo] = log_pref - rate[k - lo] * elapsed - log_denom;
  }
  const double peak = *std::max_element(log_mag.begin(), log_mag.end());

  std::vector<int> order(n_terms);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return log_mag[a] > log_mag[b]; });

  StableSum scaled;
  for (int idx : order) {
    double term = std::exp(log_mag[idx] - peak);
    scaled.add(idx % 2 == 0 ? term : -term);
  }
  double s = scaled.get();
  double value;
  if (s == 0.0)
    value = 0.0;
  else
    value = std::copysign(std::exp(peak + std::log(std::abs(s))), s);

  if (value < 0.0) {
    if (value >= -1e-8) return 0.0;
  } else if (value > 1.0) {
    if (value <= 1.0 + 1e-8) return 1.0;
  } else if (std::isfinite(value)) {
    return value;
  }
  throw CancellationFailureError(
      "alternating sum lost all precision for C_{" + std::to_string(total_from) +
      "," + std::to_string(total_to) + "}(" + std::to_string(elapsed) +
      "); use the Monte Carlo path");
}

double CCoefficientCache::get(int total_from, int total_to, double elapsed,
                              const DeathModel& model) {
  auto key = std::make_tuple(total_from, total_to,
                             std::bit_cast<uint64_t>(elapsed));
  auto it = table_.find(key);
  if (it != table_.end()) return it->second;
  double value = c_coefficient(total_from, total_to, elapsed, model);
  table_.emplace(key, value);
  return value;
}

double transition_prob(const Node& m, const Node& n, double elapsed,
                       const DeathModel& model, CCoefficientCache* cache) {
  if (!m.dominates(n))
    throw DominationViolatedError("n must be componentwise below m");
  if (n == m)
    return std::exp(-total_rate(m.cardinality(), model.theta) * elapsed);
  double c = cache ? cache->get(m.cardinality(), n.cardinality(), elapsed, model)
                   : c_coefficient(m.cardinality(), n.cardinality(), elapsed,
                                   model);
  return c * mvh_pmf(n, m);
}

Node gillespie_arrival(const Node& m, double elapsed, const DeathModel& model,
                       Rng& rng) {
  if (elapsed <= 0.0) throw ValidationError("elapsed must be positive");
  std::vector<int> cur = m.values();
  int card = m.cardinality();
  double t = 0.0;
  while (card > 0) {
    t += rng.exponential(total_rate(card, model.theta));
    if (t > elapsed) break;
    // Remove one of the remaining units uniformly, i.e. coordinate j with
    // probability m_j / |m|.
    uint64_t r = rng.below(static_cast<uint64_t>(card));
    uint64_t acc = 0;
    for (size_t j = 0; j < cur.size(); ++j) {
      acc += static_cast<uint64_t>(cur[j]);
      if (r < acc) {
        --cur[j];
        break;
      }
    }
    --card;
  }
  return Node(std::move(cur));
}

}  // namespace fvddp
