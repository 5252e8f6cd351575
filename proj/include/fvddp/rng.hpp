#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace fvddp {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Collapses (seed, stream tag, chunk index, ...) into one engine seed so
// that every Monte Carlo chunk owns an independent, reproducible substream.
inline uint64_t mix_seed(std::initializer_list<uint64_t> parts) {
  uint64_t s = 0x8824a3d6e9f0b1c7ULL;
  for (uint64_t p : parts) s = splitmix64(s ^ p);
  return s;
}

// Draw helpers on top of mt19937_64. Transforms are hand-rolled so the
// sampled sequences do not depend on the standard library's distribution
// implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t bits() { return engine_(); }

  // Uniform on the open interval (0,1).
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  // Unbiased uniform integer in [0, n), n >= 1.
  uint64_t below(uint64_t n) {
    const uint64_t rem = (UINT64_MAX % n + 1) % n;  // 2^64 mod n
    uint64_t x;
    do {
      x = engine_();
    } while (rem != 0 && x > UINT64_MAX - rem);
    return x % n;
  }

  // Index of the chosen category for a normalized cumulative table.
  size_t discrete(std::span<const double> cdf) {
    double u = uniform01();
    size_t lo = 0, hi = cdf.size();
    while (lo < hi) {
      size_t mid = lo + (hi - lo) / 2;
      if (cdf[mid] < u)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo < cdf.size() ? lo : cdf.size() - 1;
  }

  // Knuth's product method; fine for the small means used here.
  int poisson(double mean) {
    const double limit = std::exp(-mean);
    int k = 0;
    double p = uniform01();
    while (p > limit) {
      ++k;
      p *= uniform01();
    }
    return k;
  }

  // Failures before the first success.
  int geometric(double p) {
    int k = 0;
    while (uniform01() >= p) ++k;
    return k;
  }

  int negative_binomial(int successes, double p) {
    int total = 0;
    for (int i = 0; i < successes; ++i) total += geometric(p);
    return total;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fvddp
