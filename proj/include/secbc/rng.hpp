#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "secbc/pmf.hpp"

namespace secbc {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Deterministic random stream. Child streams derived by index are
/// independent of each other and of the parent's draw order, so work can be
/// partitioned across workers without changing any result.
class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : key_(key), engine_(splitmix64(key)) {}

  /// Stream for child `index`, independent of this stream's position.
  RngStream derive(std::uint64_t index) const {
    return RngStream(splitmix64(key_ ^ (0xA24BAED4963EE407ull + index)));
  }
  RngStream derive(std::uint64_t a, std::uint64_t b) const {
    return derive(a).derive(b);
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound).
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("uniform_below: zero bound");
    // Rejection to avoid modulo bias.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

/// Precomputed inverse-CDF sampler for a fixed mass vector.
class CumulativeSampler {
 public:
  CumulativeSampler() = default;
  explicit CumulativeSampler(const std::vector<double>& mass) { reset(mass); }
  explicit CumulativeSampler(std::span<const double> mass) { reset(mass); }

  void reset(std::span<const double> mass) {
    cdf_.resize(mass.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      acc += mass[i];
      cdf_[i] = acc;
    }
    if (!cdf_.empty()) cdf_.back() = 1.0;
  }
  void reset(const std::vector<double>& mass) {
    reset(std::span<const double>(mass.data(), mass.size()));
  }

  std::size_t sample(RngStream& rng) const {
    const double u = rng.uniform();
    std::size_t lo = 0, hi = cdf_.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (u < cdf_[mid]) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return lo;
  }

 private:
  std::vector<double> cdf_;
};

inline std::size_t sample_index(const Pmf& p, RngStream& rng) {
  return CumulativeSampler(p.mass()).sample(rng);
}

}  // namespace secbc
