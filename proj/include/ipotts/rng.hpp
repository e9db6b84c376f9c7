#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

namespace ipotts {

/// Counter-style pseudo-random generator (splitmix64 core). Streams are keyed
/// by (master seed, purpose tag, index), so every stochastic draw in an
/// experiment is reproducible independently of evaluation order: changing the
/// gamma grid, for instance, never changes the noise realization of a seed.
class Rng {
 public:
  explicit Rng(std::uint64_t key) : state_(mix(key ^ 0x9e3779b97f4a7c15ull)) {}

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    return h;
  }

  static Rng keyed(std::uint64_t seed, std::string_view purpose, std::uint64_t index = 0) {
    std::uint64_t k = mix(seed) ^ mix(fnv1a(purpose) + 0x632be59bd9b4e019ull) ^ mix(index + 1);
    return Rng(k);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// N(0, sigma^2) via Box-Muller.
  double normal(double sigma) {
    double u1 = uniform01();
    double u2 = uniform01();
    // Map u1 to (0,1] so the log is finite.
    double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    return sigma * r * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Zero-mean Laplace draw with density (1/(sigma*sqrt(2))) exp(-sqrt(2)|x|/sigma),
  /// i.e. variance sigma^2, sampled by inverse CDF.
  double laplace(double sigma) {
    double u = uniform01() - 0.5;
    double b = sigma / std::numbers::sqrt2;
    return -b * (u < 0 ? -1.0 : 1.0) * std::log(1.0 - 2.0 * std::abs(u));
  }

  int uniform_int(int n) {  // in [0, n)
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  /// k distinct values from {0,...,n-1}, returned sorted ascending.
  std::vector<int> sample_without_replacement(int n, int k) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < k; ++i) {
      int j = i + uniform_int(n - i);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace ipotts
