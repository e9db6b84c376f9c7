#pragma once

#include "ipotts/rng.hpp"
#include "ipotts/types.hpp"

#include <cstdint>
#include <vector>

namespace ipotts {

/// Piecewise-constant ground truth with exactly k_jumps jumps. Segment
/// lengths are a uniform composition of n into k_jumps+1 parts of at least
/// min_plateau samples; plateau values are uniform in [lo, hi] with
/// consecutive plateaus at least 0.1*(hi-lo) apart.
inline Vec gen_jump_sparse(int n, int k_jumps, int min_plateau, double lo, double hi,
                           std::uint64_t seed) {
  require(n >= 1 && k_jumps >= 0 && min_plateau >= 1, "gen_jump_sparse: bad arguments");
  require(hi > lo, "gen_jump_sparse: empty value range");
  const int segments = k_jumps + 1;
  require(static_cast<long long>(segments) * min_plateau <= n,
          "gen_jump_sparse: infeasible spec, (k_jumps+1)*min_plateau > n");

  Rng rng = Rng::keyed(seed, "jump-sparse-signal");

  // Uniform composition of the slack via stars and bars.
  const int slack = n - segments * min_plateau;
  std::vector<int> lengths(segments, min_plateau);
  if (k_jumps > 0 && slack > 0) {
    std::vector<int> bars = rng.sample_without_replacement(slack + k_jumps, k_jumps);
    int prev = -1;
    for (int i = 0; i < k_jumps; ++i) {
      lengths[i] += bars[i] - prev - 1;
      prev = bars[i];
    }
    lengths[k_jumps] += slack + k_jumps - 1 - prev;
  } else if (k_jumps == 0) {
    lengths[0] = n;
  }

  const double min_diff = 0.1 * (hi - lo);
  Vec x(n);
  double value = rng.uniform(lo, hi);
  int pos = 0;
  for (int s = 0; s < segments; ++s) {
    if (s > 0) {
      double next = value;
      int tries = 0;
      while (std::abs(next - value) < min_diff) {
        next = rng.uniform(lo, hi);
        if (++tries > 100000)
          throw ContractViolation("gen_jump_sparse: cannot satisfy plateau separation");
      }
      value = next;
    }
    for (int i = 0; i < lengths[s]; ++i) x[pos++] = value;
  }
  return x;
}

/// Exactly k_support non-zeros at distinct random positions, amplitudes
/// uniform in [lo, hi] excluding a zero neighborhood of radius 0.05*(hi-lo).
inline Vec gen_sparse(int n, int k_support, double lo, double hi, std::uint64_t seed) {
  require(n >= 1 && k_support >= 0 && k_support <= n, "gen_sparse: infeasible spec");
  require(hi > lo, "gen_sparse: empty amplitude range");
  Rng rng = Rng::keyed(seed, "sparse-signal");
  const double exclusion = 0.05 * (hi - lo);

  Vec x = Vec::Zero(n);
  std::vector<int> pos = rng.sample_without_replacement(n, k_support);
  for (int i : pos) {
    double a = 0.0;
    int tries = 0;
    do {
      a = rng.uniform(lo, hi);
      if (++tries > 100000) throw ContractViolation("gen_sparse: cannot satisfy amplitude exclusion");
    } while (std::abs(a) < exclusion);
    x[i] = a;
  }
  return x;
}

}  // namespace ipotts
