#pragma once

#include "ipotts/types.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ipotts {

/// Prefix sums of f and f^2, accumulated in long double so that interval
/// statistics stay accurate under heavy cancellation.
struct PrefixMoments {
  std::vector<long double> cum_sum;     // size n+1, cum_sum[0] = 0
  std::vector<long double> cum_sum_sq;  // size n+1

  static PrefixMoments of(const Vec& f) {
    PrefixMoments m;
    const auto n = static_cast<std::size_t>(f.size());
    m.cum_sum.assign(n + 1, 0.0L);
    m.cum_sum_sq.assign(n + 1, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
      long double v = f[static_cast<Eigen::Index>(i)];
      m.cum_sum[i + 1] = m.cum_sum[i] + v;
      m.cum_sum_sq[i + 1] = m.cum_sum_sq[i] + v * v;
    }
    return m;
  }

  int n() const { return static_cast<int>(cum_sum.size()) - 1; }
};

struct IntervalStats {
  double mean;
  double sq_error;  // sum over the interval of (f_i - mean)^2
};

/// Best constant fit on the inclusive 0-based interval [l, r] in O(1):
/// mean and squared error via the moment identity, clamped at zero.
inline IntervalStats interval_stats(const PrefixMoments& m, int l, int r) {
  require(0 <= l && l <= r && r < m.n(), "interval_stats: index out of range");
  const long double len = static_cast<long double>(r - l + 1);
  const long double s = m.cum_sum[static_cast<std::size_t>(r) + 1] - m.cum_sum[static_cast<std::size_t>(l)];
  const long double q = m.cum_sum_sq[static_cast<std::size_t>(r) + 1] - m.cum_sum_sq[static_cast<std::size_t>(l)];
  long double err = q - s * s / len;
  if (err < 0.0L) err = 0.0L;
  return {static_cast<double>(s / len), static_cast<double>(err)};
}

/// Piecewise-constant signal together with its jump set
/// {i : values_i != values_{i+1}}.
struct PiecewiseSignal {
  Vec values;
  std::vector<int> jump_set;

  int jump_count() const { return static_cast<int>(jump_set.size()); }

  static PiecewiseSignal of(Vec v) {
    PiecewiseSignal p;
    p.values = std::move(v);
    for (Eigen::Index i = 0; i + 1 < p.values.size(); ++i)
      if (p.values[i] != p.values[i + 1]) p.jump_set.push_back(static_cast<int>(i));
    return p;
  }
};

inline double classical_potts_energy(const Vec& f, const Vec& u, double delta) {
  return delta * count_jumps(u) + (u - f).squaredNorm();
}

/// Exact global minimizer of delta*|grad u|_0 + |u - f|_2^2 by dynamic
/// programming over the last-segment start, O(n^2) time and O(n) space.
/// Jump positions are recovered by backtracking a predecessor array.
///
/// Ties (candidate energies equal within 1e-12 relative) are broken toward
/// fewer jumps, then toward the leftmost last-segment start. This pins a
/// deterministic minimizer when the problem has several.
inline PiecewiseSignal solve_potts_1d(const Vec& f, double delta) {
  require(delta >= 0.0, "solve_potts_1d: delta must be >= 0");
  require(f.size() >= 1, "solve_potts_1d: empty signal");
  const int n = static_cast<int>(f.size());
  const PrefixMoments moments = PrefixMoments::of(f);

  // best[r]: optimal energy for the prefix of length r, with best[0] = -delta
  // so the first segment pays no jump.
  std::vector<double> best(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> jumps(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> prev(static_cast<std::size_t>(n), 0);
  best[0] = -delta;

  auto nearly_equal = [](double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
  };

  for (int r = 0; r < n; ++r) {
    double best_e = 0.0;
    int best_l = -1, best_j = 0;
    for (int l = 0; l <= r; ++l) {
      const double e = best[l] + delta + interval_stats(moments, l, r).sq_error;
      const int j = jumps[l] + (l > 0 ? 1 : 0);
      bool take;
      if (best_l < 0) take = true;
      else if (nearly_equal(e, best_e)) take = j < best_j;
      else take = e < best_e;
      if (take) {
        best_e = e;
        best_l = l;
        best_j = j;
      }
    }
    best[static_cast<std::size_t>(r) + 1] = best_e;
    prev[r] = best_l;
    jumps[static_cast<std::size_t>(r) + 1] = best_j;
  }

  Vec u(n);
  int r = n;
  while (r > 0) {
    const int l = prev[r - 1];
    const double mean = interval_stats(moments, l, r - 1).mean;
    for (int i = l; i < r; ++i) u[i] = mean;
    r = l;
  }
  return PiecewiseSignal::of(std::move(u));
}

}  // namespace ipotts
