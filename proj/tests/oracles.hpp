#pragma once

// Brute-force reference computations for the test suites. Everything here is
// independent of the library solve paths: exhaustive enumeration over
// partitions and supports, direct DFT sums, and dense SVD.

#include "ipotts/linops.hpp"
#include "ipotts/rng.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

using ipotts::CVec;
using ipotts::Mat;
using ipotts::Vec;

/// Least squares with an absolute singular-value cutoff so that columns that
/// cancel to roundoff (for example A*diff applied to a constant) do not count
/// as genuine directions. Returns the minimizing coefficients.
inline Vec least_squares_coef(const Mat& m, const Vec& b) {
  if (m.cols() == 0) return Vec();
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cutoff = 1e-10 * std::max(1.0, svd.singularValues()(0));
  Vec coef = Vec::Zero(m.cols());
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > cutoff)
      coef += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(b) / svd.singularValues()(i));
  return coef;
}

/// min over c of |M c - b|_2^2 (rank-deficient M allowed).
inline double least_squares_min(const Mat& m, const Vec& b) {
  if (m.cols() == 0) return b.squaredNorm();
  return (m * least_squares_coef(m, b) - b).squaredNorm();
}

/// Exhaustive minimum of delta*|grad u|_0 + |u - f|_2^2 over all partitions
/// of {0..n-1} into intervals, each fit by its mean.
inline double exhaustive_potts_min(const Vec& f, double delta) {
  const int n = static_cast<int>(f.size());
  double best = std::numeric_limits<double>::infinity();
  const unsigned long masks = 1ull << (n - 1);
  for (unsigned long mask = 0; mask < masks; ++mask) {
    double energy = delta * static_cast<double>(__builtin_popcountll(mask));
    int start = 0;
    for (int i = 0; i < n; ++i) {
      const bool boundary = i == n - 1 || (mask >> i) & 1u;
      if (!boundary) continue;
      const int len = i - start + 1;
      double mean = 0.0;
      for (int j = start; j <= i; ++j) mean += f[j];
      mean /= len;
      for (int j = start; j <= i; ++j) energy += (f[j] - mean) * (f[j] - mean);
      start = i + 1;
    }
    best = std::min(best, energy);
  }
  return best;
}

/// Segment indicator matrix for a jump set given as a boundary bitmask over
/// positions {0..n-2}.
inline Mat segment_indicators(int n, unsigned long mask) {
  std::vector<int> seg_of(n);
  int seg = 0;
  for (int i = 0; i < n; ++i) {
    seg_of[i] = seg;
    if (i < n - 1 && ((mask >> i) & 1u)) ++seg;
  }
  Mat s = Mat::Zero(n, seg + 1);
  for (int i = 0; i < n; ++i) s(i, seg_of[i]) = 1.0;
  return s;
}

/// Exhaustive minimum of gamma*|grad x|_0 + |A x - b|_2^2 over all jump sets,
/// with the optimal plateau values from least squares.
inline double exhaustive_inverse_potts_min(const Mat& a, const Vec& b, double gamma) {
  const int n = static_cast<int>(a.cols());
  double best = std::numeric_limits<double>::infinity();
  for (unsigned long mask = 0; mask < (1ull << (n - 1)); ++mask) {
    const double e = gamma * static_cast<double>(__builtin_popcountll(mask)) +
                     least_squares_min(a * segment_indicators(n, mask), b);
    best = std::min(best, e);
  }
  return best;
}

/// Exhaustive minimum of gamma*|x|_0 + |A x - b|_2^2 over all supports,
/// returning the minimizing x as well.
inline std::pair<double, Vec> exhaustive_sparsity_argmin(const Mat& a, const Vec& b,
                                                         double gamma) {
  const int n = static_cast<int>(a.cols());
  double best = std::numeric_limits<double>::infinity();
  Vec best_x = Vec::Zero(n);
  for (unsigned long mask = 0; mask < (1ull << n); ++mask) {
    std::vector<int> support;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1u) support.push_back(i);
    Mat sub(a.rows(), support.size());
    for (std::size_t i = 0; i < support.size(); ++i)
      sub.col(static_cast<Eigen::Index>(i)) = a.col(support[i]);
    const Vec coef = least_squares_coef(sub, b);
    const double e = gamma * static_cast<double>(support.size()) +
                     (support.empty() ? b.squaredNorm() : (sub * coef - b).squaredNorm());
    if (e < best) {
      best = e;
      best_x.setZero();
      for (std::size_t i = 0; i < support.size(); ++i)
        best_x[support[i]] = coef[static_cast<Eigen::Index>(i)];
    }
  }
  return {best, best_x};
}

/// Direct O(n m) DFT sum for the reduced Fourier matrix rows.
inline CVec direct_partial_dft(const Vec& x, const std::vector<int>& samples) {
  const int n = static_cast<int>(x.size());
  CVec y(static_cast<Eigen::Index>(samples.size()));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    std::complex<double> acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const double phase = -2.0 * M_PI * samples[i] * static_cast<double>(k) / n;
      acc += x[k] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    y[static_cast<Eigen::Index>(i)] = scale * acc;
  }
  return y;
}

inline double svd_operator_norm(const Mat& a) {
  return Eigen::JacobiSVD<Mat>(a).singularValues()(0);
}

inline Mat random_matrix(int rows, int cols, ipotts::Rng& rng) {
  Mat a(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a(i, j) = rng.normal(1.0);
  return a;
}

inline Vec random_vector(int n, ipotts::Rng& rng) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal(1.0);
  return v;
}

}  // namespace oracle
