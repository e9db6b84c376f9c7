#pragma once

#include "ipotts/types.hpp"

#include <cmath>
#include <optional>

namespace ipotts {

/// Peak signal-to-noise ratio, 10*log10(n*|gt|_inf^2 / |gt - x|_2^2).
/// An exact match has no finite PSNR and is reported as the "perfect"
/// sentinel (nullopt).
inline std::optional<double> psnr(const Vec& x, const Vec& groundtruth) {
  require(x.size() == groundtruth.size(), "psnr: length mismatch");
  const double err = (groundtruth - x).squaredNorm();
  if (err == 0.0) return std::nullopt;
  const double peak = groundtruth.lpNorm<Eigen::Infinity>();
  return 10.0 * std::log10(static_cast<double>(x.size()) * peak * peak / err);
}

/// Exact support match, supp(x) == supp(reference) with supp = {i : x_i != 0}.
inline bool supports_equal(const Vec& x, const Vec& reference) {
  require(x.size() == reference.size(), "supports_equal: length mismatch");
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if ((x[i] != 0.0) != (reference[i] != 0.0)) return false;
  return true;
}

/// Support of a dense iterate under a relative magnitude threshold; used to
/// compare methods whose solvers do not produce exact zeros.
inline int thresholded_support_size(const Vec& x, double rel_tol = 1e-3) {
  const double peak = x.lpNorm<Eigen::Infinity>();
  if (peak == 0.0) return 0;
  int c = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (std::abs(x[i]) > rel_tol * peak) ++c;
  return c;
}

inline bool thresholded_supports_equal(const Vec& x, const Vec& reference, double rel_tol = 1e-3) {
  require(x.size() == reference.size(), "thresholded_supports_equal: length mismatch");
  const double peak = x.lpNorm<Eigen::Infinity>();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if ((std::abs(x[i]) > rel_tol * peak) != (reference[i] != 0.0)) return false;
  return true;
}

}  // namespace ipotts
