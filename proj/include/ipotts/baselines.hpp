#pragma once

#include "ipotts/linops.hpp"
#include "ipotts/sparse.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace ipotts {

/// Fixed-iteration first-order saddle-point scheme; step sizes are derived
/// from the norm of the stacked operator so that sigma*tau*L^2 < 1.
struct PrimalDualConfig {
  int iterations = 10000;
  double step_scale = 0.95;   // sigma = tau = step_scale / L
  double relaxation = 1.0;    // extrapolation weight theta
  int checkpoint_every = 100;
};

struct PdResult {
  Vec x;
  double fenchel_gap = 0.0;          // Fenchel-Young residual at the final iterate
  double dual_infeasibility = 0.0;   // |K^T y|_inf at the final iterate
  std::vector<double> checkpoint_objectives;
};

namespace detail {

enum class Regularizer { Differences, Identity };

inline Vec reg_apply(Regularizer reg, const Vec& x) {
  return reg == Regularizer::Differences ? diff(x) : x;
}

inline Vec reg_adjoint(Regularizer reg, const Vec& y) {
  return reg == Regularizer::Differences ? diff_adjoint(y) : y;
}

/// min over x of gamma * |R x|_1 + |A x - b|_p^p with both terms dualized:
/// K = [R; A], F(y1, y2) = gamma*|y1|_1 + |y2 - b|_p^p, G = 0.
inline PdResult saddle_point_solve(const MeasurementOperator& op, const MeasurementData& b,
                                   double gamma, int p, const PrimalDualConfig& cfg,
                                   Regularizer reg) {
  require(p == 1 || p == 2, "saddle_point_solve: p must be 1 or 2");
  if (p == 1) require(!b.complex_kind, "saddle_point_solve: p = 1 requires real data");
  require(gamma >= 0.0, "saddle_point_solve: gamma must be >= 0");
  const int n = op.cols();
  require(n >= 2 || reg == Regularizer::Identity, "saddle_point_solve: signal too short");

  // |K|^2 = lambda_max(R^T R + Re(A*A)) by power iteration.
  Vec z(n);
  for (int i = 0; i < n; ++i) z[i] = 1.0 + static_cast<double>(i) / n;
  z.normalize();
  double lsq = 1.0;
  for (int it = 0; it < 1000; ++it) {
    Vec w = reg_adjoint(reg, reg_apply(reg, z)) + op.adjoint_realified(op.apply_realified(z));
    double norm = w.norm();
    if (norm == 0.0) break;
    z = w / norm;
    if (it > 3 && std::abs(norm - lsq) <= 1e-12 * norm) {
      lsq = norm;
      break;
    }
    lsq = norm;
  }
  const double step = cfg.step_scale / std::sqrt(lsq);
  const double sigma = step, tau = step, theta = cfg.relaxation;

  const Vec& bhat = b.realified;
  Vec x = Vec::Zero(n), xbar = x;
  Vec y1 = Vec::Zero(reg == Regularizer::Differences ? n - 1 : n);
  Vec y2 = Vec::Zero(op.rows_realified());

  PdResult res;
  for (int it = 1; it <= cfg.iterations; ++it) {
    y1 = (y1 + sigma * reg_apply(reg, xbar)).cwiseMax(-gamma).cwiseMin(gamma);
    Vec zeta = y2 + sigma * op.apply_realified(xbar) - sigma * bhat;
    if (p == 2)
      y2 = zeta / (1.0 + sigma / 2.0);
    else
      y2 = zeta.cwiseMax(-1.0).cwiseMin(1.0);

    Vec xn = x - tau * (reg_adjoint(reg, y1) + op.adjoint_realified(y2));
    xbar = xn + theta * (xn - x);
    x = std::move(xn);

    if (cfg.checkpoint_every > 0 && it % cfg.checkpoint_every == 0)
      res.checkpoint_objectives.push_back(gamma * reg_apply(reg, x).lpNorm<1>() +
                                          data_misfit(op, b, p, x));
  }

  const Vec rx = reg_apply(reg, x);
  const Vec ares = op.apply_realified(x) - bhat;
  double gap = gamma * rx.lpNorm<1>() - y1.dot(rx);
  if (p == 2)
    gap += (ares - 0.5 * y2).squaredNorm();
  else
    gap += ares.lpNorm<1>() - y2.dot(ares);
  res.fenchel_gap = gap;
  res.dual_infeasibility =
      (reg_adjoint(reg, y1) + op.adjoint_realified(y2)).lpNorm<Eigen::Infinity>();
  res.x = std::move(x);
  return res;
}

}  // namespace detail

/// Total variation baseline: gamma * |grad u|_1 + |A u - b|_p^p.
inline PdResult solve_tv(const MeasurementOperator& op, const MeasurementData& b, double gamma,
                         int p, const PrimalDualConfig& cfg = {}) {
  return detail::saddle_point_solve(op, b, gamma, p, cfg, detail::Regularizer::Differences);
}

/// Basis pursuit denoising: gamma * |x|_1 + |A x - b|_p^p, same engine with
/// the identity in place of the difference operator.
inline PdResult solve_bpdn(const MeasurementOperator& op, const MeasurementData& b, double gamma,
                           int p, const PrimalDualConfig& cfg = {}) {
  return detail::saddle_point_solve(op, b, gamma, p, cfg, detail::Regularizer::Identity);
}

struct OmpResult {
  Vec x;
  std::vector<int> support;                 // atoms in selection order
  std::vector<double> residual_sq_history;  // |A x - b|_2^2 after each atom
  bool rank_deficient_stop = false;
};

/// Orthogonal matching pursuit: greedily selects the index maximizing
/// |A^T residual| (ties to the lowest index), refits least squares on the
/// selected support, and stops at k_max atoms or when the residual norm
/// drops below residual_tol.
inline OmpResult solve_omp(const MeasurementOperator& op, const MeasurementData& b, int k_max,
                           double residual_tol = 1e-10) {
  const int n = op.cols();
  require(k_max >= 0 && k_max <= std::min(op.rows(), n), "solve_omp: k_max out of range");
  const Mat a = op.materialize_realified();
  const Vec& bhat = b.realified;

  OmpResult res;
  res.x = Vec::Zero(n);
  Vec r = bhat;
  Mat asel(a.rows(), 0);
  for (int k = 0; k < k_max; ++k) {
    if (r.norm() < residual_tol) break;
    const Vec corr = a.transpose() * r;
    int pick = -1;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      if (std::find(res.support.begin(), res.support.end(), i) != res.support.end()) continue;
      if (pick < 0 || std::abs(corr[i]) > best) {
        pick = i;
        best = std::abs(corr[i]);
      }
    }
    if (pick < 0 || best == 0.0) break;

    asel.conservativeResize(Eigen::NoChange, k + 1);
    asel.col(k) = a.col(pick);
    Eigen::ColPivHouseholderQR<Mat> qr(asel);
    if (qr.rank() < k + 1) {
      res.rank_deficient_stop = true;
      asel.conservativeResize(Eigen::NoChange, k);
      break;
    }
    res.support.push_back(pick);
    const Vec coef = qr.solve(bhat);
    res.x.setZero();
    for (int i = 0; i <= k; ++i) res.x[res.support[static_cast<std::size_t>(i)]] = coef[i];
    r = bhat - asel * coef;
    res.residual_sq_history.push_back(r.squaredNorm());
  }
  return res;
}

enum class IhtMode { MTerm, Regularized };

struct IhtResult {
  Vec x;
  std::vector<double> objective_trace;
};

/// Iterative hard thresholding, x <- T(x + step * A^T (b - A x)). MTerm keeps
/// the k entries of largest magnitude (ties to the lower index); Regularized
/// applies hard_threshold with delta = step * gamma. step <= 0 selects
/// 0.95 / |A|^2; an explicit step must satisfy step <= 1/|A|^2 for the
/// surrogate argument to hold.
inline IhtResult solve_iht(const MeasurementOperator& op, const MeasurementData& b, IhtMode mode,
                           int k, double gamma, double step, int iters) {
  const int n = op.cols();
  const double opn = operator_norm(op, 1e-10);
  if (step <= 0.0) step = 0.95 / (opn * opn);
  require(step * opn * opn <= 1.0 + 1e-9, "solve_iht: step must be <= 1/|A|^2");
  if (mode == IhtMode::MTerm) require(k >= 0 && k <= n, "solve_iht: k out of range");

  const Vec& bhat = b.realified;
  Vec x = Vec::Zero(n);
  IhtResult res;
  std::vector<int> order(n);
  for (int it = 0; it < iters; ++it) {
    const Vec z = x + step * op.adjoint_realified(bhat - op.apply_realified(x));
    if (mode == IhtMode::Regularized) {
      x = hard_threshold(z, step * gamma);
      res.objective_trace.push_back(gamma * count_nonzeros(x) +
                                    (op.apply_realified(x) - bhat).squaredNorm());
    } else {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return std::abs(z[i]) > std::abs(z[j]);
      });
      x.setZero();
      for (int i = 0; i < k; ++i) x[order[static_cast<std::size_t>(i)]] = z[order[static_cast<std::size_t>(i)]];
      res.objective_trace.push_back((op.apply_realified(x) - bhat).squaredNorm());
    }
  }
  res.x = std::move(x);
  return res;
}

}  // namespace ipotts
