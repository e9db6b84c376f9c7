#pragma once

#include "ipotts/linops.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>

namespace ipotts {

/// min over v of half_mu*|v - w|_2^2 + |A v - b|_p^p.
struct TikhonovProblem {
  const MeasurementOperator* op;
  const MeasurementData* b;
  Vec w;
  double half_mu;
  int p;

  void validate() const {
    require(op != nullptr && b != nullptr, "TikhonovProblem: missing operator or data");
    require(half_mu > 0.0, "TikhonovProblem: half_mu must be > 0");
    require(p == 1 || p == 2, "TikhonovProblem: p must be 1 or 2");
    require(w.size() == op->cols(), "TikhonovProblem: offset length mismatch");
    require(b->m() == op->rows(), "TikhonovProblem: data length mismatch");
  }
};

inline double tikhonov_objective(const TikhonovProblem& prob, const Vec& v) {
  return prob.half_mu * (v - prob.w).squaredNorm() + data_misfit(*prob.op, *prob.b, prob.p, v);
}

/// p=2 case: solves the real normal equation
///   (Re(A*A) + half_mu I) v = Re(A*b) + half_mu w.
/// Dispatch: FFT-diagonal solve when the normal matrix is circulant (full
/// circular convolution, partial Fourier), band Cholesky for truncate-mode
/// convolutions, dense Cholesky otherwise.
inline Vec solve_l2(const TikhonovProblem& prob) {
  prob.validate();
  require(prob.p == 2, "solve_l2: requires p = 2");
  const MeasurementOperator& op = *prob.op;
  Vec rhs = op.adjoint_realified(prob.b->realified) + prob.half_mu * prob.w;

  switch (op.solve_structure()) {
    case SolveStructure::CirculantGram: {
      const Vec symbol = op.circulant_gram_symbol();
      CVec rhat = dft(rhs.cast<std::complex<double>>());
      for (Eigen::Index i = 0; i < rhat.size(); ++i) rhat[i] /= symbol[i] + prob.half_mu;
      return idft(rhat).real() / static_cast<double>(rhs.size());
    }
    case SolveStructure::BandedGram: {
      BandMatrix band = op.gram_band();
      band.add_diagonal(prob.half_mu);
      return band.solve(rhs);
    }
    case SolveStructure::DenseGram:
    default: {
      Mat g = op.gram_dense();
      g.diagonal().array() += prob.half_mu;
      Eigen::LLT<Mat> llt(g);
      if (llt.info() == Eigen::Success) return llt.solve(rhs);
      Eigen::LDLT<Mat> ldlt(g);  // cannot normally happen: half_mu > 0 makes g SPD
      if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("solve_l2: normal-equation factorization failed");
      return ldlt.solve(rhs);
    }
  }
}

/// p=1 case: minimizes half_mu*|v - w|_2^2 + |A v - b|_1 through its dual,
///   min over q in [-1,1]^m of q^T H q / 2 - q^T c,
/// with H = A A^T / mu and c = A w - b, solved by a projected (semismooth)
/// Newton method with Armijo backtracking. The primal iterate is
/// v(q) = w - A^T q / mu and the duality gap |r|_1 - q^T r with
/// r = A v(q) - b certifies the result: the returned v has objective within
/// tol of the optimum. tol <= 0 selects the default 1e-8 * (1 + |b|_1).
///
/// Throws ConvergenceError (carrying the best iterate) if the certificate is
/// not met within the iteration cap.
///
/// Callers solving many subproblems against one operator can pass the
/// materialized operator and its row Gram A A^T to avoid rebuilding them;
/// achieved_gap, when non-null, receives the certified duality gap.
inline Vec solve_l1(const TikhonovProblem& prob, double tol = -1.0,
                    double* achieved_gap = nullptr, const Mat* a_cached = nullptr,
                    const Mat* row_gram_cached = nullptr) {
  prob.validate();
  require(prob.p == 1, "solve_l1: requires p = 1");
  require(!prob.op->is_complex(), "solve_l1: complex operators are not supported for p = 1");

  const double mu = 2.0 * prob.half_mu;
  const Vec& bvec = prob.b->realified;
  if (tol <= 0.0) tol = 1e-8 * (1.0 + bvec.lpNorm<1>());

  Mat a_local;
  if (!a_cached) a_local = prob.op->materialize_realified();
  const Mat& a = a_cached ? *a_cached : a_local;
  Mat gram_local;
  if (!row_gram_cached) gram_local = a * a.transpose();
  const int m = static_cast<int>(a.rows());
  const Mat h = (row_gram_cached ? *row_gram_cached : gram_local) / mu;
  const Vec c = a * prob.w - bvec;

  auto phi = [&](const Vec& q, const Vec& hq) { return 0.5 * q.dot(hq) - q.dot(c); };
  auto v_of = [&](const Vec& q) -> Vec { return prob.w - a.transpose() * q / mu; };

  Vec q = Vec::Zero(m);
  Vec hq = Vec::Zero(m);
  double best_gap = std::numeric_limits<double>::infinity();
  Vec best_q = q;

  const int max_iter = 300;
  for (int it = 0; it < max_iter; ++it) {
    const Vec r = c - hq;  // equals A v(q) - b
    const Vec grad = -r;
    const double gap = r.lpNorm<1>() - q.dot(r);
    if (gap < best_gap) {
      best_gap = gap;
      best_q = q;
    }
    if (gap <= tol) {
      if (achieved_gap) *achieved_gap = gap;
      return v_of(q);
    }

    // Free set: coordinates not blocked at a bound with an outward gradient.
    std::vector<int> free;
    free.reserve(m);
    for (int i = 0; i < m; ++i) {
      const bool binding = (q[i] >= 1.0 && grad[i] <= 0.0) || (q[i] <= -1.0 && grad[i] >= 0.0);
      if (!binding) free.push_back(i);
    }

    Vec d = grad;  // projected-gradient direction on binding coordinates
    if (!free.empty()) {
      const int nf = static_cast<int>(free.size());
      Mat hff(nf, nf);
      Vec gf(nf);
      for (int i = 0; i < nf; ++i) {
        gf[i] = grad[free[i]];
        for (int j = 0; j < nf; ++j) hff(i, j) = h(free[i], free[j]);
      }
      hff.diagonal().array() += 1e-12 * (1.0 + hff.diagonal().maxCoeff());
      const Vec df = Eigen::LDLT<Mat>(hff).solve(gf);
      for (int i = 0; i < nf; ++i) d[free[i]] = df[i];
    }

    const double phi0 = phi(q, hq);
    double alpha = 1.0;
    bool stepped = false;
    for (int ls = 0; ls < 40; ++ls) {
      Vec qn = (q - alpha * d).cwiseMax(-1.0).cwiseMin(1.0);
      Vec hqn = h * qn;
      if (phi(qn, hqn) <= phi0 - 1e-4 * grad.dot(q - qn)) {
        q = std::move(qn);
        hq = std::move(hqn);
        stepped = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!stepped) break;  // no progress possible at working precision
  }

  const Vec r = c - h * q;
  const double gap = r.lpNorm<1>() - q.dot(r);
  if (gap < best_gap) {
    best_gap = gap;
    best_q = q;
  }
  if (best_gap <= tol) {
    if (achieved_gap) *achieved_gap = best_gap;
    return v_of(best_q);
  }
  throw ConvergenceError("solve_l1: duality-gap certificate not met within iteration cap",
                         v_of(best_q), best_gap);
}

}  // namespace ipotts
