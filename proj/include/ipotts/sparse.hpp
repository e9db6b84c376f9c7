#pragma once

#include "ipotts/admm.hpp"

#include <utility>

namespace ipotts {

/// min over x of gamma * |x|_0 + |A x - b|_p^p.
struct SparseProblem {
  const MeasurementOperator* op;
  const MeasurementData* b;
  double gamma;
  int p;

  void validate() const {
    require(op != nullptr && b != nullptr, "SparseProblem: missing operator or data");
    require(gamma > 0.0, "SparseProblem: gamma must be > 0");
    require(p == 1 || p == 2, "SparseProblem: p must be 1 or 2");
    require(b->m() == op->rows(), "SparseProblem: data length mismatch");
  }
};

/// Componentwise minimizer of delta * |u|_0 + |u - w|_2^2: keeps w_i when
/// w_i^2 > delta, zeroes it otherwise (ties go to zero).
inline Vec hard_threshold(const Vec& w, double delta) {
  require(delta >= 0.0, "hard_threshold: delta must be >= 0");
  Vec u = w;
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (u[i] * u[i] <= delta) u[i] = 0.0;
  return u;
}

/// Sparsity solve through the Potts machinery: runs the Potts splitting on
/// the composed operator B = A * diff over length n+1 signals with the same
/// data and gamma, then returns the differences of the inner minimizer. The
/// inner signal's absolute offset is unconstrained by the data (B kills
/// constants), so the returned differences are offset-invariant.
inline AdmmResult solve_sparse_via_potts(const SparseProblem& prob, const AdmmConfig& cfg) {
  prob.validate();
  MeasurementOperator composed = MeasurementOperator::diff_compose(*prob.op);
  AdmmResult inner = run_ipotts_admm(composed, *prob.b, cfg);
  AdmmResult res;
  res.u = diff(inner.u);
  res.trace = std::move(inner.trace);
  res.converged = inner.converged;
  res.iterations = inner.iterations;
  return res;
}

/// Consensus splitting applied to the sparsity problem directly: the Potts
/// subproblem is replaced by hard thresholding of v^k - lambda^k/mu_k with
/// parameter 2*gamma/mu_k; the Tikhonov subproblem and the mu schedule are
/// identical to the Potts splitting so the two methods compare fairly.
inline AdmmResult solve_sparse_direct_admm(const SparseProblem& prob, const AdmmConfig& cfg) {
  prob.validate();
  return detail::run_admm_splitting(
      *prob.op, *prob.b, cfg, [](const Vec& d, double delta) { return hard_threshold(d, delta); },
      [](const Vec& u) { return count_nonzeros(u); });
}

/// Converse reduction (p = 2 only): data of the sparsity problem whose
/// minimizers map back to minimizers of the Potts problem for (A, b). The
/// induced problem uses the matrix B = a_prime * diff_pinv and data b_prime;
/// mu(x0) = mu_d - mu_e . x0 restores the optimal constant component.
/// Materialized densely; this is an analysis tool, not the production path.
struct PottsToSparseTransform {
  Mat a_prime;
  Vec b_prime;
  Vec row_sums;  // Atilde_i = sum_j A_ij
  double mu_d;
  Eigen::RowVectorXd mu_e;
  int n;

  /// B = a_prime * diff_pinv as a dense (m x n-1) matrix.
  Mat induced_matrix() const {
    Mat b(a_prime.rows(), n - 1);
    for (int k = 0; k < n - 1; ++k) {
      Vec e = Vec::Zero(n - 1);
      e[k] = 1.0;
      b.col(k) = a_prime * diff_pinv(e);
    }
    return b;
  }

  double mu_of(const Vec& x0) const { return mu_d - mu_e.dot(x0); }
};

inline PottsToSparseTransform build_potts_to_sparse(const MeasurementOperator& op,
                                                    const MeasurementData& b) {
  require(!op.is_complex(), "build_potts_to_sparse: requires a real operator");
  require(!b.complex_kind && b.m() == op.rows(), "build_potts_to_sparse: data mismatch");
  const Mat a = op.materialize_realified();
  const Vec& bv = b.realified;
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());

  Vec atilde = a.rowwise().sum();
  const double denom = atilde.squaredNorm();
  if (denom == 0.0)
    throw ContractViolation(
        "build_potts_to_sparse: all row sums vanish (A e = 0), mu(x0) is undefined");

  const Eigen::RowVectorXd s = atilde.transpose() * a;  // s_j = sum_i Atilde_i A_ij
  const double sb = atilde.dot(bv);

  PottsToSparseTransform t;
  t.n = n;
  t.row_sums = atilde;
  t.a_prime = a - (atilde * s) / denom;
  t.b_prime = bv - (sb / denom) * atilde;
  t.mu_d = sb / denom;
  t.mu_e = s / denom;
  (void)m;
  return t;
}

/// Maps a minimizer u* of the induced sparsity problem back to a Potts
/// minimizer x* = diff_pinv(u*) + mu(diff_pinv(u*)) e. An empty u* handles
/// the n = 1 edge, where x* is the single value mu_d.
inline Vec recover_potts_solution(const PottsToSparseTransform& t, const Vec& u_star) {
  require(u_star.size() == t.n - 1, "recover_potts_solution: u* length must be n-1");
  if (t.n == 1) return Vec::Constant(1, t.mu_d);
  const Vec x0 = diff_pinv(u_star);
  return x0.array() + t.mu_of(x0);
}

}  // namespace ipotts
