#pragma once

#include "ipotts/linops.hpp"
#include "ipotts/potts_dp.hpp"
#include "ipotts/tikhonov.hpp"

#include <cstdio>
#include <functional>
#include <optional>
#include <ostream>
#include <utility>

namespace ipotts {

/// Parameters of the splitting iteration. tau > 1 keeps the coupling weights
/// mu_k = mu0 * tau^k summable in 1/sqrt(mu_k), which the convergence
/// argument requires.
struct AdmmConfig {
  double gamma = 0.0;
  int p = 2;
  double mu0_factor = 1e-6;  // mu0 = gamma * mu0_factor
  double tau = 1.05;
  double tol = 1e-6;  // stop when |u - v|_2^2 < tol
  int max_iter = 2000;
  double l1_subproblem_tol = -1.0;  // <= 0: solver default

  void validate() const {
    require(gamma > 0.0, "AdmmConfig: gamma must be > 0");
    require(p == 1 || p == 2, "AdmmConfig: p must be 1 or 2");
    require(mu0_factor > 0.0, "AdmmConfig: mu0_factor must be > 0");
    require(tau > 1.0, "AdmmConfig: tau must be > 1");
    require(tol > 0.0, "AdmmConfig: tol must be > 0");
    require(max_iter >= 1, "AdmmConfig: max_iter must be >= 1");
  }
};

struct AdmmIter {
  int k;
  double mu;
  double gap;              // |u - v|_2^2 after the iteration
  double energy;           // gamma * l0-term(u) + |A u - b|_p^p
  double bound;            // gamma * n / mu
  double subproblem_dist;  // |u^{k+1} - (v^k - lambda^k / mu_k)|_2^2
  double lambda_rel;       // |lambda^{k+1} / mu_{k+1}|_2
};

struct AdmmTrace {
  std::vector<AdmmIter> iters;

  /// True if the measured first-subproblem distance stays within the
  /// gamma*n/mu_k bound at every iteration.
  bool bound_satisfied() const {
    for (const auto& it : iters)
      if (!(it.subproblem_dist <= it.bound)) return false;
    return true;
  }

  void write_csv(std::ostream& os) const {
    os << "k,mu,gap,energy,bound\n";
    char buf[160];
    for (const auto& it : iters) {
      std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", it.k, it.mu, it.gap,
                    it.energy, it.bound);
      os << buf;
    }
  }
};

struct AdmmResult {
  Vec u;
  AdmmTrace trace;
  bool converged = false;
  int iterations = 0;
};

/// gamma * |grad x|_0 + |A x - b|_p^p.
inline double potts_energy(const MeasurementOperator& op, const MeasurementData& b, double gamma,
                           int p, const Vec& x) {
  return gamma * count_jumps(x) + data_misfit(op, b, p, x);
}

/// gamma * |x|_0 + |A x - b|_p^p.
inline double sparsity_energy(const MeasurementOperator& op, const MeasurementData& b,
                              double gamma, int p, const Vec& x) {
  return gamma * count_nonzeros(x) + data_misfit(op, b, p, x);
}

namespace detail {

/// Shared splitting loop. `first_subproblem(d, delta)` must return the exact
/// minimizer of delta * l0_term(u) + |u - d|_2^2, and `l0_term(u)` the count
/// it penalizes (jumps or nonzeros).
template <typename FirstSubproblem, typename L0Term>
AdmmResult run_admm_splitting(const MeasurementOperator& op, const MeasurementData& b,
                              const AdmmConfig& cfg, FirstSubproblem&& first_subproblem,
                              L0Term&& l0_term, std::optional<Vec> init = {}) {
  cfg.validate();
  require(b.m() == op.rows(), "admm: data length mismatch");
  if (cfg.p == 1)
    require(!op.is_complex(), "admm: p = 1 requires a real operator");
  const int n = op.cols();

  Vec v = init ? std::move(*init) : op.adjoint_realified(b.realified);
  require(v.size() == n, "admm: init length mismatch");
  Vec lambda = Vec::Zero(n);
  double mu = cfg.gamma * cfg.mu0_factor;

  // The L1 subproblem is solved against a fixed operator; build its dense
  // form and row Gram once for the whole run.
  Mat a_mat, row_gram;
  if (cfg.p == 1) {
    a_mat = op.materialize_realified();
    row_gram = a_mat * a_mat.transpose();
  }

  AdmmResult res;
  res.trace.iters.reserve(64);
  Vec u;
  for (int k = 0; k < cfg.max_iter; ++k) {
    const Vec d = v - lambda / mu;
    u = first_subproblem(d, 2.0 * cfg.gamma / mu);
    const double sub_dist = (u - d).squaredNorm();

    TikhonovProblem sub{&op, &b, u + lambda / mu, mu / 2.0, cfg.p};
    v = cfg.p == 2 ? solve_l2(sub)
                   : solve_l1(sub, cfg.l1_subproblem_tol, nullptr, &a_mat, &row_gram);

    lambda += mu * (u - v);
    const double gap = (u - v).squaredNorm();
    const double mu_k = mu;
    mu *= cfg.tau;
    res.trace.iters.push_back({k, mu_k, gap,
                               cfg.gamma * l0_term(u) + data_misfit(op, b, cfg.p, u),
                               cfg.gamma * n / mu_k, sub_dist, lambda.norm() / mu});
    res.iterations = k + 1;
    if (gap < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  res.u = std::move(u);
  return res;
}

}  // namespace detail

/// Splitting iteration for the inverse Potts problem
/// gamma * |grad u|_0 + |A u - b|_p^p:
/// alternates the exact univariate Potts solve on v^k - lambda^k/mu_k with
/// parameter 2*gamma/mu_k, the Tikhonov solve with offset u^{k+1} +
/// lambda^k/mu_k and weight mu_k/2, and the multiplier update, with mu
/// growing geometrically. Initialization v^0 = Re(A* b) unless `init` is
/// given. Non-convergence within max_iter is reported through the flag, not
/// thrown, so parameter sweeps always complete.
inline AdmmResult run_ipotts_admm(const MeasurementOperator& op, const MeasurementData& b,
                                  const AdmmConfig& cfg, std::optional<Vec> init = {}) {
  return detail::run_admm_splitting(
      op, b, cfg, [](const Vec& d, double delta) { return solve_potts_1d(d, delta).values; },
      [](const Vec& u) { return count_jumps(u); }, std::move(init));
}

}  // namespace ipotts
