#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace ipotts {

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

/// Thrown when a caller violates a documented precondition (dimension
/// mismatch, invalid parameter, malformed index set, ...).
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when an iterative solver exhausts its iteration budget before its
/// accuracy certificate is met. Carries the best iterate found so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, Vec best_iterate, double residual)
      : std::runtime_error(what), best(std::move(best_iterate)), best_residual(residual) {}

  Vec best;
  double best_residual;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ContractViolation(msg);
}

/// Number of indices i with x_i != x_{i+1} (exact comparison).
inline int count_jumps(const Vec& x) {
  int c = 0;
  for (Eigen::Index i = 0; i + 1 < x.size(); ++i)
    if (x[i] != x[i + 1]) ++c;
  return c;
}

/// Number of exactly non-zero entries.
inline int count_nonzeros(const Vec& x) {
  int c = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) ++c;
  return c;
}

}  // namespace ipotts
