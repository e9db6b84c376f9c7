#pragma once

#include "ipotts/types.hpp"

#include <lapacke.h>

namespace ipotts {

/// Symmetric positive definite band matrix in LAPACK lower band storage:
/// ab(i, j) holds A(j + i, j) for i in [0, half_bandwidth].
class BandMatrix {
 public:
  BandMatrix(int n, int half_bandwidth)
      : n_(n), hb_(half_bandwidth), ab_(Mat::Zero(half_bandwidth + 1, n)) {}

  int size() const { return n_; }
  int half_bandwidth() const { return hb_; }

  double& at(int row, int col) {  // requires col <= row <= col + hb
    return ab_(row - col, col);
  }
  double at(int row, int col) const { return ab_(row - col, col); }

  /// Adds c to every diagonal entry.
  void add_diagonal(double c) {
    for (int j = 0; j < n_; ++j) ab_(0, j) += c;
  }

  /// Solves A x = rhs via LAPACK dpbsv (Cholesky of the band).
  Vec solve(const Vec& rhs) const {
    require(rhs.size() == n_, "BandMatrix::solve: rhs length mismatch");
    Mat ab = ab_;  // dpbsv overwrites the band with its factorization
    Vec x = rhs;
    lapack_int info = LAPACKE_dpbsv(LAPACK_COL_MAJOR, 'L', n_, hb_, 1, ab.data(),
                                    hb_ + 1, x.data(), n_);
    if (info != 0)
      throw std::runtime_error("BandMatrix::solve: dpbsv failed, info=" + std::to_string(info));
    return x;
  }

  Mat to_dense() const {
    Mat a = Mat::Zero(n_, n_);
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i <= hb_ && j + i < n_; ++i) {
        a(j + i, j) = ab_(i, j);
        a(j, j + i) = ab_(i, j);
      }
    return a;
  }

 private:
  int n_;
  int hb_;
  Mat ab_;
};

}  // namespace ipotts
