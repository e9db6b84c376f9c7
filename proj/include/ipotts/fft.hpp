#pragma once

#include "ipotts/types.hpp"

#include <unsupported/Eigen/FFT>

namespace ipotts {

/// Unnormalized DFT, X_j = sum_k x_k exp(-2*pi*i*j*k/n). Any length.
inline CVec dft(const CVec& x) {
  Eigen::FFT<double> fft;
  CVec out(x.size());
  std::vector<std::complex<double>> in(x.data(), x.data() + x.size());
  std::vector<std::complex<double>> result(x.size());
  fft.fwd(result, in);
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = result[i];
  return out;
}

/// Unnormalized inverse DFT, x_k = sum_j X_j exp(+2*pi*i*j*k/n).
/// Composing idft(dft(x)) yields n*x.
inline CVec idft(const CVec& x) {
  return dft(x.conjugate()).conjugate();
}

}  // namespace ipotts
