#pragma once

#include "ipotts/band_matrix.hpp"
#include "ipotts/fft.hpp"
#include "ipotts/types.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace ipotts {

/// Measurement vector b. Complex data is kept in "realified" layout
/// [Re(b); Im(b)] so that |A x - b|_2^2 over C^m equals the plain squared
/// norm of the realified residual; solvers never branch on the kind.
struct MeasurementData {
  Vec realified;
  bool complex_kind = false;

  int m() const {
    return complex_kind ? static_cast<int>(realified.size()) / 2
                        : static_cast<int>(realified.size());
  }

  CVec as_complex() const {
    const int mm = m();
    CVec z(mm);
    for (int i = 0; i < mm; ++i)
      z[i] = {realified[i], complex_kind ? realified[mm + i] : 0.0};
    return z;
  }

  static MeasurementData real(Vec v) { return {std::move(v), false}; }

  static MeasurementData from_complex(const CVec& z) {
    Vec r(2 * z.size());
    r.head(z.size()) = z.real();
    r.tail(z.size()) = z.imag();
    return {std::move(r), true};
  }
};

enum class Boundary { Truncate, Circular };

/// Structure of the real normal matrix Re(A*A), used to pick the Tikhonov
/// solve path.
enum class SolveStructure {
  CirculantGram,  // full circular convolution, partial Fourier
  BandedGram,     // truncate-mode partial convolution (plain or diff-composed)
  DenseGram,
};

/// Forward difference, (diff x)_i = x_{i+1} - x_i, length n+1 -> n.
inline Vec diff(const Vec& x) {
  require(x.size() >= 2, "diff: signal length must be >= 2");
  return x.tail(x.size() - 1) - x.head(x.size() - 1);
}

/// Adjoint of diff, length n -> n+1.
inline Vec diff_adjoint(const Vec& w) {
  Vec out = Vec::Zero(w.size() + 1);
  out.head(w.size()) -= w;
  out.tail(w.size()) += w;
  return out;
}

inline CVec diff_adjoint(const CVec& w) {
  CVec out = CVec::Zero(w.size() + 1);
  out.head(w.size()) -= w;
  out.tail(w.size()) += w;
  return out;
}

/// Pseudo-inverse of diff: the unique zero-mean x with diff(x) = u
/// (cumulative sums recentered to mean zero). Length n-1 -> n.
inline Vec diff_pinv(const Vec& u) {
  Vec x = Vec::Zero(u.size() + 1);
  for (Eigen::Index i = 0; i < u.size(); ++i) x[i + 1] = x[i] + u[i];
  x.array() -= x.mean();
  return x;
}

/// Tagged union over the measurement families: dense matrices (real or
/// complex), reduced Toeplitz convolution, reduced Fourier, and the
/// difference-composed operator B = A*diff used by the sparsity reduction.
/// Operators are immutable after construction; apply/adjoint are pure.
class MeasurementOperator {
 public:
  struct DenseReal {
    Mat a;
  };
  struct DenseComplex {
    CMat a;
  };
  struct PartialConv {
    Vec kernel;  // h_{-r..r}, size 2r+1
    int radius;
    std::vector<int> samples;  // sorted, unique, 0-based
    Boundary boundary;
    int n;
  };
  struct PartialFourier {
    std::vector<int> samples;  // frequency rows, sorted, unique, 0-based
    int n;
  };
  struct DiffComposed {
    std::shared_ptr<const MeasurementOperator> inner;
  };

  static MeasurementOperator dense(Mat a) {
    require(a.rows() >= 1 && a.cols() >= 1, "dense: empty matrix");
    return MeasurementOperator(DenseReal{std::move(a)});
  }

  static MeasurementOperator dense_complex(CMat a) {
    require(a.rows() >= 1 && a.cols() >= 1, "dense_complex: empty matrix");
    return MeasurementOperator(DenseComplex{std::move(a)});
  }

  static MeasurementOperator identity(int n) { return dense(Mat::Identity(n, n)); }

  static MeasurementOperator partial_convolution(Vec kernel, std::vector<int> samples,
                                                 Boundary boundary, int n) {
    require(n >= 1, "partial_convolution: n must be >= 1");
    require(kernel.size() >= 1 && kernel.size() % 2 == 1,
            "partial_convolution: kernel size must be odd (2r+1)");
    require(std::abs(kernel.sum()) > 0.0,
            "partial_convolution: kernel must have non-vanishing mean");
    validate_samples(samples, n);
    int r = (static_cast<int>(kernel.size()) - 1) / 2;
    return MeasurementOperator(PartialConv{std::move(kernel), r, std::move(samples), boundary, n});
  }

  static MeasurementOperator partial_fourier(std::vector<int> samples, int n) {
    require(n >= 1, "partial_fourier: n must be >= 1");
    validate_samples(samples, n);
    return MeasurementOperator(PartialFourier{std::move(samples), n});
  }

  /// B with B x = inner(diff(x)); acts on signals one longer than inner.
  static MeasurementOperator diff_compose(MeasurementOperator inner) {
    return MeasurementOperator(
        DiffComposed{std::make_shared<const MeasurementOperator>(std::move(inner))});
  }

  int rows() const {
    return std::visit(
        [](const auto& op) -> int {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, DenseReal>) return static_cast<int>(op.a.rows());
          else if constexpr (std::is_same_v<T, DenseComplex>) return static_cast<int>(op.a.rows());
          else if constexpr (std::is_same_v<T, PartialConv>) return static_cast<int>(op.samples.size());
          else if constexpr (std::is_same_v<T, PartialFourier>) return static_cast<int>(op.samples.size());
          else return op.inner->rows();
        },
        v_);
  }

  int cols() const {
    return std::visit(
        [](const auto& op) -> int {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, DenseReal>) return static_cast<int>(op.a.cols());
          else if constexpr (std::is_same_v<T, DenseComplex>) return static_cast<int>(op.a.cols());
          else if constexpr (std::is_same_v<T, PartialConv>) return op.n;
          else if constexpr (std::is_same_v<T, PartialFourier>) return op.n;
          else return op.inner->cols() + 1;
        },
        v_);
  }

  bool is_complex() const {
    return std::visit(
        [](const auto& op) -> bool {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, DenseComplex>) return true;
          else if constexpr (std::is_same_v<T, PartialFourier>) return true;
          else if constexpr (std::is_same_v<T, DiffComposed>) return op.inner->is_complex();
          else return false;
        },
        v_);
  }

  int rows_realified() const { return is_complex() ? 2 * rows() : rows(); }

  const PartialConv* as_partial_conv() const { return std::get_if<PartialConv>(&v_); }
  const PartialFourier* as_partial_fourier() const { return std::get_if<PartialFourier>(&v_); }
  const MeasurementOperator* diff_inner() const {
    auto* d = std::get_if<DiffComposed>(&v_);
    return d ? d->inner.get() : nullptr;
  }

  MeasurementData apply(const Vec& x) const {
    require(x.size() == cols(), "apply: signal length mismatch");
    if (!is_complex()) return MeasurementData::real(apply_real(x));
    return MeasurementData::from_complex(apply_complex(x));
  }

  /// A* y with the complex inner product; real operators yield zero
  /// imaginary part. Callers recovering real signals take real parts at the
  /// normal-equation stage, not here.
  CVec adjoint(const MeasurementData& y) const {
    require(y.m() == rows(), "adjoint: data length mismatch");
    return adjoint_complex(y.as_complex());
  }

  /// Action of the realified operator [Re A; Im A] on a real signal.
  Vec apply_realified(const Vec& x) const {
    require(x.size() == cols(), "apply_realified: signal length mismatch");
    if (!is_complex()) return apply_real(x);
    CVec z = apply_complex(x);
    Vec out(2 * z.size());
    out.head(z.size()) = z.real();
    out.tail(z.size()) = z.imag();
    return out;
  }

  /// Adjoint of the realified operator; equals Re(A* (y_re + i y_im)).
  Vec adjoint_realified(const Vec& y) const {
    require(y.size() == rows_realified(), "adjoint_realified: data length mismatch");
    if (!is_complex()) return adjoint_real(y);
    const int mm = rows();
    CVec z(mm);
    for (int i = 0; i < mm; ++i) z[i] = {y[i], y[mm + i]};
    return adjoint_complex(z).real();
  }

  SolveStructure solve_structure() const {
    if (const auto* c = std::get_if<PartialConv>(&v_)) {
      if (c->boundary == Boundary::Circular)
        return static_cast<int>(c->samples.size()) == c->n ? SolveStructure::CirculantGram
                                                           : SolveStructure::DenseGram;
      return SolveStructure::BandedGram;
    }
    if (std::holds_alternative<PartialFourier>(v_)) return SolveStructure::CirculantGram;
    if (const auto* d = std::get_if<DiffComposed>(&v_)) {
      const auto* ic = d->inner->as_partial_conv();
      if (ic && ic->boundary == Boundary::Truncate) return SolveStructure::BandedGram;
      return SolveStructure::DenseGram;
    }
    return SolveStructure::DenseGram;
  }

  /// DFT eigenvalues of the circulant normal matrix Re(A*A); only valid for
  /// SolveStructure::CirculantGram.
  Vec circulant_gram_symbol() const {
    if (const auto* c = std::get_if<PartialConv>(&v_)) {
      // Full circular convolution: symbol is |g_hat|^2 for the embedded kernel.
      CVec g = CVec::Zero(c->n);
      for (int t = -c->radius; t <= c->radius; ++t) {
        int idx = ((-t) % c->n + c->n) % c->n;
        g[idx] += c->kernel[t + c->radius];
      }
      return dft(g).cwiseAbs2();
    }
    if (const auto* f = std::get_if<PartialFourier>(&v_)) {
      // Re(A*A) is circulant with first column Re(idft(1_J))/n.
      CVec ind = CVec::Zero(f->n);
      for (int j : f->samples) ind[j] = 1.0;
      Vec col = idft(ind).real() / static_cast<double>(f->n);
      return dft(col.cast<std::complex<double>>()).real();
    }
    throw std::logic_error("circulant_gram_symbol: operator has no circulant gram");
  }

  int gram_half_bandwidth() const {
    if (const auto* c = std::get_if<PartialConv>(&v_)) return 2 * c->radius;
    if (const auto* d = std::get_if<DiffComposed>(&v_)) {
      const auto* ic = d->inner->as_partial_conv();
      if (ic) return 2 * ic->radius + 1;
    }
    throw std::logic_error("gram_half_bandwidth: operator gram is not banded");
  }

  /// Band of Re(A*A); only valid for SolveStructure::BandedGram.
  BandMatrix gram_band() const {
    if (const auto* c = std::get_if<PartialConv>(&v_)) return conv_gram_band(*c);
    if (const auto* d = std::get_if<DiffComposed>(&v_)) {
      const auto* ic = d->inner->as_partial_conv();
      if (ic && ic->boundary == Boundary::Truncate)
        return diff_wrap_band(conv_gram_band(*ic));
    }
    throw std::logic_error("gram_band: operator gram is not banded");
  }

  /// Dense Re(A*A), any operator.
  Mat gram_dense() const {
    return std::visit(
        [this](const auto& op) -> Mat {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, DenseReal>) {
            return op.a.transpose() * op.a;
          } else if constexpr (std::is_same_v<T, DenseComplex>) {
            Mat re = op.a.real(), im = op.a.imag();
            return re.transpose() * re + im.transpose() * im;
          } else if constexpr (std::is_same_v<T, PartialConv>) {
            return conv_gram_dense(op);
          } else if constexpr (std::is_same_v<T, PartialFourier>) {
            CVec ind = CVec::Zero(op.n);
            for (int j : op.samples) ind[j] = 1.0;
            Vec col = (idft(ind) / static_cast<double>(op.n)).real();
            Mat g(op.n, op.n);
            for (int k = 0; k < op.n; ++k)
              for (int l = 0; l < op.n; ++l) g(k, l) = col[((k - l) % op.n + op.n) % op.n];
            return g;
          } else {
            Mat gi = op.inner->gram_dense();
            const int ni = static_cast<int>(gi.rows());
            Mat g = Mat::Zero(ni + 1, ni + 1);
            auto at = [&](int a, int b) -> double {
              return (a >= 0 && a < ni && b >= 0 && b < ni) ? gi(a, b) : 0.0;
            };
            for (int i = 0; i <= ni; ++i)
              for (int j = 0; j <= ni; ++j)
                g(i, j) = at(i - 1, j - 1) - at(i - 1, j) - at(i, j - 1) + at(i, j);
            return g;
          }
        },
        v_);
  }

  /// Dense matrix of the realified operator (rows_realified x n); used by
  /// solvers that need explicit Gram factors and by test oracles.
  Mat materialize_realified() const {
    const int n = cols();
    Mat a(rows_realified(), n);
    Vec e = Vec::Zero(n);
    for (int k = 0; k < n; ++k) {
      e[k] = 1.0;
      a.col(k) = apply_realified(e);
      e[k] = 0.0;
    }
    return a;
  }

 private:
  using Variant = std::variant<DenseReal, DenseComplex, PartialConv, PartialFourier, DiffComposed>;

  explicit MeasurementOperator(Variant v) : v_(std::move(v)) {}

  static void validate_samples(std::vector<int>& samples, int n) {
    require(!samples.empty(), "sample index set must be non-empty");
    require(static_cast<int>(samples.size()) <= n, "sample index set larger than signal");
    std::sort(samples.begin(), samples.end());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      require(samples[i] >= 0 && samples[i] < n, "sample index out of range");
      if (i > 0) require(samples[i] != samples[i - 1], "duplicate sample index");
    }
  }

  Vec apply_real(const Vec& x) const {
    return std::visit(
        [&](const auto& op) -> Vec {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, DenseReal>) {
            return op.a * x;
          } else if constexpr (std::is_same_v<T, PartialConv>) {
            Vec y(op.samples.size());
            for (std::size_t i = 0; i < op.samples.size(); ++i) {
              const int j = op.samples[i];
              double acc = 0.0;
              for (int t = -op.radius; t <= op.radius; ++t) {
                int k = j + t;
                if (op.boundary == Boundary::Circular)
                  k = (k % op.n + op.n) % op.n;
                else if (k < 0 || k >= op.n)
                  continue;
                acc += op.kernel[t + op.radius] * x[k];
              }
              y[static_cast<Eigen::Index>(i)] = acc;
            }
            return y;
          } else if constexpr (std::is_same_v<T, DiffComposed>) {
            return op.inner->apply_real(diff(x));
          } else {
            throw std::logic_error("apply_real on complex operator");
          }
        },
        v_);
  }

  Vec adjoint_real(const Vec& y) const {
    return std::visit(
        [&](const auto& op) -> Vec {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, DenseReal>) {
            return op.a.transpose() * y;
          } else if constexpr (std::is_same_v<T, PartialConv>) {
            Vec z = Vec::Zero(op.n);
            for (std::size_t i = 0; i < op.samples.size(); ++i) {
              const int j = op.samples[i];
              for (int t = -op.radius; t <= op.radius; ++t) {
                int k = j + t;
                if (op.boundary == Boundary::Circular)
                  k = (k % op.n + op.n) % op.n;
                else if (k < 0 || k >= op.n)
                  continue;
                z[k] += op.kernel[t + op.radius] * y[static_cast<Eigen::Index>(i)];
              }
            }
            return z;
          } else if constexpr (std::is_same_v<T, DiffComposed>) {
            return diff_adjoint(op.inner->adjoint_real(y));
          } else {
            throw std::logic_error("adjoint_real on complex operator");
          }
        },
        v_);
  }

  CVec apply_complex(const Vec& x) const {
    return std::visit(
        [&](const auto& op) -> CVec {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, DenseComplex>) {
            return op.a * x.cast<std::complex<double>>();
          } else if constexpr (std::is_same_v<T, PartialFourier>) {
            const double scale = 1.0 / std::sqrt(static_cast<double>(op.n));
            CVec spectrum = dft(x.cast<std::complex<double>>());
            CVec y(op.samples.size());
            for (std::size_t i = 0; i < op.samples.size(); ++i)
              y[static_cast<Eigen::Index>(i)] = scale * spectrum[op.samples[i]];
            return y;
          } else if constexpr (std::is_same_v<T, DiffComposed>) {
            return op.inner->apply_complex(diff(x));
          } else {
            throw std::logic_error("apply_complex on real operator");
          }
        },
        v_);
  }

  CVec adjoint_complex(const CVec& y) const {
    return std::visit(
        [&](const auto& op) -> CVec {
          using T = std::decay_t<decltype(op)>;
          if constexpr (std::is_same_v<T, DenseReal>) {
            return op.a.transpose() * y;
          } else if constexpr (std::is_same_v<T, DenseComplex>) {
            return op.a.adjoint() * y;
          } else if constexpr (std::is_same_v<T, PartialConv>) {
            CVec z = CVec::Zero(op.n);
            for (std::size_t i = 0; i < op.samples.size(); ++i) {
              const int j = op.samples[i];
              for (int t = -op.radius; t <= op.radius; ++t) {
                int k = j + t;
                if (op.boundary == Boundary::Circular)
                  k = (k % op.n + op.n) % op.n;
                else if (k < 0 || k >= op.n)
                  continue;
                z[k] += op.kernel[t + op.radius] * y[static_cast<Eigen::Index>(i)];
              }
            }
            return z;
          } else if constexpr (std::is_same_v<T, PartialFourier>) {
            const double scale = 1.0 / std::sqrt(static_cast<double>(op.n));
            CVec spectrum = CVec::Zero(op.n);
            for (std::size_t i = 0; i < op.samples.size(); ++i)
              spectrum[op.samples[i]] = y[static_cast<Eigen::Index>(i)];
            return scale * idft(spectrum);
          } else {
            return diff_adjoint(CVec(op.inner->adjoint_complex(y)));
          }
        },
        v_);
  }

  static BandMatrix conv_gram_band(const PartialConv& c) {
    BandMatrix band(c.n, 2 * c.radius);
    for (int j : c.samples) {
      for (int a = -c.radius; a <= c.radius; ++a) {
        int k1 = j + a;
        if (k1 < 0 || k1 >= c.n) continue;
        for (int b = -c.radius; b <= c.radius; ++b) {
          int k2 = j + b;
          if (k2 < 0 || k2 >= c.n || k2 > k1) continue;
          band.at(k1, k2) += c.kernel[a + c.radius] * c.kernel[b + c.radius];
        }
      }
    }
    return band;
  }

  /// Band of diff^T * G * diff from the band of G (half bandwidth grows by 1).
  static BandMatrix diff_wrap_band(const BandMatrix& gi) {
    const int ni = gi.size();
    const int hb = gi.half_bandwidth();
    BandMatrix out(ni + 1, hb + 1);
    auto at = [&](int a, int b) -> double {
      if (a < 0 || b < 0 || a >= ni || b >= ni) return 0.0;
      if (a < b) std::swap(a, b);
      if (a - b > hb) return 0.0;
      return gi.at(a, b);
    };
    for (int j = 0; j <= ni; ++j)
      for (int i = j; i <= std::min(ni, j + hb + 1); ++i)
        out.at(i, j) = at(i - 1, j - 1) - at(i - 1, j) - at(i, j - 1) + at(i, j);
    return out;
  }

  static Mat conv_gram_dense(const PartialConv& c) {
    Mat g = Mat::Zero(c.n, c.n);
    for (int j : c.samples) {
      for (int a = -c.radius; a <= c.radius; ++a) {
        int k1 = j + a;
        if (c.boundary == Boundary::Circular)
          k1 = (k1 % c.n + c.n) % c.n;
        else if (k1 < 0 || k1 >= c.n)
          continue;
        for (int b = -c.radius; b <= c.radius; ++b) {
          int k2 = j + b;
          if (c.boundary == Boundary::Circular)
            k2 = (k2 % c.n + c.n) % c.n;
          else if (k2 < 0 || k2 >= c.n)
            continue;
          g(k1, k2) += c.kernel[a + c.radius] * c.kernel[b + c.radius];
        }
      }
    }
    return g;
  }

  Variant v_;
};

/// | A x - b |_p^p; complex residuals for p=2 are sums of squared moduli.
inline double data_misfit(const MeasurementOperator& op, const MeasurementData& b, int p,
                          const Vec& x) {
  Vec r = op.apply_realified(x) - b.realified;
  if (p == 2) return r.squaredNorm();
  require(p == 1, "data_misfit: p must be 1 or 2");
  require(!b.complex_kind, "data_misfit: p=1 requires real data");
  return r.lpNorm<1>();
}

/// Largest singular value by power iteration on A*A, to relative tolerance.
inline double operator_norm(const MeasurementOperator& op, double tol = 1e-10,
                            int max_iter = 10000) {
  const int n = op.cols();
  Vec z(n);
  for (int i = 0; i < n; ++i) z[i] = 1.0 + static_cast<double>(i) / n;
  z.normalize();
  double sigma = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec w = op.adjoint_realified(op.apply_realified(z));
    double norm = w.norm();
    if (norm == 0.0) return 0.0;
    double next = std::sqrt(norm);  // |w| = |A*A z| -> lambda_max, sigma = sqrt
    z = w / norm;
    if (it > 0 && std::abs(next - sigma) <= tol * std::max(next, 1e-300)) return next;
    sigma = next;
  }
  throw ConvergenceError("operator_norm: power iteration did not converge", z, sigma);
}

}  // namespace ipotts
