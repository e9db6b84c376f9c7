#pragma once

#include "ipotts/linops.hpp"
#include "ipotts/rng.hpp"

#include <cmath>
#include <cstdint>

namespace ipotts {

/// Gaussian and Laplacian noise are additive with standard deviation sigma
/// (the Laplacian density is (1/(sigma*sqrt(2))) exp(-sqrt(2)|x|/sigma), so
/// its variance is also sigma^2). Impulsive noise replaces
/// round(fraction * m) distinct entries with uniform draws from
/// [value_lo, value_hi].
struct NoiseModel {
  enum class Kind { Gaussian, Laplacian, Impulsive };
  Kind kind = Kind::Gaussian;
  double sigma = 0.05;
  double fraction = 0.0;
  double value_lo = 0.0;
  double value_hi = 1.0;

  static NoiseModel gaussian(double sigma) { return {Kind::Gaussian, sigma, 0, 0, 0}; }
  static NoiseModel laplacian(double sigma) { return {Kind::Laplacian, sigma, 0, 0, 0}; }
  static NoiseModel impulsive(double fraction, double lo, double hi) {
    return {Kind::Impulsive, 0, fraction, lo, hi};
  }

  void validate() const {
    if (kind == Kind::Impulsive)
      require(fraction >= 0.0 && fraction <= 1.0 && value_hi > value_lo,
              "NoiseModel: bad impulsive parameters");
    else
      require(sigma > 0.0, "NoiseModel: sigma must be > 0");
  }
};

/// Applies the noise model to measured data. Gaussian noise on complex data
/// perturbs real and imaginary parts by independent draws; the Laplacian and
/// impulsive models are defined for real data only.
inline MeasurementData add_noise(const MeasurementData& data, const NoiseModel& model,
                                 std::uint64_t seed) {
  model.validate();
  MeasurementData out = data;
  Rng rng = Rng::keyed(seed, "noise");
  switch (model.kind) {
    case NoiseModel::Kind::Gaussian:
      for (Eigen::Index i = 0; i < out.realified.size(); ++i)
        out.realified[i] += rng.normal(model.sigma);
      return out;
    case NoiseModel::Kind::Laplacian:
      require(!data.complex_kind, "add_noise: Laplacian noise requires real data");
      for (Eigen::Index i = 0; i < out.realified.size(); ++i)
        out.realified[i] += rng.laplace(model.sigma);
      return out;
    case NoiseModel::Kind::Impulsive: {
      require(!data.complex_kind, "add_noise: impulsive noise requires real data");
      const int m = data.m();
      const int count = static_cast<int>(std::lround(model.fraction * m));
      for (int i : rng.sample_without_replacement(m, count))
        out.realified[i] = rng.uniform(model.value_lo, model.value_hi);
      return out;
    }
  }
  throw std::logic_error("add_noise: unknown noise kind");
}

}  // namespace ipotts
