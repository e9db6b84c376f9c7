#pragma once

#include "ipotts/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace ipotts {

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Deterministic result table. Runtimes are intentionally excluded (see
/// timings_csv) so that repeated runs with the same master seed are
/// byte-identical. Empty cells mark metrics of failed runs and the gamma of
/// gamma-independent methods; a perfect reconstruction reports PSNR "inf".
inline std::string records_csv(const std::vector<ResultRecord>& records) {
  std::string out = "config,seed,gamma,method,psnr,energy,l0,approx_err,converged,failed,fail_reason\n";
  for (const auto& r : records) {
    out += r.config_hash;
    out += ',' ;
    out += std::to_string(r.seed);
    out += ',';
    if (!std::isnan(r.gamma)) out += detail::fmt_double(r.gamma);
    out += ',';
    out += r.method;
    out += ',';
    if (!r.failed) out += r.psnr_perfect ? "inf" : detail::fmt_double(r.psnr);
    out += ',';
    if (!r.failed) out += detail::fmt_double(r.energy);
    out += ',';
    if (!r.failed) out += std::to_string(r.l0);
    out += ',';
    if (!r.failed) out += detail::fmt_double(r.approx_err);
    out += ',';
    out += r.converged ? '1' : '0';
    out += ',';
    out += r.failed ? '1' : '0';
    out += ',';
    out += r.fail_reason;
    out += '\n';
  }
  return out;
}

inline std::string timings_csv(const std::vector<ResultRecord>& records) {
  std::string out = "config,seed,gamma,method,runtime_sec\n";
  for (const auto& r : records) {
    out += r.config_hash;
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    if (!std::isnan(r.gamma)) out += detail::fmt_double(r.gamma);
    out += ',';
    out += r.method;
    out += ',';
    out += detail::fmt_double(r.runtime_sec);
    out += '\n';
  }
  return out;
}

inline std::string curve_csv(const std::vector<CurveRecord>& records) {
  std::string out = "config,seed,method,k,approx_err\n";
  for (const auto& r : records) {
    out += r.config_hash;
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    out += r.method;
    out += ',';
    out += std::to_string(r.k);
    out += ',';
    out += detail::fmt_double(r.approx_err);
    out += '\n';
  }
  return out;
}

/// Plain-text vector dump, one value per line.
inline std::string signal_txt(const Vec& x) {
  std::string out;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out += detail::fmt_double(x[i]);
    out += '\n';
  }
  return out;
}

}  // namespace ipotts
