#pragma once

#include "ipotts/admm.hpp"
#include "ipotts/baselines.hpp"
#include "ipotts/metrics.hpp"
#include "ipotts/noise.hpp"
#include "ipotts/signals.hpp"
#include "ipotts/sparse.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace ipotts {

struct SignalSpec {
  enum class Kind { JumpSparse, Sparse };
  Kind kind = Kind::JumpSparse;
  int n = 256;
  int k = 6;             // jump count or support size
  int min_plateau = 16;  // jump-sparse only
  double lo = 0.0;
  double hi = 1.0;

  Vec generate(std::uint64_t seed) const {
    return kind == Kind::JumpSparse ? gen_jump_sparse(n, k, min_plateau, lo, hi, seed)
                                    : gen_sparse(n, k, lo, hi, seed);
  }
};

struct SamplingSpec {
  enum class Kind { EveryKth, RandomFraction, Explicit };
  Kind kind = Kind::EveryKth;
  int every_k = 2;
  double fraction = 0.5;
  std::vector<int> indices;

  std::vector<int> build(int n, std::uint64_t seed) const {
    switch (kind) {
      case Kind::EveryKth: {
        require(every_k >= 1, "SamplingSpec: every_k must be >= 1");
        std::vector<int> out;
        for (int i = 0; i < n; i += every_k) out.push_back(i);
        return out;
      }
      case Kind::RandomFraction: {
        require(fraction > 0.0 && fraction <= 1.0, "SamplingSpec: fraction must be in (0,1]");
        const int m = std::max(1, static_cast<int>(std::lround(fraction * n)));
        return Rng::keyed(seed, "sample-indices").sample_without_replacement(n, m);
      }
      case Kind::Explicit:
        return indices;
    }
    throw std::logic_error("SamplingSpec: unknown kind");
  }
};

inline Vec gaussian_kernel(double sigma, int radius) {
  require(sigma > 0.0 && radius >= 0, "gaussian_kernel: bad parameters");
  Vec h(2 * radius + 1);
  for (int t = -radius; t <= radius; ++t)
    h[t + radius] = std::exp(-0.5 * (t / sigma) * (t / sigma));
  h /= h.sum();
  return h;
}

struct OperatorSpec {
  enum class Kind { PartialConvolution, PartialFourier };
  Kind kind = Kind::PartialConvolution;
  double sigma = 6.0;  // convolution only: gaussian kernel stddev
  int radius = 18;
  Boundary boundary = Boundary::Truncate;
  SamplingSpec sampling;

  MeasurementOperator build(int n, std::uint64_t seed) const {
    std::vector<int> samples = sampling.build(n, seed);
    if (kind == Kind::PartialFourier) return MeasurementOperator::partial_fourier(samples, n);
    return MeasurementOperator::partial_convolution(gaussian_kernel(sigma, radius), samples,
                                                    boundary, n);
  }
};

struct GammaGrid {
  enum class Kind { Log, Explicit };
  Kind kind = Kind::Log;
  double lo = 1e-3;
  double hi = 1.0;
  int points = 13;
  std::vector<double> explicit_values;

  /// Selection default: 25 points per decade across three decades.
  static GammaGrid selection_default() { return {Kind::Log, 1e-3, 1.0, 76, {}}; }

  std::vector<double> values() const {
    if (kind == Kind::Explicit) return explicit_values;
    require(lo > 0.0 && hi >= lo && points >= 1, "GammaGrid: bad log grid");
    if (points == 1) return {lo};
    std::vector<double> out(static_cast<std::size_t>(points));
    const double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i < points; ++i)
      out[static_cast<std::size_t>(i)] = std::pow(10.0, llo + (lhi - llo) * i / (points - 1));
    return out;
  }
};

enum class Method { IPotts, Tv, SparseIPotts, SparseDirect, Bpdn, Omp, IhtM, IhtR, Irl1 };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::IPotts: return "ipotts";
    case Method::Tv: return "tv";
    case Method::SparseIPotts: return "sparse_ipotts";
    case Method::SparseDirect: return "sparse_direct";
    case Method::Bpdn: return "bpdn";
    case Method::Omp: return "omp";
    case Method::IhtM: return "iht_m";
    case Method::IhtR: return "iht_r";
    case Method::Irl1: return "irl1";
  }
  return "?";
}

inline bool method_uses_gamma(Method m) { return m != Method::Omp && m != Method::IhtM; }

struct SolverParams {
  double mu0_factor = 1e-6;
  double tau = 1.05;
  double tol = 1e-6;
  int max_iter = 2000;
  double l1_tol = -1.0;
  int pd_iterations = 10000;
  double pd_step_scale = 0.95;
  int iht_iters = 1000;
  double iht_step = -1.0;
  int omp_kmax = -1;  // < 0: use the signal support size
  double omp_residual_tol = 1e-10;
};

struct ExperimentConfig {
  int version = 1;
  std::string name;
  std::string kind = "sweep";  // "sweep" | "support_curve"
  std::uint64_t master_seed = 1;
  int num_runs = 1;
  SignalSpec signal;
  OperatorSpec op;
  NoiseModel noise;
  int p = 2;
  std::vector<Method> methods;
  GammaGrid gammas;
  SolverParams solver;
  std::vector<int> curve_supports;
  std::string data_file;  // optional: cmd_solve reads measurements from this file

  void validate() const {
    require(version == 1, "ExperimentConfig: unsupported version");
    require(num_runs >= 0, "ExperimentConfig: num_runs must be >= 0");
    require(p == 1 || p == 2, "ExperimentConfig: p must be 1 or 2");
    require(kind == "sweep" || kind == "support_curve", "ExperimentConfig: unknown kind");
    noise.validate();
  }

  /// Stable content hash over every field that affects results.
  std::string hash() const {
    char buf[256];
    std::string s = name + "|" + kind;
    auto add = [&](double v) {
      std::snprintf(buf, sizeof(buf), "|%.17g", v);
      s += buf;
    };
    auto addi = [&](long long v) {
      std::snprintf(buf, sizeof(buf), "|%lld", v);
      s += buf;
    };
    addi(version);
    addi(static_cast<long long>(master_seed));
    addi(num_runs);
    addi(static_cast<int>(signal.kind));
    addi(signal.n);
    addi(signal.k);
    addi(signal.min_plateau);
    add(signal.lo);
    add(signal.hi);
    addi(static_cast<int>(op.kind));
    add(op.sigma);
    addi(op.radius);
    addi(static_cast<int>(op.boundary));
    addi(static_cast<int>(op.sampling.kind));
    addi(op.sampling.every_k);
    add(op.sampling.fraction);
    for (int i : op.sampling.indices) addi(i);
    addi(static_cast<int>(noise.kind));
    add(noise.sigma);
    add(noise.fraction);
    add(noise.value_lo);
    add(noise.value_hi);
    addi(p);
    for (Method m : methods) s += std::string("|") + method_name(m);
    addi(static_cast<int>(gammas.kind));
    add(gammas.lo);
    add(gammas.hi);
    addi(gammas.points);
    for (double g : gammas.explicit_values) add(g);
    add(solver.mu0_factor);
    add(solver.tau);
    add(solver.tol);
    addi(solver.max_iter);
    add(solver.l1_tol);
    addi(solver.pd_iterations);
    add(solver.pd_step_scale);
    addi(solver.iht_iters);
    add(solver.iht_step);
    addi(solver.omp_kmax);
    add(solver.omp_residual_tol);
    for (int k : curve_supports) addi(k);
    s += "|" + data_file;
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(Rng::fnv1a(s)));
    return buf;
  }
};

/// One synthetic problem instance: ground truth, operator, clean and noisy
/// measurements. All draws are keyed by (seed, purpose), so the noise
/// realization of a seed never depends on the gamma grid or method list.
struct Instance {
  std::uint64_t seed;
  Vec groundtruth;
  MeasurementOperator op;
  MeasurementData clean;
  MeasurementData noisy;

  static Instance make(const ExperimentConfig& cfg, int run_index) {
    const std::uint64_t seed = cfg.master_seed + static_cast<std::uint64_t>(run_index);
    Vec x = cfg.signal.generate(seed);
    MeasurementOperator op = cfg.op.build(cfg.signal.n, seed);
    MeasurementData clean = op.apply(x);
    MeasurementData noisy = add_noise(clean, cfg.noise, seed);
    return {seed, std::move(x), std::move(op), std::move(clean), std::move(noisy)};
  }
};

struct ResultRecord {
  std::string config_hash;
  std::uint64_t seed = 0;
  double gamma = std::numeric_limits<double>::quiet_NaN();  // NaN: method ignores gamma
  std::string method;
  double psnr = std::numeric_limits<double>::quiet_NaN();
  bool psnr_perfect = false;
  double energy = 0.0;
  int l0 = 0;
  double approx_err = 0.0;
  double runtime_sec = 0.0;
  bool converged = true;
  bool failed = false;
  std::string fail_reason;
};

struct CurveRecord {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string method;
  int k = 0;
  double approx_err = 0.0;
};

namespace detail {

struct CellOutcome {
  Vec x;
  bool converged = true;
  bool failed = false;
  std::string reason;
};

inline AdmmConfig admm_config(const ExperimentConfig& cfg, double gamma) {
  AdmmConfig ac;
  ac.gamma = gamma;
  ac.p = cfg.p;
  ac.mu0_factor = cfg.solver.mu0_factor;
  ac.tau = cfg.solver.tau;
  ac.tol = cfg.solver.tol;
  ac.max_iter = cfg.solver.max_iter;
  ac.l1_subproblem_tol = cfg.solver.l1_tol;
  return ac;
}

inline CellOutcome run_method(const ExperimentConfig& cfg, const Instance& inst, Method method,
                              double gamma) {
  CellOutcome out;
  try {
    switch (method) {
      case Method::IPotts: {
        AdmmResult r = run_ipotts_admm(inst.op, inst.noisy, admm_config(cfg, gamma));
        out.x = std::move(r.u);
        out.converged = r.converged;
        break;
      }
      case Method::Tv: {
        PrimalDualConfig pd{cfg.solver.pd_iterations, cfg.solver.pd_step_scale, 1.0, 0};
        out.x = solve_tv(inst.op, inst.noisy, gamma, cfg.p, pd).x;
        break;
      }
      case Method::SparseIPotts: {
        SparseProblem sp{&inst.op, &inst.noisy, gamma, cfg.p};
        AdmmResult r = solve_sparse_via_potts(sp, admm_config(cfg, gamma));
        out.x = std::move(r.u);
        out.converged = r.converged;
        break;
      }
      case Method::SparseDirect: {
        SparseProblem sp{&inst.op, &inst.noisy, gamma, cfg.p};
        AdmmResult r = solve_sparse_direct_admm(sp, admm_config(cfg, gamma));
        out.x = std::move(r.u);
        out.converged = r.converged;
        break;
      }
      case Method::Bpdn: {
        PrimalDualConfig pd{cfg.solver.pd_iterations, cfg.solver.pd_step_scale, 1.0, 0};
        out.x = solve_bpdn(inst.op, inst.noisy, gamma, cfg.p, pd).x;
        break;
      }
      case Method::Omp: {
        const int k = cfg.solver.omp_kmax > 0 ? cfg.solver.omp_kmax : cfg.signal.k;
        OmpResult r = solve_omp(inst.op, inst.noisy, k, cfg.solver.omp_residual_tol);
        out.x = std::move(r.x);
        break;
      }
      case Method::IhtM: {
        IhtResult r = solve_iht(inst.op, inst.noisy, IhtMode::MTerm, cfg.signal.k, 0.0,
                                cfg.solver.iht_step, cfg.solver.iht_iters);
        out.x = std::move(r.x);
        break;
      }
      case Method::IhtR: {
        IhtResult r = solve_iht(inst.op, inst.noisy, IhtMode::Regularized, 0, gamma,
                                cfg.solver.iht_step, cfg.solver.iht_iters);
        out.x = std::move(r.x);
        break;
      }
      case Method::Irl1:
        out.failed = true;
        out.reason = "irl1 results are imported, not computed";
        break;
    }
  } catch (const std::exception& e) {
    out.failed = true;
    out.reason = e.what();
  }
  return out;
}

inline ResultRecord make_record(const ExperimentConfig& cfg, const std::string& hash,
                                const Instance& inst, Method method, double gamma,
                                const CellOutcome& out, double runtime_sec) {
  ResultRecord rec;
  rec.config_hash = hash;
  rec.seed = inst.seed;
  rec.gamma = method_uses_gamma(method) ? gamma : std::numeric_limits<double>::quiet_NaN();
  rec.method = method_name(method);
  rec.runtime_sec = runtime_sec;
  rec.converged = out.converged;
  rec.failed = out.failed;
  rec.fail_reason = out.reason;
  if (out.failed) return rec;

  const bool jump_family = cfg.signal.kind == SignalSpec::Kind::JumpSparse;
  const double g = method_uses_gamma(method) ? gamma : 0.0;
  rec.energy = jump_family ? potts_energy(inst.op, inst.noisy, g, cfg.p, out.x)
                           : sparsity_energy(inst.op, inst.noisy, g, cfg.p, out.x);
  rec.l0 = jump_family ? count_jumps(out.x) : count_nonzeros(out.x);
  rec.approx_err = (inst.op.apply_realified(out.x) - inst.noisy.realified).squaredNorm();
  if (auto v = psnr(out.x, inst.groundtruth))
    rec.psnr = *v;
  else
    rec.psnr_perfect = true;
  return rec;
}

template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int t = 0; t < jobs; ++t)
    workers.emplace_back([&]() {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& w : workers) w.join();
}

}  // namespace detail

/// Runs the full (seed x method x gamma) grid. Individual run failures are
/// recorded with the failed flag; the sweep always completes. Records come
/// back in deterministic (seed, method, gamma) order regardless of the
/// worker count.
inline std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg, int jobs = 0) {
  cfg.validate();
  require(cfg.kind == "sweep", "run_experiment: config kind must be 'sweep'");
  const std::string hash = cfg.hash();
  const std::vector<double> gammas = cfg.gammas.values();
  if (gammas.empty()) return {};

  struct Cell {
    int run;
    Method method;
    double gamma;
  };
  std::vector<Cell> cells;
  for (int r = 0; r < cfg.num_runs; ++r)
    for (Method m : cfg.methods) {
      if (method_uses_gamma(m))
        for (double g : gammas) cells.push_back({r, m, g});
      else
        cells.push_back({r, m, 0.0});
    }

  std::vector<ResultRecord> records(cells.size());
  detail::parallel_for(cells.size(), jobs, [&](std::size_t i) {
    const Cell& c = cells[i];
    const Instance inst = Instance::make(cfg, c.run);
    const auto t0 = std::chrono::steady_clock::now();
    const detail::CellOutcome out = detail::run_method(cfg, inst, c.method, c.gamma);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    records[i] = detail::make_record(cfg, hash, inst, c.method, c.gamma, out, dt);
  });
  return records;
}

/// Approximation-error versus solution-support protocol: for each seed and
/// each target support size k, a method's value is the best |A x - b|_2^2
/// among its computed solutions with at most k non-zeros (the zero solution
/// is always available). The Potts-based solver contributes its gamma sweep;
/// OMP contributes its greedy path; M-term thresholding contributes one run
/// per support size.
inline std::vector<CurveRecord> run_support_curve(const ExperimentConfig& cfg, int jobs = 0) {
  cfg.validate();
  require(cfg.kind == "support_curve", "run_support_curve: config kind must be 'support_curve'");
  require(!cfg.curve_supports.empty(), "run_support_curve: curve_supports missing");
  const std::string hash = cfg.hash();
  const std::vector<int> ks = cfg.curve_supports;
  const int k_hi = *std::max_element(ks.begin(), ks.end());

  struct Cell {
    int run;
    Method method;
  };
  std::vector<Cell> cells;
  for (int r = 0; r < cfg.num_runs; ++r)
    for (Method m : cfg.methods) cells.push_back({r, m});

  std::vector<std::vector<CurveRecord>> partial(cells.size());
  detail::parallel_for(cells.size(), jobs, [&](std::size_t ci) {
    const Cell& c = cells[ci];
    const Instance inst = Instance::make(cfg, c.run);
    const double zero_err = inst.noisy.realified.squaredNorm();
    auto err_of = [&](const Vec& x) {
      return (inst.op.apply_realified(x) - inst.noisy.realified).squaredNorm();
    };

    // (support size, error) pairs of every solution the method produced.
    std::vector<std::pair<int, double>> sols;
    sols.emplace_back(0, zero_err);
    switch (c.method) {
      case Method::SparseIPotts:
      case Method::SparseDirect: {
        for (double g : cfg.gammas.values()) {
          detail::CellOutcome out = detail::run_method(cfg, inst, c.method, g);
          if (!out.failed) sols.emplace_back(count_nonzeros(out.x), err_of(out.x));
        }
        break;
      }
      case Method::Omp: {
        OmpResult r = solve_omp(inst.op, inst.noisy, std::min({k_hi, inst.op.rows(), inst.op.cols()}),
                                cfg.solver.omp_residual_tol);
        for (std::size_t j = 0; j < r.residual_sq_history.size(); ++j)
          sols.emplace_back(static_cast<int>(j) + 1, r.residual_sq_history[j]);
        break;
      }
      case Method::IhtM: {
        for (int k : ks) {
          IhtResult r = solve_iht(inst.op, inst.noisy, IhtMode::MTerm, k, 0.0,
                                  cfg.solver.iht_step, cfg.solver.iht_iters);
          sols.emplace_back(count_nonzeros(r.x), err_of(r.x));
        }
        break;
      }
      default:
        throw ContractViolation(std::string("run_support_curve: unsupported method ") +
                                method_name(c.method));
    }

    for (int k : ks) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [l0, err] : sols)
        if (l0 <= k) best = std::min(best, err);
      partial[ci].push_back({hash, inst.seed, method_name(c.method), k, best});
    }
  });

  std::vector<CurveRecord> out;
  for (auto& p : partial) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace ipotts
