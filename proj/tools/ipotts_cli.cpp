// Command-line front end: solve single problems, run experiments and sweeps,
// compare methods, and materialize the built-in presets.
//
// Exit codes: 0 success, 1 configuration error, 2 solver did not converge.

#include "ipotts/config_io.hpp"
#include "ipotts/csv.hpp"
#include "ipotts/svg.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace ipotts;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitNotConverged = 2;

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CommonOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  int jobs = 0;
  bool plots = false;
  bool dump_signals = false;
  int verbosity = 0;
};

void apply_env(CommonOpts& opts) {
  if (const char* d = std::getenv("IPOTTS_OUTPUT_DIR"); d && opts.out_dir == ".") opts.out_dir = d;
  if (const char* j = std::getenv("IPOTTS_JOBS"); j && opts.jobs == 0) opts.jobs = std::atoi(j);
}

ExperimentConfig load_config(const CommonOpts& opts) {
  ExperimentConfig cfg = parse_config(read_file(opts.config_path));
  if (opts.seed_override) cfg.master_seed = *opts.seed_override;
  return cfg;
}

Vec load_vector(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open data file");
  std::vector<double> vals;
  double v;
  while (in >> v) vals.push_back(v);
  require(!vals.empty(), "data file is empty");
  return Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

struct SolveOutput {
  detail::CellOutcome outcome;
  std::string trace_csv;
  int iterations = 0;
};

/// Runs one method while capturing its iteration trace for trace.csv; the
/// solver calls are identical to the sweep path, so metrics match cmd_sweep
/// on the same cell.
SolveOutput solve_with_trace(const ExperimentConfig& cfg, const Instance& inst, Method method,
                             double gamma) {
  SolveOutput so;
  auto& out = so.outcome;
  try {
    switch (method) {
      case Method::IPotts:
      case Method::SparseIPotts:
      case Method::SparseDirect: {
        AdmmResult r;
        if (method == Method::IPotts) {
          r = run_ipotts_admm(inst.op, inst.noisy, detail::admm_config(cfg, gamma));
        } else {
          SparseProblem sp{&inst.op, &inst.noisy, gamma, cfg.p};
          r = method == Method::SparseIPotts
                  ? solve_sparse_via_potts(sp, detail::admm_config(cfg, gamma))
                  : solve_sparse_direct_admm(sp, detail::admm_config(cfg, gamma));
        }
        out.x = r.u;
        out.converged = r.converged;
        so.iterations = r.iterations;
        std::ostringstream ss;
        r.trace.write_csv(ss);
        so.trace_csv = ss.str();
        break;
      }
      case Method::Tv:
      case Method::Bpdn: {
        PrimalDualConfig pd{cfg.solver.pd_iterations, cfg.solver.pd_step_scale, 1.0, 100};
        PdResult r = method == Method::Tv ? solve_tv(inst.op, inst.noisy, gamma, cfg.p, pd)
                                          : solve_bpdn(inst.op, inst.noisy, gamma, cfg.p, pd);
        out.x = r.x;
        so.iterations = cfg.solver.pd_iterations;
        std::string csv = "k,objective\n";
        for (std::size_t i = 0; i < r.checkpoint_objectives.size(); ++i)
          csv += std::to_string((i + 1) * 100) + "," +
                 ipotts::detail::fmt_double(r.checkpoint_objectives[i]) + "\n";
        so.trace_csv = csv;
        break;
      }
      case Method::Omp: {
        const int k = cfg.solver.omp_kmax > 0 ? cfg.solver.omp_kmax : cfg.signal.k;
        OmpResult r = solve_omp(inst.op, inst.noisy, k, cfg.solver.omp_residual_tol);
        out.x = r.x;
        so.iterations = static_cast<int>(r.support.size());
        std::string csv = "k,residual_sq\n";
        for (std::size_t i = 0; i < r.residual_sq_history.size(); ++i)
          csv += std::to_string(i + 1) + "," +
                 ipotts::detail::fmt_double(r.residual_sq_history[i]) + "\n";
        so.trace_csv = csv;
        break;
      }
      case Method::IhtM:
      case Method::IhtR: {
        IhtResult r = method == Method::IhtM
                          ? solve_iht(inst.op, inst.noisy, IhtMode::MTerm, cfg.signal.k, 0.0,
                                      cfg.solver.iht_step, cfg.solver.iht_iters)
                          : solve_iht(inst.op, inst.noisy, IhtMode::Regularized, 0, gamma,
                                      cfg.solver.iht_step, cfg.solver.iht_iters);
        out.x = r.x;
        so.iterations = cfg.solver.iht_iters;
        std::string csv = "k,objective\n";
        for (std::size_t i = 0; i < r.objective_trace.size(); ++i)
          csv += std::to_string(i + 1) + "," + ipotts::detail::fmt_double(r.objective_trace[i]) + "\n";
        so.trace_csv = csv;
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
  return so;
}

int cmd_solve(const CommonOpts& opts) {
  ExperimentConfig cfg = load_config(opts);
  require(cfg.kind == "sweep", "solve: config kind must be 'sweep'");
  require(cfg.methods.size() == 1, "solve: config must name exactly one solver");
  const Method method = cfg.methods[0];
  std::vector<double> gammas = cfg.gammas.values();
  double gamma = 0.0;
  if (method_uses_gamma(method)) {
    require(gammas.size() == 1, "solve: gamma grid must contain exactly one value");
    gamma = gammas[0];
  }

  Instance inst = Instance::make(cfg, 0);
  bool have_groundtruth = true;
  if (!cfg.data_file.empty()) {
    require(!inst.op.is_complex(), "solve: data files are supported for real operators only");
    Vec b = load_vector(cfg.data_file);
    require(b.size() == inst.op.rows(), "solve: data file length does not match operator");
    inst.noisy = MeasurementData::real(std::move(b));
    have_groundtruth = false;
  }

  const auto t0 = std::chrono::steady_clock::now();
  SolveOutput so = solve_with_trace(cfg, inst, method, gamma);
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const ResultRecord rec = detail::make_record(cfg, cfg.hash(), inst, method, gamma, so.outcome, dt);

  if (so.outcome.failed) {
    std::cerr << "solve failed: " << so.outcome.reason << "\n";
    return kExitConfigError;
  }

  const fs::path out(opts.out_dir);
  write_file(out / "reconstruction.txt", signal_txt(so.outcome.x));
  write_file(out / "trace.csv", so.trace_csv);

  nlohmann::json summary;
  summary["name"] = cfg.name;
  summary["method"] = rec.method;
  if (method_uses_gamma(method)) summary["gamma"] = gamma;
  summary["energy"] = rec.energy;
  summary["l0"] = rec.l0;
  summary["approx_err"] = rec.approx_err;
  if (have_groundtruth) summary["psnr"] = rec.psnr_perfect ? "perfect" : ipotts::detail::fmt_double(rec.psnr);
  summary["converged"] = rec.converged;
  summary["iterations"] = so.iterations;
  summary["runtime_sec"] = dt;
  write_file(out / "summary.json", summary.dump(2) + "\n");

  if (opts.plots) {
    std::vector<SvgSeries> series;
    const bool stems = cfg.signal.kind == SignalSpec::Kind::Sparse;
    if (have_groundtruth) {
      SvgSeries gt{"groundtruth", {}, {}, "#888888", stems};
      for (Eigen::Index i = 0; i < inst.groundtruth.size(); ++i) {
        gt.x.push_back(static_cast<double>(i));
        gt.y.push_back(inst.groundtruth[i]);
      }
      series.push_back(std::move(gt));
    }
    SvgSeries rc{"reconstruction", {}, {}, "#c23b22", stems};
    for (Eigen::Index i = 0; i < so.outcome.x.size(); ++i) {
      rc.x.push_back(static_cast<double>(i));
      rc.y.push_back(so.outcome.x[i]);
    }
    series.push_back(std::move(rc));
    write_file(out / "reconstruction.svg", svg_plot(series, cfg.name + " reconstruction"));
  }

  if (opts.verbosity > 0)
    std::cout << "energy " << rec.energy << ", l0 " << rec.l0 << ", converged "
              << (rec.converged ? "yes" : "no") << "\n";
  return rec.converged ? kExitOk : kExitNotConverged;
}

const std::map<std::string, std::string> kMethodColors = {
    {"ipotts", "#c23b22"},       {"tv", "#1f6fb2"},       {"sparse_ipotts", "#c23b22"},
    {"sparse_direct", "#7a4fa3"}, {"bpdn", "#1f6fb2"},     {"omp", "#2e8b57"},
    {"iht_m", "#b8860b"},         {"iht_r", "#708090"},    {"irl1", "#444444"}};

void write_sweep_plots(const ExperimentConfig& cfg, const std::vector<ResultRecord>& records,
                       const fs::path& out) {
  // Median PSNR over seeds per (method, gamma).
  std::map<std::string, std::map<double, std::vector<double>>> by_method;
  for (const auto& r : records) {
    if (r.failed || std::isnan(r.gamma)) continue;
    by_method[r.method][r.gamma].push_back(r.psnr_perfect ? 1e9 : r.psnr);
  }
  std::vector<SvgSeries> series;
  for (auto& [method, curve] : by_method) {
    SvgSeries s{method, {}, {}, kMethodColors.count(method) ? kMethodColors.at(method) : "#333"};
    for (auto& [g, vals] : curve) {
      std::sort(vals.begin(), vals.end());
      s.x.push_back(g);
      s.y.push_back(vals[vals.size() / 2]);
    }
    series.push_back(std::move(s));
  }
  if (!series.empty())
    write_file(out / "psnr_vs_gamma.svg", svg_plot(series, cfg.name + ": median PSNR vs gamma", true));
}

void write_curve_plots(const ExperimentConfig& cfg, const std::vector<CurveRecord>& records,
                       const fs::path& out) {
  std::map<std::string, std::map<int, std::pair<double, int>>> acc;
  for (const auto& r : records) {
    auto& cell = acc[r.method][r.k];
    cell.first += r.approx_err;
    cell.second += 1;
  }
  std::vector<SvgSeries> series;
  for (auto& [method, curve] : acc) {
    SvgSeries s{method, {}, {}, kMethodColors.count(method) ? kMethodColors.at(method) : "#333"};
    for (auto& [k, sum_count] : curve) {
      s.x.push_back(k);
      s.y.push_back(sum_count.first / sum_count.second);
    }
    series.push_back(std::move(s));
  }
  if (!series.empty())
    write_file(out / "error_vs_support.svg",
               svg_plot(series, cfg.name + ": mean approximation error vs support size"));
}

int run_sweep_like(const CommonOpts& opts, bool strict_sweep) {
  ExperimentConfig cfg = load_config(opts);
  if (strict_sweep) {
    require(cfg.num_runs >= 1, "sweep: seed list is empty (num_runs must be >= 1)");
    require(cfg.kind == "support_curve" || !cfg.gammas.values().empty(),
            "sweep: gamma grid is empty");
  }
  const fs::path out(opts.out_dir);

  if (cfg.kind == "support_curve") {
    std::vector<CurveRecord> records = run_support_curve(cfg, opts.jobs);
    write_file(out / "curve.csv", curve_csv(records));
    if (opts.plots) write_curve_plots(cfg, records, out);
    if (opts.verbosity > 0) std::cout << records.size() << " curve records\n";
  } else {
    std::vector<ResultRecord> records = run_experiment(cfg, opts.jobs);
    write_file(out / "records.csv", records_csv(records));
    write_file(out / "timings.csv", timings_csv(records));
    if (opts.plots) write_sweep_plots(cfg, records, out);
    if (opts.verbosity > 0) std::cout << records.size() << " records\n";
  }

  if (opts.dump_signals) {
    for (int r = 0; r < cfg.num_runs; ++r) {
      Instance inst = Instance::make(cfg, r);
      write_file(out / ("groundtruth_" + std::to_string(inst.seed) + ".txt"),
                 signal_txt(inst.groundtruth));
    }
  }
  return kExitOk;
}

int cmd_compare(const CommonOpts& opts, std::optional<double> gamma_opt) {
  ExperimentConfig cfg = load_config(opts);
  require(cfg.num_runs >= 1, "compare: config has no runs");
  std::vector<double> gammas = cfg.gammas.values();
  require(!gammas.empty(), "compare: gamma grid is empty");
  const double gamma = gamma_opt.value_or(gammas[gammas.size() / 2]);

  Instance inst = Instance::make(cfg, 0);
  std::printf("%-14s %12s %10s %6s %12s %10s\n", "method", "energy", "psnr", "l0", "approx_err",
              "time_sec");
  for (Method m : cfg.methods) {
    const auto t0 = std::chrono::steady_clock::now();
    detail::CellOutcome out = detail::run_method(cfg, inst, m, gamma);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ResultRecord rec = detail::make_record(cfg, cfg.hash(), inst, m, gamma, out, dt);
    if (rec.failed)
      std::printf("%-14s failed: %s\n", rec.method.c_str(), rec.fail_reason.c_str());
    else
      std::printf("%-14s %12.5g %10.4f %6d %12.5g %10.3f\n", rec.method.c_str(), rec.energy,
                  rec.psnr_perfect ? std::numeric_limits<double>::infinity() : rec.psnr, rec.l0,
                  rec.approx_err, dt);
  }
  std::printf("gamma = %.6g, seed = %llu\n", gamma,
              static_cast<unsigned long long>(inst.seed));
  return kExitOk;
}

int cmd_presets(const std::string& name, const std::string& out_dir) {
  std::optional<ExperimentConfig> cfg = make_preset(name);
  if (!cfg) {
    std::cerr << "unknown preset '" << name << "'; valid names:\n";
    for (const auto& n : preset_names()) std::cerr << "  " << n << "\n";
    return kExitConfigError;
  }
  const fs::path path = fs::path(out_dir) / (name + ".json");
  write_file(path, emit_config(*cfg));
  std::cout << path.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jump-sparse and sparse signal reconstruction via inverse Potts functionals"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::optional<double> compare_gamma;
  std::string preset_name;

  auto add_common = [&](CLI::App* sub, bool with_config = true) {
    if (with_config)
      sub->add_option("config", opts.config_path, "experiment config (JSON)")->required();
    sub->add_option("-o,--output", opts.out_dir, "output directory");
    sub->add_option("--seed", opts.seed_override, "override the master seed");
    sub->add_option("-j,--jobs", opts.jobs, "worker threads (default: hardware)");
    sub->add_flag("--plots", opts.plots, "write SVG plots");
    sub->add_flag("-v,--verbose", opts.verbosity, "verbose output");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve a single problem");
  add_common(solve);
  CLI::App* experiment = app.add_subcommand("experiment", "run an experiment config");
  add_common(experiment);
  experiment->add_flag("--dump-signals", opts.dump_signals, "write per-seed ground truths");
  CLI::App* sweep = app.add_subcommand("sweep", "run a gamma/seed sweep");
  add_common(sweep);
  sweep->add_flag("--dump-signals", opts.dump_signals, "write per-seed ground truths");
  CLI::App* compare = app.add_subcommand("compare", "run all configured methods on one instance");
  add_common(compare);
  compare->add_option("--gamma", compare_gamma, "gamma value (default: grid midpoint)");
  CLI::App* presets = app.add_subcommand("presets", "materialize a named preset config");
  presets->add_option("name", preset_name, "preset name")->required();
  presets->add_option("-o,--output", opts.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  try {
    apply_env(opts);
    if (solve->parsed()) return cmd_solve(opts);
    if (experiment->parsed()) return run_sweep_like(opts, false);
    if (sweep->parsed()) return run_sweep_like(opts, true);
    if (compare->parsed()) return cmd_compare(opts, compare_gamma);
    if (presets->parsed()) return cmd_presets(preset_name, opts.out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ContractViolation& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
