#pragma once

#include "ipotts/experiment.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace ipotts {

/// Configuration error with the offending field path (or input line) so CLI
/// diagnostics can point at the problem.
class ConfigError : public ContractViolation {
 public:
  ConfigError(std::string where, const std::string& what)
      : ContractViolation(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

namespace detail {

using nlohmann::json;

template <typename T>
T get_field(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) throw ConfigError(path + "." + key, "missing field");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key, "wrong type");
  }
}

template <typename T>
T get_or(const json& j, const std::string& path, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return get_field<T>(j, path, key);
}

inline std::string enum_str(const json& j, const std::string& path, const char* key,
                            std::initializer_list<const char*> allowed) {
  std::string v = get_field<std::string>(j, path, key);
  for (const char* a : allowed)
    if (v == a) return v;
  std::string opts;
  for (const char* a : allowed) opts += std::string(opts.empty() ? "" : "|") + a;
  throw ConfigError(path + "." + key, "must be one of " + opts + ", got '" + v + "'");
}

}  // namespace detail

inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  using nlohmann::json;
  json j;
  j["version"] = cfg.version;
  j["name"] = cfg.name;
  j["kind"] = cfg.kind;
  j["master_seed"] = cfg.master_seed;
  j["num_runs"] = cfg.num_runs;
  j["p"] = cfg.p;

  json sig;
  sig["kind"] = cfg.signal.kind == SignalSpec::Kind::JumpSparse ? "jump_sparse" : "sparse";
  sig["n"] = cfg.signal.n;
  sig["k"] = cfg.signal.k;
  if (cfg.signal.kind == SignalSpec::Kind::JumpSparse) sig["min_plateau"] = cfg.signal.min_plateau;
  sig["low"] = cfg.signal.lo;
  sig["high"] = cfg.signal.hi;
  j["signal"] = sig;

  json smp;
  switch (cfg.op.sampling.kind) {
    case SamplingSpec::Kind::EveryKth:
      smp["kind"] = "every_kth";
      smp["k"] = cfg.op.sampling.every_k;
      break;
    case SamplingSpec::Kind::RandomFraction:
      smp["kind"] = "random_fraction";
      smp["fraction"] = cfg.op.sampling.fraction;
      break;
    case SamplingSpec::Kind::Explicit:
      smp["kind"] = "explicit";
      smp["indices"] = cfg.op.sampling.indices;
      break;
  }
  json op;
  if (cfg.op.kind == OperatorSpec::Kind::PartialConvolution) {
    op["kind"] = "partial_convolution";
    op["kernel"] = {{"stddev", cfg.op.sigma}, {"radius", cfg.op.radius}};
    op["boundary"] = cfg.op.boundary == Boundary::Truncate ? "truncate" : "circular";
  } else {
    op["kind"] = "partial_fourier";
  }
  op["sampling"] = smp;
  j["operator"] = op;

  json noise;
  switch (cfg.noise.kind) {
    case NoiseModel::Kind::Gaussian:
      noise["kind"] = "gaussian";
      noise["sigma"] = cfg.noise.sigma;
      break;
    case NoiseModel::Kind::Laplacian:
      noise["kind"] = "laplacian";
      noise["sigma"] = cfg.noise.sigma;
      break;
    case NoiseModel::Kind::Impulsive:
      noise["kind"] = "impulsive";
      noise["fraction"] = cfg.noise.fraction;
      noise["low"] = cfg.noise.value_lo;
      noise["high"] = cfg.noise.value_hi;
      break;
  }
  j["noise"] = noise;

  std::vector<std::string> methods;
  for (Method m : cfg.methods) methods.emplace_back(method_name(m));
  j["methods"] = methods;

  json gg;
  if (cfg.gammas.kind == GammaGrid::Kind::Log) {
    gg["kind"] = "log";
    gg["min"] = cfg.gammas.lo;
    gg["max"] = cfg.gammas.hi;
    gg["points"] = cfg.gammas.points;
  } else {
    gg["kind"] = "explicit";
    gg["values"] = cfg.gammas.explicit_values;
  }
  j["gamma_grid"] = gg;

  json sv;
  sv["mu0_factor"] = cfg.solver.mu0_factor;
  sv["tau"] = cfg.solver.tau;
  sv["tol"] = cfg.solver.tol;
  sv["max_iter"] = cfg.solver.max_iter;
  sv["l1_tol"] = cfg.solver.l1_tol;
  sv["pd_iterations"] = cfg.solver.pd_iterations;
  sv["pd_step_scale"] = cfg.solver.pd_step_scale;
  sv["iht_iters"] = cfg.solver.iht_iters;
  sv["iht_step"] = cfg.solver.iht_step;
  sv["omp_kmax"] = cfg.solver.omp_kmax;
  sv["omp_residual_tol"] = cfg.solver.omp_residual_tol;
  j["solver"] = sv;

  if (cfg.kind == "support_curve") j["curve_supports"] = cfg.curve_supports;
  if (!cfg.data_file.empty()) j["data_file"] = cfg.data_file;
  return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  using detail::enum_str;
  using detail::get_field;
  using detail::get_or;
  ExperimentConfig cfg;
  cfg.version = get_field<int>(j, "config", "version");
  if (cfg.version != 1) throw ConfigError("config.version", "unsupported version");
  cfg.name = get_field<std::string>(j, "config", "name");
  cfg.kind = get_or<std::string>(j, "config", "kind", "sweep");
  if (cfg.kind != "sweep" && cfg.kind != "support_curve")
    throw ConfigError("config.kind", "must be sweep|support_curve");
  cfg.master_seed = get_field<std::uint64_t>(j, "config", "master_seed");
  cfg.num_runs = get_field<int>(j, "config", "num_runs");
  if (cfg.num_runs < 0) throw ConfigError("config.num_runs", "must be >= 0");
  cfg.p = get_field<int>(j, "config", "p");
  if (cfg.p != 1 && cfg.p != 2) throw ConfigError("config.p", "must be 1 or 2");

  if (!j.contains("signal")) throw ConfigError("config.signal", "missing field");
  const auto& sig = j.at("signal");
  const std::string skind = enum_str(sig, "config.signal", "kind", {"jump_sparse", "sparse"});
  cfg.signal.kind = skind == "jump_sparse" ? SignalSpec::Kind::JumpSparse : SignalSpec::Kind::Sparse;
  cfg.signal.n = get_field<int>(sig, "config.signal", "n");
  cfg.signal.k = get_field<int>(sig, "config.signal", "k");
  cfg.signal.min_plateau = get_or<int>(sig, "config.signal", "min_plateau", 1);
  cfg.signal.lo = get_field<double>(sig, "config.signal", "low");
  cfg.signal.hi = get_field<double>(sig, "config.signal", "high");

  if (!j.contains("operator")) throw ConfigError("config.operator", "missing field");
  const auto& op = j.at("operator");
  const std::string okind =
      enum_str(op, "config.operator", "kind", {"partial_convolution", "partial_fourier"});
  if (okind == "partial_convolution") {
    cfg.op.kind = OperatorSpec::Kind::PartialConvolution;
    if (!op.contains("kernel")) throw ConfigError("config.operator.kernel", "missing field");
    cfg.op.sigma = get_field<double>(op.at("kernel"), "config.operator.kernel", "stddev");
    cfg.op.radius = get_field<int>(op.at("kernel"), "config.operator.kernel", "radius");
    const std::string bnd = enum_str(op, "config.operator", "boundary", {"truncate", "circular"});
    cfg.op.boundary = bnd == "truncate" ? Boundary::Truncate : Boundary::Circular;
  } else {
    cfg.op.kind = OperatorSpec::Kind::PartialFourier;
  }
  if (!op.contains("sampling")) throw ConfigError("config.operator.sampling", "missing field");
  const auto& smp = op.at("sampling");
  const std::string smpk = enum_str(smp, "config.operator.sampling", "kind",
                                    {"every_kth", "random_fraction", "explicit"});
  if (smpk == "every_kth") {
    cfg.op.sampling.kind = SamplingSpec::Kind::EveryKth;
    cfg.op.sampling.every_k = get_field<int>(smp, "config.operator.sampling", "k");
  } else if (smpk == "random_fraction") {
    cfg.op.sampling.kind = SamplingSpec::Kind::RandomFraction;
    cfg.op.sampling.fraction = get_field<double>(smp, "config.operator.sampling", "fraction");
  } else {
    cfg.op.sampling.kind = SamplingSpec::Kind::Explicit;
    cfg.op.sampling.indices = get_field<std::vector<int>>(smp, "config.operator.sampling", "indices");
  }

  if (!j.contains("noise")) throw ConfigError("config.noise", "missing field");
  const auto& noise = j.at("noise");
  const std::string nkind =
      enum_str(noise, "config.noise", "kind", {"gaussian", "laplacian", "impulsive"});
  if (nkind == "impulsive") {
    cfg.noise = NoiseModel::impulsive(get_field<double>(noise, "config.noise", "fraction"),
                                      get_field<double>(noise, "config.noise", "low"),
                                      get_field<double>(noise, "config.noise", "high"));
  } else {
    double sigma = get_field<double>(noise, "config.noise", "sigma");
    cfg.noise = nkind == "gaussian" ? NoiseModel::gaussian(sigma) : NoiseModel::laplacian(sigma);
  }

  cfg.methods.clear();
  for (const std::string& name :
       get_field<std::vector<std::string>>(j, "config", "methods")) {
    bool found = false;
    for (Method m : {Method::IPotts, Method::Tv, Method::SparseIPotts, Method::SparseDirect,
                     Method::Bpdn, Method::Omp, Method::IhtM, Method::IhtR, Method::Irl1})
      if (name == method_name(m)) {
        cfg.methods.push_back(m);
        found = true;
        break;
      }
    if (!found) throw ConfigError("config.methods", "unknown method '" + name + "'");
  }

  if (j.contains("gamma_grid")) {
    const auto& gg = j.at("gamma_grid");
    const std::string gk = enum_str(gg, "config.gamma_grid", "kind", {"log", "explicit"});
    if (gk == "log") {
      cfg.gammas.kind = GammaGrid::Kind::Log;
      cfg.gammas.lo = get_field<double>(gg, "config.gamma_grid", "min");
      cfg.gammas.hi = get_field<double>(gg, "config.gamma_grid", "max");
      cfg.gammas.points = get_field<int>(gg, "config.gamma_grid", "points");
    } else {
      cfg.gammas.kind = GammaGrid::Kind::Explicit;
      cfg.gammas.explicit_values =
          get_field<std::vector<double>>(gg, "config.gamma_grid", "values");
    }
  } else {
    cfg.gammas = GammaGrid::selection_default();
  }

  if (j.contains("solver")) {
    const auto& sv = j.at("solver");
    cfg.solver.mu0_factor = get_or<double>(sv, "config.solver", "mu0_factor", 1e-6);
    cfg.solver.tau = get_or<double>(sv, "config.solver", "tau", 1.05);
    cfg.solver.tol = get_or<double>(sv, "config.solver", "tol", 1e-6);
    cfg.solver.max_iter = get_or<int>(sv, "config.solver", "max_iter", 2000);
    cfg.solver.l1_tol = get_or<double>(sv, "config.solver", "l1_tol", -1.0);
    cfg.solver.pd_iterations = get_or<int>(sv, "config.solver", "pd_iterations", 10000);
    cfg.solver.pd_step_scale = get_or<double>(sv, "config.solver", "pd_step_scale", 0.95);
    cfg.solver.iht_iters = get_or<int>(sv, "config.solver", "iht_iters", 1000);
    cfg.solver.iht_step = get_or<double>(sv, "config.solver", "iht_step", -1.0);
    cfg.solver.omp_kmax = get_or<int>(sv, "config.solver", "omp_kmax", -1);
    cfg.solver.omp_residual_tol = get_or<double>(sv, "config.solver", "omp_residual_tol", 1e-10);
  }

  if (cfg.kind == "support_curve")
    cfg.curve_supports = get_field<std::vector<int>>(j, "config", "curve_supports");
  cfg.data_file = get_or<std::string>(j, "config", "data_file", "");

  cfg.validate();
  return cfg;
}

/// Canonical text form: keys sorted, two-space indent, trailing newline.
/// emit(parse(emit(cfg))) is byte-identical to emit(cfg).
inline std::string emit_config(const ExperimentConfig& cfg) {
  return config_to_json(cfg).dump(2) + "\n";
}

inline ExperimentConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw ConfigError("line " + std::to_string(line), e.what());
  }
  return config_from_json(j);
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig1-gauss",  "fig1-laplace", "fig1-impulse",
                                                 "fig2-fourier", "fig5-gauss",   "fig6-curve",
                                                 "fig7-energy"};
  return names;
}

/// Built-in experiment presets matching the reference setups: blurred,
/// half-sampled jump-sparse deconvolution under three noise models, the
/// half-spectrum Fourier problem, and the sparse deconvolution family.
inline std::optional<ExperimentConfig> make_preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;

  auto deconv_jump = [&]() {
    cfg.signal = {SignalSpec::Kind::JumpSparse, 276, 6, 16, 0.0, 1.0};
    cfg.op.kind = OperatorSpec::Kind::PartialConvolution;
    cfg.op.sigma = 6.0;
    cfg.op.radius = 18;
    cfg.op.boundary = Boundary::Truncate;
    cfg.op.sampling = {SamplingSpec::Kind::RandomFraction, 2, 0.5, {}};
    cfg.methods = {Method::IPotts, Method::Tv};
    cfg.gammas = {GammaGrid::Kind::Log, 1e-3, 1.0, 13, {}};
    cfg.num_runs = 20;
  };
  auto deconv_sparse = [&]() {
    cfg.signal = {SignalSpec::Kind::Sparse, 256, 8, 1, -1.0, 1.0};
    cfg.op.kind = OperatorSpec::Kind::PartialConvolution;
    cfg.op.sigma = 5.0;
    cfg.op.radius = 15;
    cfg.op.boundary = Boundary::Truncate;
    cfg.op.sampling = {SamplingSpec::Kind::RandomFraction, 2, 0.5, {}};
    cfg.noise = NoiseModel::gaussian(0.05);
    cfg.p = 2;
    cfg.num_runs = 20;
  };

  if (name == "fig1-gauss") {
    deconv_jump();
    cfg.master_seed = 101;
    cfg.noise = NoiseModel::gaussian(0.05);
    cfg.p = 2;
  } else if (name == "fig1-laplace") {
    deconv_jump();
    cfg.master_seed = 102;
    cfg.noise = NoiseModel::laplacian(0.05);
    cfg.p = 1;
  } else if (name == "fig1-impulse") {
    deconv_jump();
    cfg.master_seed = 103;
    cfg.noise = NoiseModel::impulsive(0.3, 0.0, 1.0);
    cfg.p = 1;
  } else if (name == "fig2-fourier") {
    cfg.master_seed = 201;
    cfg.signal = {SignalSpec::Kind::JumpSparse, 256, 6, 16, 0.0, 1.0};
    cfg.op.kind = OperatorSpec::Kind::PartialFourier;
    cfg.op.sampling = {SamplingSpec::Kind::EveryKth, 2, 0.5, {}};
    cfg.noise = NoiseModel::gaussian(0.05);
    cfg.p = 2;
    cfg.methods = {Method::IPotts, Method::Tv};
    cfg.gammas = {GammaGrid::Kind::Log, 1e-3, 1.0, 13, {}};
    cfg.num_runs = 10;
  } else if (name == "fig5-gauss") {
    deconv_sparse();
    cfg.master_seed = 501;
    cfg.methods = {Method::SparseIPotts, Method::SparseDirect, Method::Bpdn,
                   Method::Omp,          Method::IhtM,         Method::IhtR};
    cfg.gammas = {GammaGrid::Kind::Log, 1e-3, 1.0, 13, {}};
  } else if (name == "fig6-curve") {
    deconv_sparse();
    cfg.master_seed = 601;
    cfg.kind = "support_curve";
    cfg.methods = {Method::SparseIPotts, Method::Omp, Method::IhtM};
    cfg.gammas = {GammaGrid::Kind::Log, 1e-4, 1.0, 25, {}};
    cfg.curve_supports = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  } else if (name == "fig7-energy") {
    deconv_sparse();
    cfg.master_seed = 701;
    cfg.methods = {Method::SparseIPotts, Method::SparseDirect};
    cfg.gammas = {GammaGrid::Kind::Log, 1e-3, 1.0, 12, {}};
  } else {
    return std::nullopt;
  }
  return cfg;
}

}  // namespace ipotts
