#include "ipotts/config_io.hpp"
#include "ipotts/csv.hpp"
#include "ipotts/metrics.hpp"
#include "ipotts/noise.hpp"
#include "ipotts/signals.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace ipotts;

namespace {

TEST(GenJumpSparse, ZeroJumpsIsConstant) {
  const Vec x = gen_jump_sparse(32, 0, 4, 0.0, 1.0, 7);
  EXPECT_EQ(count_jumps(x), 0);
}

TEST(GenJumpSparse, Deterministic) {
  EXPECT_EQ(gen_jump_sparse(64, 4, 5, 0.0, 1.0, 99), gen_jump_sparse(64, 4, 5, 0.0, 1.0, 99));
  EXPECT_NE(gen_jump_sparse(64, 4, 5, 0.0, 1.0, 99), gen_jump_sparse(64, 4, 5, 0.0, 1.0, 100));
}

TEST(GenJumpSparse, ExactJumpCountAndConstraints) {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const Vec x = gen_jump_sparse(256, 6, 16, 0.0, 1.0, seed);
    ASSERT_EQ(count_jumps(x), 6);
    // plateau lengths >= min_plateau and consecutive values >= 0.1 * range apart
    int start = 0;
    double prev_value = x[0];
    for (int i = 1; i <= 256; ++i) {
      if (i < 256 && x[i] == x[i - 1]) continue;
      ASSERT_GE(i - start, 16);
      if (start > 0) ASSERT_GE(std::abs(x[start] - prev_value), 0.1);
      prev_value = x[start];
      start = i;
    }
    ASSERT_GE(x.minCoeff(), 0.0);
    ASSERT_LE(x.maxCoeff(), 1.0);
  }
}

TEST(GenJumpSparse, InfeasibleSpecThrows) {
  EXPECT_THROW(gen_jump_sparse(10, 4, 3, 0.0, 1.0, 1), ContractViolation);
}

TEST(GenSparse, Basics) {
  EXPECT_EQ(gen_sparse(16, 0, -1.0, 1.0, 3), Vec::Zero(16));
  EXPECT_EQ(gen_sparse(64, 9, -1.0, 1.0, 5), gen_sparse(64, 9, -1.0, 1.0, 5));
  for (std::uint64_t seed : {10u, 11u, 12u}) {
    const Vec x = gen_sparse(128, 9, -1.0, 1.0, seed);
    ASSERT_EQ(count_nonzeros(x), 9);
    for (int i = 0; i < 128; ++i)
      if (x[i] != 0.0) ASSERT_GE(std::abs(x[i]), 0.05 * 2.0);
  }
  EXPECT_THROW(gen_sparse(4, 5, -1.0, 1.0, 1), ContractViolation);
}

TEST(AddNoise, VanishingSigmaIsIdentity) {
  Rng rng = Rng::keyed(70, "sig");
  const MeasurementData d = MeasurementData::real(oracle::random_vector(20, rng));
  const MeasurementData out = add_noise(d, NoiseModel::gaussian(1e-12), 5);
  EXPECT_LT((out.realified - d.realified).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(AddNoise, LaplacianVarianceMatchesSigmaSquared) {
  // Var = sigma^2 for the density exp(-sqrt(2)|x|/sigma)/(sigma*sqrt(2)).
  const double sigma = 0.05;
  Rng rng = Rng::keyed(71, "laplace-moment");
  double sum = 0.0, sumsq = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.laplace(sigma);
    sum += v;
    sumsq += v * v;
  }
  const double var = sumsq / n - (sum / n) * (sum / n);
  EXPECT_GT(var, 0.9 * sigma * sigma);
  EXPECT_LT(var, 1.1 * sigma * sigma);
}

TEST(AddNoise, ImpulsiveReplacesExactCount) {
  const int m = 138;
  const MeasurementData d = MeasurementData::real(Vec::Constant(m, 10.0));
  const MeasurementData out = add_noise(d, NoiseModel::impulsive(0.3, 0.0, 1.0), 17);
  int replaced = 0;
  for (int i = 0; i < m; ++i)
    if (out.realified[i] != 10.0) {
      ++replaced;
      ASSERT_GE(out.realified[i], 0.0);
      ASSERT_LE(out.realified[i], 1.0);
    }
  EXPECT_EQ(replaced, 41);  // round(0.3 * 138)
}

TEST(AddNoise, ComplexGaussianPerturbsBothParts) {
  CVec z = CVec::Zero(64);
  const MeasurementData out = add_noise(MeasurementData::from_complex(z), NoiseModel::gaussian(0.1), 3);
  EXPECT_GT(out.realified.head(64).lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_GT(out.realified.tail(64).lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_THROW(add_noise(MeasurementData::from_complex(z), NoiseModel::laplacian(0.1), 3),
               ContractViolation);
  EXPECT_THROW(add_noise(MeasurementData::from_complex(z), NoiseModel::impulsive(0.1, 0, 1), 3),
               ContractViolation);
}

TEST(Psnr, Formula) {
  Vec gt(2), x(2);
  gt << 1, 0;
  x << 0, 0;
  ASSERT_TRUE(psnr(x, gt).has_value());
  EXPECT_NEAR(*psnr(x, gt), 10.0 * std::log10(2.0), 1e-12);
}

TEST(Psnr, LogLawUnderErrorScaling) {
  Rng rng = Rng::keyed(72, "psnr");
  const Vec gt = oracle::random_vector(30, rng);
  const Vec err = oracle::random_vector(30, rng);
  const double a = *psnr(gt + 0.01 * err, gt);
  const double b = *psnr(gt + 0.1 * err, gt);
  EXPECT_NEAR(a - b, 20.0, 1e-9);
}

TEST(Psnr, PerfectSentinelAndPermutationInvariance) {
  Rng rng = Rng::keyed(73, "perm");
  const Vec gt = oracle::random_vector(16, rng);
  EXPECT_FALSE(psnr(gt, gt).has_value());
  Vec x = gt + 0.05 * oracle::random_vector(16, rng);
  std::vector<int> perm = Rng::keyed(73, "shuffle").sample_without_replacement(16, 16);
  // joint permutation of (x, gt) leaves the PSNR unchanged
  Vec xp(16), gp(16);
  for (int i = 0; i < 16; ++i) {
    xp[i] = x[perm[i]];
    gp[i] = gt[perm[i]];
  }
  EXPECT_NEAR(*psnr(x, gt), *psnr(xp, gp), 1e-12);
}

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.name = "tiny";
  cfg.master_seed = 404;
  cfg.num_runs = 2;
  cfg.signal = {SignalSpec::Kind::JumpSparse, 32, 2, 4, 0.0, 1.0};
  cfg.op.kind = OperatorSpec::Kind::PartialConvolution;
  cfg.op.sigma = 2.0;
  cfg.op.radius = 5;
  cfg.op.boundary = Boundary::Truncate;
  cfg.op.sampling = {SamplingSpec::Kind::RandomFraction, 2, 0.6, {}};
  cfg.noise = NoiseModel::gaussian(0.03);
  cfg.p = 2;
  cfg.methods = {Method::IPotts, Method::Tv};
  cfg.gammas = {GammaGrid::Kind::Explicit, 0, 0, 0, {0.05, 0.2}};
  cfg.solver.pd_iterations = 400;
  return cfg;
}

TEST(RunExperiment, EmptyGammaGridGivesNoRecords) {
  ExperimentConfig cfg = tiny_config();
  cfg.gammas = {GammaGrid::Kind::Explicit, 0, 0, 0, {}};
  EXPECT_TRUE(run_experiment(cfg).empty());
}

TEST(RunExperiment, ByteIdenticalCsvAcrossRunsAndWorkerCounts) {
  const ExperimentConfig cfg = tiny_config();
  const std::string a = records_csv(run_experiment(cfg, 1));
  const std::string b = records_csv(run_experiment(cfg, 2));
  const std::string c = records_csv(run_experiment(cfg, 0));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
  EXPECT_NE(a.find("ipotts"), std::string::npos);
}

TEST(RunExperiment, NoiseIndependentOfGammaGrid) {
  ExperimentConfig wide = tiny_config();
  ExperimentConfig narrow = tiny_config();
  narrow.gammas = {GammaGrid::Kind::Explicit, 0, 0, 0, {0.2}};
  const auto rec_wide = run_experiment(wide);
  const auto rec_narrow = run_experiment(narrow);
  int matched = 0;
  for (const auto& rn : rec_narrow)
    for (const auto& rw : rec_wide)
      if (rw.seed == rn.seed && rw.method == rn.method && rw.gamma == rn.gamma) {
        ASSERT_EQ(rw.psnr, rn.psnr);
        ASSERT_EQ(rw.energy, rn.energy);
        ASSERT_EQ(rw.l0, rn.l0);
        ++matched;
      }
  EXPECT_EQ(matched, static_cast<int>(rec_narrow.size()));
}

TEST(RunExperiment, FailuresAreRecordedNotThrown) {
  ExperimentConfig cfg = tiny_config();
  cfg.methods = {Method::Irl1, Method::IPotts};
  const auto records = run_experiment(cfg);
  int failed = 0, ok = 0;
  for (const auto& r : records) (r.failed ? failed : ok)++;
  EXPECT_GT(failed, 0);  // irl1 rows flagged: imported, not computed
  EXPECT_GT(ok, 0);
  const std::string csv = records_csv(records);
  EXPECT_NE(csv.find("irl1 results are imported"), std::string::npos);
}

TEST(Presets, AllNamesMaterialize) {
  for (const std::string& name : preset_names()) {
    const auto cfg = make_preset(name);
    ASSERT_TRUE(cfg.has_value()) << name;
    EXPECT_NO_THROW(cfg->validate());
  }
  EXPECT_FALSE(make_preset("fig9-nope").has_value());
}

TEST(Presets, PinnedParameters) {
  const auto fig1 = *make_preset("fig1-gauss");
  EXPECT_EQ(fig1.op.sigma, 6.0);
  EXPECT_EQ(fig1.noise.sigma, 0.05);
  EXPECT_EQ(fig1.p, 2);
  // m = round(0.5 * 276) = 138 random measurements
  EXPECT_EQ(fig1.op.sampling.kind, SamplingSpec::Kind::RandomFraction);
  EXPECT_EQ(static_cast<int>(std::lround(fig1.op.sampling.fraction * fig1.signal.n)), 138);

  const auto fig5 = *make_preset("fig5-gauss");
  EXPECT_EQ(fig5.op.sigma, 5.0);
  EXPECT_EQ(static_cast<int>(std::lround(fig5.op.sampling.fraction * fig5.signal.n)), 128);
  EXPECT_EQ(fig5.noise.sigma, 0.05);

  const auto fig2 = *make_preset("fig2-fourier");
  EXPECT_EQ(fig2.op.kind, OperatorSpec::Kind::PartialFourier);
  EXPECT_EQ(fig2.op.sampling.kind, SamplingSpec::Kind::EveryKth);
  EXPECT_EQ(fig2.op.sampling.every_k, 2);

  const auto impulse = *make_preset("fig1-impulse");
  EXPECT_EQ(impulse.noise.kind, NoiseModel::Kind::Impulsive);
  EXPECT_EQ(impulse.noise.fraction, 0.3);
  EXPECT_EQ(impulse.noise.value_lo, 0.0);
  EXPECT_EQ(impulse.noise.value_hi, 1.0);
  EXPECT_EQ(impulse.p, 1);
}

TEST(ConfigIo, PresetRoundTripsAreByteIdentical) {
  for (const std::string& name : preset_names()) {
    const std::string emitted = emit_config(*make_preset(name));
    const ExperimentConfig parsed = parse_config(emitted);
    EXPECT_EQ(emit_config(parsed), emitted) << name;
  }
}

TEST(ConfigIo, ErrorsCarryFieldContext) {
  try {
    parse_config("{\"version\": 1}");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("config.name"), std::string::npos);
  }
  try {
    parse_config("{not json");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("line 1"), std::string::npos);
  }
  try {
    ExperimentConfig cfg = *make_preset("fig1-gauss");
    nlohmann::json j = config_to_json(cfg);
    j["noise"]["kind"] = "cauchy";
    config_from_json(j);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("config.noise.kind"), std::string::npos);
  }
}

TEST(ConfigIo, DefaultGammaGridIsSelectionGrid) {
  ExperimentConfig cfg = *make_preset("fig1-gauss");
  nlohmann::json j = config_to_json(cfg);
  j.erase("gamma_grid");
  const ExperimentConfig parsed = config_from_json(j);
  EXPECT_EQ(parsed.gammas.values().size(), 76u);  // 25 per decade, 3 decades
}

TEST(ConfigIo, HashDistinguishesConfigs) {
  ExperimentConfig a = tiny_config();
  ExperimentConfig b = tiny_config();
  EXPECT_EQ(a.hash(), b.hash());
  b.master_seed += 1;
  EXPECT_NE(a.hash(), b.hash());
}

TEST(SupportCurve, ValuesAreMonotoneAndSeeded) {
  ExperimentConfig cfg = tiny_config();
  cfg.kind = "support_curve";
  cfg.name = "tiny-curve";
  cfg.signal = {SignalSpec::Kind::Sparse, 32, 3, 1, -1.0, 1.0};
  cfg.methods = {Method::SparseIPotts, Method::Omp, Method::IhtM};
  cfg.gammas = {GammaGrid::Kind::Log, 1e-3, 1.0, 8, {}};
  cfg.curve_supports = {1, 2, 3, 4, 5};
  cfg.solver.iht_iters = 200;
  const auto records = run_support_curve(cfg);
  EXPECT_EQ(records.size(), 2u * 3u * 5u);
  // per (seed, method) the best-error-at-support-k curve is non-increasing in k
  for (const auto& r : records)
    for (const auto& s : records)
      if (r.seed == s.seed && r.method == s.method && s.k == r.k + 1)
        ASSERT_LE(s.approx_err, r.approx_err + 1e-12);
  const auto again = run_support_curve(cfg, 2);
  EXPECT_EQ(curve_csv(records), curve_csv(again));
}

}  // namespace
