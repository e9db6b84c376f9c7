// Exercises the CLI binary end to end: exit codes, output files, and the
// cross-command consistency between solve and sweep.

#include "ipotts/config_io.hpp"
#include "ipotts/csv.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using namespace ipotts;

namespace {

std::string g_binary;
fs::path g_dir;

int run_cli(const std::string& args) {
  const std::string cmd = g_binary + " " + args + " >" + (g_dir / "stdout.txt").string() + " 2>" +
                          (g_dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.name = "cli-tiny";
  cfg.master_seed = 7;
  cfg.num_runs = 1;
  cfg.signal = {SignalSpec::Kind::JumpSparse, 24, 2, 4, 0.0, 1.0};
  cfg.op.kind = OperatorSpec::Kind::PartialConvolution;
  cfg.op.sigma = 2.0;
  cfg.op.radius = 5;
  cfg.op.boundary = Boundary::Truncate;
  cfg.op.sampling = {SamplingSpec::Kind::RandomFraction, 2, 0.7, {}};
  cfg.noise = NoiseModel::gaussian(0.02);
  cfg.p = 2;
  cfg.methods = {Method::IPotts};
  cfg.gammas = {GammaGrid::Kind::Explicit, 0, 0, 0, {0.08}};
  return cfg;
}

void write_config(const ExperimentConfig& cfg, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  out << emit_config(cfg);
}

TEST(Presets, EmitAndRejectUnknown) {
  EXPECT_EQ(run_cli("presets fig1-gauss -o " + (g_dir / "p").string()), 0);
  EXPECT_TRUE(fs::exists(g_dir / "p" / "fig1-gauss.json"));
  // Emitted preset parses back to the same canonical text.
  const std::string text = slurp(g_dir / "p" / "fig1-gauss.json");
  EXPECT_EQ(emit_config(parse_config(text)), text);

  EXPECT_EQ(run_cli("presets fig9-unknown -o " + (g_dir / "p").string()), 1);
  EXPECT_NE(slurp(g_dir / "stderr.txt").find("fig7-energy"), std::string::npos);
}

TEST(Solve, WritesOutputsAndExitsZero) {
  write_config(tiny_config(), g_dir / "tiny.json");
  const fs::path out = g_dir / "solve-out";
  ASSERT_EQ(run_cli("solve " + (g_dir / "tiny.json").string() + " -o " + out.string() + " --plots"),
            0);
  EXPECT_TRUE(fs::exists(out / "reconstruction.txt"));
  EXPECT_TRUE(fs::exists(out / "trace.csv"));
  EXPECT_TRUE(fs::exists(out / "summary.json"));
  EXPECT_TRUE(fs::exists(out / "reconstruction.svg"));
  EXPECT_EQ(slurp(out / "trace.csv").rfind("k,mu,gap,energy,bound\n", 0), 0u);
}

TEST(Solve, MalformedConfigExitsOneWithDiagnostics) {
  std::ofstream(g_dir / "bad.json") << "{\"version\": 1, \"name\": \"x\"}";
  EXPECT_EQ(run_cli("solve " + (g_dir / "bad.json").string()), 1);
  EXPECT_NE(slurp(g_dir / "stderr.txt").find("config."), std::string::npos);
  std::ofstream(g_dir / "worse.json") << "{oops";
  EXPECT_EQ(run_cli("solve " + (g_dir / "worse.json").string()), 1);
  EXPECT_NE(slurp(g_dir / "stderr.txt").find("line 1"), std::string::npos);
}

TEST(Solve, ForcedSingleIterationExitsTwo) {
  ExperimentConfig cfg = tiny_config();
  cfg.solver.max_iter = 1;
  write_config(cfg, g_dir / "capped.json");
  EXPECT_EQ(run_cli("solve " + (g_dir / "capped.json").string() + " -o " +
                    (g_dir / "capped-out").string()),
            2);
}

TEST(Sweep, WritesRecordsAndRejectsEmptySeeds) {
  ExperimentConfig cfg = tiny_config();
  cfg.methods = {Method::IPotts, Method::Tv};
  cfg.gammas = {GammaGrid::Kind::Explicit, 0, 0, 0, {0.05, 0.15}};
  cfg.num_runs = 2;
  cfg.solver.pd_iterations = 300;
  write_config(cfg, g_dir / "sweep.json");
  const fs::path out = g_dir / "sweep-out";
  ASSERT_EQ(run_cli("sweep " + (g_dir / "sweep.json").string() + " -o " + out.string() +
                    " --plots -j 2"),
            0);
  EXPECT_TRUE(fs::exists(out / "records.csv"));
  EXPECT_TRUE(fs::exists(out / "timings.csv"));
  EXPECT_TRUE(fs::exists(out / "psnr_vs_gamma.svg"));
  const std::string records = slurp(out / "records.csv");
  EXPECT_EQ(records.rfind("config,seed,gamma,method,psnr,energy,l0,approx_err,converged,failed,"
                          "fail_reason\n",
                          0),
            0u);

  ExperimentConfig empty = cfg;
  empty.num_runs = 0;
  write_config(empty, g_dir / "empty.json");
  EXPECT_EQ(run_cli("sweep " + (g_dir / "empty.json").string() + " -o " + out.string()), 1);
}

TEST(Sweep, SingleCellMatchesSolveMetrics) {
  write_config(tiny_config(), g_dir / "cell.json");
  const fs::path sweep_out = g_dir / "cell-sweep";
  const fs::path solve_out = g_dir / "cell-solve";
  ASSERT_EQ(run_cli("sweep " + (g_dir / "cell.json").string() + " -o " + sweep_out.string()), 0);
  ASSERT_EQ(run_cli("solve " + (g_dir / "cell.json").string() + " -o " + solve_out.string()), 0);

  const std::string records = slurp(sweep_out / "records.csv");
  const std::string summary = slurp(solve_out / "summary.json");
  const auto j = nlohmann::json::parse(summary);
  // The sweep row carries the same energy the solve summary reports.
  const std::string energy = ipotts::detail::fmt_double(j.at("energy").get<double>());
  EXPECT_NE(records.find("," + energy + ","), std::string::npos)
      << records << "\nenergy: " << energy;
}

TEST(Sweep, ByteIdenticalAcrossRepeats) {
  write_config(tiny_config(), g_dir / "det.json");
  const fs::path a = g_dir / "det-a", b = g_dir / "det-b";
  ASSERT_EQ(run_cli("sweep " + (g_dir / "det.json").string() + " -o " + a.string()), 0);
  ASSERT_EQ(run_cli("sweep " + (g_dir / "det.json").string() + " -o " + b.string()), 0);
  EXPECT_EQ(slurp(a / "records.csv"), slurp(b / "records.csv"));
}

TEST(Sweep, SeedOverrideChangesRecords) {
  write_config(tiny_config(), g_dir / "seed.json");
  const fs::path a = g_dir / "seed-a", b = g_dir / "seed-b";
  ASSERT_EQ(run_cli("sweep " + (g_dir / "seed.json").string() + " -o " + a.string()), 0);
  ASSERT_EQ(run_cli("sweep " + (g_dir / "seed.json").string() + " -o " + b.string() + " --seed 8"),
            0);
  EXPECT_NE(slurp(a / "records.csv"), slurp(b / "records.csv"));
}

TEST(Compare, PrintsTable) {
  ExperimentConfig cfg = tiny_config();
  cfg.methods = {Method::IPotts, Method::Tv};
  cfg.solver.pd_iterations = 300;
  write_config(cfg, g_dir / "cmp.json");
  ASSERT_EQ(run_cli("compare " + (g_dir / "cmp.json").string()), 0);
  const std::string out = slurp(g_dir / "stdout.txt");
  EXPECT_NE(out.find("ipotts"), std::string::npos);
  EXPECT_NE(out.find("tv"), std::string::npos);
}

TEST(Experiment, SupportCurveConfigRuns) {
  ExperimentConfig cfg = tiny_config();
  cfg.kind = "support_curve";
  cfg.signal = {SignalSpec::Kind::Sparse, 24, 2, 1, -1.0, 1.0};
  cfg.methods = {Method::Omp, Method::IhtM};
  cfg.curve_supports = {1, 2, 3};
  cfg.solver.iht_iters = 100;
  write_config(cfg, g_dir / "curve.json");
  const fs::path out = g_dir / "curve-out";
  ASSERT_EQ(run_cli("experiment " + (g_dir / "curve.json").string() + " -o " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "curve.csv"));
}

}  // namespace

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <path-to-ipotts-binary>\n");
    return 1;
  }
  g_binary = argv[1];
  g_dir = fs::temp_directory_path() / ("ipotts-cli-test-" + std::to_string(::getpid()));
  fs::create_directories(g_dir);
  const int rc = RUN_ALL_TESTS();
  fs::remove_all(g_dir);
  return rc;
}
