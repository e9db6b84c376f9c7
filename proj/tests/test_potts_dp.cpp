#include "ipotts/potts_dp.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace ipotts;

namespace {

Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(IntervalStats, ConstantData) {
  const auto m = PrefixMoments::of(vec({2, 2, 2}));
  const auto [mean, err] = interval_stats(m, 0, 2);
  EXPECT_DOUBLE_EQ(mean, 2.0);
  EXPECT_DOUBLE_EQ(err, 0.0);
}

TEST(IntervalStats, TwoPoint) {
  const auto m = PrefixMoments::of(vec({0, 4}));
  const auto [mean, err] = interval_stats(m, 0, 1);
  EXPECT_DOUBLE_EQ(mean, 2.0);
  EXPECT_DOUBLE_EQ(err, 8.0);  // (0-2)^2 + (4-2)^2
}

TEST(IntervalStats, MatchesDirectSummation) {
  Rng rng = Rng::keyed(11, "stats");
  const Vec f = oracle::random_vector(10, rng);
  const auto m = PrefixMoments::of(f);
  for (int l = 0; l < 10; ++l)
    for (int r = l; r < 10; ++r) {
      const auto [mean, err] = interval_stats(m, l, r);
      double dsum = 0.0, derr = 0.0;
      for (int i = l; i <= r; ++i) dsum += f[i];
      const double dmean = dsum / (r - l + 1);
      for (int i = l; i <= r; ++i) derr += (f[i] - dmean) * (f[i] - dmean);
      ASSERT_NEAR(mean, dmean, 1e-10);
      ASSERT_NEAR(err, derr, 1e-10);
    }
}

TEST(IntervalStats, OutOfRangeThrows) {
  const auto m = PrefixMoments::of(vec({1, 2}));
  EXPECT_THROW(interval_stats(m, 0, 2), ContractViolation);
  EXPECT_THROW(interval_stats(m, 1, 0), ContractViolation);
}

TEST(SolvePotts, TwoPlateausModeratePenalty) {
  const auto r = solve_potts_1d(vec({1, 1, 5, 5}), 1.0);
  EXPECT_EQ(r.values, vec({1, 1, 5, 5}));
  EXPECT_EQ(r.jump_count(), 1);
  EXPECT_NEAR(classical_potts_energy(vec({1, 1, 5, 5}), r.values, 1.0), 1.0, 1e-12);
}

TEST(SolvePotts, ZeroPenaltyReturnsData) {
  Rng rng = Rng::keyed(12, "zero");
  const Vec f = oracle::random_vector(9, rng);
  const auto r = solve_potts_1d(f, 0.0);
  EXPECT_LT((r.values - f).lpNorm<Eigen::Infinity>(), 1e-14);
  EXPECT_NEAR(classical_potts_energy(f, r.values, 0.0), 0.0, 1e-20);
}

TEST(SolvePotts, LargePenaltyMergesEverything) {
  const auto r = solve_potts_1d(vec({1, 1, 5, 5}), 20.0);
  EXPECT_EQ(r.values, Vec::Constant(4, 3.0));
  EXPECT_EQ(r.jump_count(), 0);
  EXPECT_NEAR(classical_potts_energy(vec({1, 1, 5, 5}), r.values, 20.0), 16.0, 1e-12);
}

TEST(SolvePotts, TieBrokenTowardFewerJumps) {
  // delta = 0.5 on (0,1): the 0-jump and 1-jump solutions both cost 0.5.
  const auto r = solve_potts_1d(vec({0, 1}), 0.5);
  EXPECT_EQ(r.values, Vec::Constant(2, 0.5));
  EXPECT_EQ(r.jump_count(), 0);
}

TEST(SolvePotts, MatchesExhaustiveEnumeration) {
  Rng rng = Rng::keyed(13, "dp-oracle");
  const double deltas[] = {0.0, 0.01, 0.1, 1.0, 10.0};
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + rng.uniform_int(10);
    const Vec f = oracle::random_vector(n, rng);
    for (double delta : deltas) {
      const auto r = solve_potts_1d(f, delta);
      const double got = classical_potts_energy(f, r.values, delta);
      const double want = oracle::exhaustive_potts_min(f, delta);
      ASSERT_NEAR(got, want, 1e-10) << "n=" << n << " delta=" << delta;
    }
  }
}

TEST(SolvePotts, MonotoneInDelta) {
  Rng rng = Rng::keyed(14, "monotone");
  const Vec f = oracle::random_vector(24, rng);
  double prev_energy = -1.0;
  int prev_jumps = 1 << 30;
  for (double delta : {0.0, 0.01, 0.1, 0.5, 1.0, 5.0, 10.0, 100.0}) {
    const auto r = solve_potts_1d(f, delta);
    const double energy = classical_potts_energy(f, r.values, delta);
    EXPECT_GE(energy, prev_energy - 1e-12);  // optimal value non-decreasing in delta
    EXPECT_LE(r.jump_count(), prev_jumps);   // jump count non-increasing in delta
    prev_energy = energy;
    prev_jumps = r.jump_count();
  }
}

TEST(SolvePotts, PlateauValuesAreDataMeans) {
  Rng rng = Rng::keyed(15, "means");
  const Vec f = oracle::random_vector(40, rng);
  const auto r = solve_potts_1d(f, 0.8);
  int start = 0;
  for (int i = 0; i < 40; ++i) {
    if (i < 39 && r.values[i] == r.values[i + 1]) continue;
    double mean = 0.0;
    for (int j = start; j <= i; ++j) mean += f[j];
    mean /= i - start + 1;
    ASSERT_NEAR(r.values[start], mean, 1e-12);
    start = i + 1;
  }
}

TEST(SolvePotts, Idempotent) {
  Rng rng = Rng::keyed(16, "idem");
  const Vec f = oracle::random_vector(30, rng);
  for (double delta : {0.05, 0.5, 5.0}) {
    const Vec once = solve_potts_1d(f, delta).values;
    const Vec twice = solve_potts_1d(once, delta).values;
    ASSERT_EQ(once, twice);
  }
}

TEST(SolvePotts, JumpSetConsistent) {
  const auto r = solve_potts_1d(vec({1, 1, 5, 5, 2}), 0.5);
  ASSERT_EQ(r.jump_count(), count_jumps(r.values));
  for (int i : r.jump_set) ASSERT_NE(r.values[i], r.values[i + 1]);
}

TEST(SolvePotts, RejectsBadInput) {
  EXPECT_THROW(solve_potts_1d(vec({1, 2}), -1.0), ContractViolation);
  EXPECT_THROW(solve_potts_1d(Vec(), 1.0), ContractViolation);
}

}  // namespace
