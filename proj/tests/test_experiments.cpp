#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace ramcomp;

namespace {

PhaseSweepRecord record(int rank, int trials, int successes) {
  PhaseSweepRecord r;
  r.rank = rank;
  r.trials = trials;
  r.successes = successes;
  return r;
}

std::string csv(const std::vector<PhaseSweepRecord>& records) {
  std::ostringstream os;
  write_sweep_csv(os, records);
  return os.str();
}

}  // namespace

TEST(RandomLowRank, Properties) {
  const Matrix a = random_low_rank(20, 20, 3, 9);
  EXPECT_EQ(a, random_low_rank(20, 20, 3, 9));
  EXPECT_NE(a, random_low_rank(20, 20, 3, 10));
  const Vector s = singular_values(a);
  EXPECT_LT(s(3) / s(0), 1e-10);
  EXPECT_GT(s(2) / s(0), 1e-8);
  const Vector full = singular_values(random_low_rank(6, 8, 6, 1));
  EXPECT_GT(full(5), 1e-8 * full(0));
  EXPECT_THROW(random_low_rank(5, 5, 0, 1), ParameterError);
  EXPECT_THROW(random_low_rank(5, 5, 6, 1), ParameterError);
}

TEST(CriticalRank, Definition) {
  EXPECT_EQ(critical_rank({record(1, 100, 100), record(2, 100, 100), record(3, 100, 97)}), 2);
  EXPECT_EQ(critical_rank({record(1, 5, 5), record(2, 5, 5)}), 2);
  EXPECT_EQ(critical_rank({record(1, 5, 4), record(2, 5, 5)}), std::nullopt);
  EXPECT_THROW(critical_rank({}), InputError);
  EXPECT_THROW(critical_rank({record(1, 5, 5), record(3, 5, 5)}), InputError);
}

TEST(SweepConfig, Validation) {
  const auto mask = SampleMask::full(5, 5);
  SweepConfig c;
  c.rank_min = 3;
  c.rank_max = 2;
  EXPECT_THROW(c.validate(mask), ParameterError);
  c.rank_min = 1;
  c.rank_max = 6;
  EXPECT_THROW(c.validate(mask), ParameterError);
  c.rank_max = 5;
  c.trials_per_rank = 0;
  EXPECT_THROW(c.validate(mask), ParameterError);
}

TEST(PhaseSweep, FullMaskAlwaysSucceeds) {
  SweepConfig c;
  c.rank_min = 1;
  c.rank_max = 4;
  c.trials_per_rank = 1;
  const auto records = phase_sweep(SampleMask::full(8, 8), c);
  ASSERT_EQ(records.size(), 4u);
  for (const auto& r : records) EXPECT_EQ(r.successes, 1);
  EXPECT_EQ(critical_rank(records), 4);
}

TEST(PhaseSweep, ExtremesOnSmallMask) {
  const auto mask = permutation_union_mask(30, 15, 3);
  SweepConfig c;
  c.rank_min = 1;
  c.rank_max = 1;
  c.trials_per_rank = 3;
  EXPECT_EQ(phase_sweep(mask, c).front().successes, 3);
  c.rank_min = c.rank_max = 12;
  c.solver.max_iterations = 500;
  EXPECT_EQ(phase_sweep(mask, c).front().successes, 0);
}

TEST(PhaseSweep, CsvIndependentOfJobs) {
  const auto mask = permutation_union_mask(20, 10, 2);
  SweepConfig c;
  c.rank_min = 1;
  c.rank_max = 3;
  c.trials_per_rank = 3;
  c.matrix_seed = 77;
  c.solver.max_iterations = 300;
  c.jobs = 1;
  const auto serial = csv(phase_sweep(mask, c));
  c.jobs = 4;
  EXPECT_EQ(csv(phase_sweep(mask, c)), serial);
  EXPECT_EQ(csv(phase_sweep(mask, c)), serial);
}

TEST(BaselineSweep, FullSampleCountAndDeterminism) {
  SweepConfig c;
  c.rank_min = 1;
  c.rank_max = 2;
  c.trials_per_rank = 2;
  const auto all = baseline_sweep(6, 6, 36, 1, c);
  for (const auto& r : all) EXPECT_EQ(r.successes, r.trials);
  c.solver.max_iterations = 200;
  EXPECT_EQ(csv(baseline_sweep(20, 20, 200, 5, c)), csv(baseline_sweep(20, 20, 200, 5, c)));
}

TEST(SweepCsv, Format) {
  auto r = record(2, 20, 19);
  r.mean_relative_error = 1.25e-7;
  r.mean_iterations = 212.5;
  EXPECT_EQ(csv({r}), "rank,trials,successes,success_rate,mean_relative_error,mean_iterations\n"
                      "2,20,19,0.950000,1.250000e-07,212.50\n");
}

TEST(MaskSource, Resolves) {
  EXPECT_EQ(resolve_mask(LpsSource{13, 5}).n_rows(), 60);
  EXPECT_EQ(resolve_mask(RandomSource{5, 6, 10, 1}).size(), 10u);
  EXPECT_EQ(resolve_mask(PermutationSource{10, 3, 1}).size(), 30u);
  EXPECT_THROW(resolve_mask(FileSource{"/nonexistent/mask.coo"}), InputError);
}
