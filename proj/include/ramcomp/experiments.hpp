#pragma once

// Phase-transition harness: random Gaussian-factor low-rank matrices are
// sampled through a fixed mask, completed, and scored; results are reduced
// per rank into success ratios and a critical rank.

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "ramcomp/errors.hpp"
#include "ramcomp/graphs.hpp"
#include "ramcomp/linalg.hpp"
#include "ramcomp/rng.hpp"
#include "ramcomp/solver.hpp"

namespace ramcomp {

/// Optional sink for per-trial diagnostics (solver failures, regenerations).
using LogSink = std::function<void(const std::string&)>;

inline constexpr double kLowRankFloor = 1e-8;

/// X = G H^T with independent standard normal G (n_r x r), H (n_c x r) drawn
/// from mt19937_64(seed) via Box-Muller, G row-major first, then H. A draw
/// whose sigma_r falls below 1e-8 sigma_1 is regenerated from mix64(seed).
inline Matrix random_low_rank(int n_r, int n_c, int r, std::uint64_t seed, const LogSink& log = {}) {
  if (n_r <= 0 || n_c <= 0) throw ParameterError("matrix dimensions must be positive");
  if (r < 1 || r > std::min(n_r, n_c)) {
    throw ParameterError("rank " + std::to_string(r) + " outside [1, " + std::to_string(std::min(n_r, n_c)) + "]");
  }
  for (int attempt = 0; attempt < 16; ++attempt) {
    Rng rng(seed);
    Matrix g(n_r, r), h(n_c, r);
    for (Index i = 0; i < g.rows(); ++i)
      for (Index k = 0; k < r; ++k) g(i, k) = rng.gaussian();
    for (Index j = 0; j < h.rows(); ++j)
      for (Index k = 0; k < r; ++k) h(j, k) = rng.gaussian();
    Matrix x = g * h.transpose();
    const Vector s = singular_values(x);
    if (s(r - 1) > kLowRankFloor * s(0)) return x;
    if (log) log("random_low_rank: rank deficient draw for seed " + std::to_string(seed) + ", regenerating");
    seed = mix64(seed);
  }
  throw NumericalError("could not draw a full-rank factor product");
}

struct LpsSource {
  int p = 5;
  int q = 13;
};
struct FileSource {
  std::string path;
};
struct RandomSource {
  int n_rows = 0;
  int n_cols = 0;
  std::uint64_t m = 0;
  std::uint64_t seed = 0;
};
struct PermutationSource {
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;
};
using MaskSource = std::variant<LpsSource, FileSource, RandomSource, PermutationSource>;

inline SampleMask resolve_mask(const MaskSource& source) {
  struct Visitor {
    SampleMask operator()(const LpsSource& s) const { return lps_graph(s.p, s.q).pattern(); }
    SampleMask operator()(const FileSource& s) const { return read_mask_file(s.path); }
    SampleMask operator()(const RandomSource& s) const {
      return SampleMask::from_edges(s.n_rows, s.n_cols, random_mask(s.n_rows, s.n_cols, s.m, s.seed, false));
    }
    SampleMask operator()(const PermutationSource& s) const { return permutation_union_mask(s.n, s.d, s.seed).pattern(); }
  };
  return std::visit(Visitor{}, source);
}

struct SweepConfig {
  int rank_min = 1;
  int rank_max = 1;
  int trials_per_rank = 20;
  std::uint64_t matrix_seed = 0;
  double success_threshold = kDefaultSuccessThreshold;
  SolverOptions solver;
  /// Worker threads; 0 means hardware concurrency. Output does not depend on it.
  unsigned jobs = 1;

  void validate(const SampleMask& mask) const {
    if (rank_min < 1) throw ParameterError("rank_min must be >= 1");
    if (rank_max < rank_min) throw ParameterError("rank_max must be >= rank_min");
    if (rank_max > std::min(mask.n_rows(), mask.n_cols())) throw ParameterError("rank_max exceeds matrix dimension");
    if (trials_per_rank < 1) throw ParameterError("trials_per_rank must be >= 1");
    if (!(success_threshold > 0.0)) throw ParameterError("success threshold must be positive");
    solver.validate();
  }
};

struct PhaseSweepRecord {
  int rank = 0;
  int trials = 0;
  int successes = 0;
  double mean_relative_error = 0.0;
  double mean_iterations = 0.0;
  int solver_failures = 0;  // unconverged solves; not part of the CSV

  double success_rate() const { return trials ? static_cast<double>(successes) / trials : 0.0; }
};

struct TrialResult {
  double relative_error = 0.0;
  int iterations = 0;
  bool converged = false;
  bool success = false;
};

/// One generate -> sample -> complete -> score cycle.
inline TrialResult run_trial(const SampleMask& mask, int rank, int trial, const SweepConfig& config,
                             const LogSink& log = {}) {
  const std::uint64_t seed = derive_seed({config.matrix_seed, static_cast<std::uint64_t>(rank),
                                          static_cast<std::uint64_t>(trial)});
  const Matrix x = random_low_rank(mask.n_rows(), mask.n_cols(), rank, seed, log);
  const auto outcome = complete_exact(mask.restrict(x), mask, config.solver);
  TrialResult t;
  t.relative_error = relative_error(outcome.X_hat, x);
  t.iterations = outcome.iterations_used;
  t.converged = outcome.converged;
  t.success = t.converged && t.relative_error < config.success_threshold;
  return t;
}

/// Every (rank, trial) pair is independent and seeded by
/// derive_seed(matrix_seed, rank, trial); results are reduced in (rank, trial)
/// order, so output is identical for any `jobs`.
inline std::vector<PhaseSweepRecord> phase_sweep(const SampleMask& mask, const SweepConfig& config,
                                                 const LogSink& log = {}) {
  config.validate(mask);
  const int ranks = config.rank_max - config.rank_min + 1;
  const std::size_t total = static_cast<std::size_t>(ranks) * config.trials_per_rank;
  std::vector<TrialResult> results(total);

  std::mutex log_mutex;
  const LogSink locked_log = [&](const std::string& msg) {
    if (!log) return;
    std::lock_guard lock(log_mutex);
    log(msg);
  };

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= total) return;
      const int rank = config.rank_min + static_cast<int>(k / config.trials_per_rank);
      const int trial = static_cast<int>(k % config.trials_per_rank);
      try {
        results[k] = run_trial(mask, rank, trial, config, locked_log);
        if (!results[k].converged) {
          locked_log("rank " + std::to_string(rank) + " trial " + std::to_string(trial) +
                     ": solver did not converge (counted as failure)");
        } else if (!results[k].success) {
          locked_log("rank " + std::to_string(rank) + " trial " + std::to_string(trial) +
                     ": converged but not recovered, relative error " + format_real(results[k].relative_error));
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
    }
  };

  unsigned jobs = config.jobs ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, total));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<PhaseSweepRecord> records;
  records.reserve(ranks);
  for (int k = 0; k < ranks; ++k) {
    PhaseSweepRecord rec;
    rec.rank = config.rank_min + k;
    rec.trials = config.trials_per_rank;
    double err_sum = 0.0, it_sum = 0.0;
    for (int t = 0; t < config.trials_per_rank; ++t) {
      const auto& tr = results[static_cast<std::size_t>(k) * config.trials_per_rank + t];
      rec.successes += tr.success ? 1 : 0;
      rec.solver_failures += tr.converged ? 0 : 1;
      err_sum += tr.relative_error;
      it_sum += tr.iterations;
    }
    rec.mean_relative_error = err_sum / rec.trials;
    rec.mean_iterations = it_sum / rec.trials;
    records.push_back(rec);
  }
  return records;
}

/// Same protocol on a uniformly random mask with m = `samples` cells drawn
/// without replacement.
inline std::vector<PhaseSweepRecord> baseline_sweep(int n_rows, int n_cols, std::uint64_t samples,
                                                    std::uint64_t mask_seed, const SweepConfig& config,
                                                    const LogSink& log = {}) {
  const auto mask = resolve_mask(RandomSource{n_rows, n_cols, samples, mask_seed});
  return phase_sweep(mask, config, log);
}

/// Largest r such that every record with rank <= r is a full success; empty
/// when the first record already fails.
inline std::optional<int> critical_rank(const std::vector<PhaseSweepRecord>& records) {
  if (records.empty()) throw InputError("no sweep records");
  for (std::size_t k = 1; k < records.size(); ++k) {
    if (records[k].rank != records[k - 1].rank + 1) throw InputError("sweep records must be sorted and contiguous");
  }
  std::optional<int> best;
  for (const auto& rec : records) {
    if (rec.successes != rec.trials) break;
    best = rec.rank;
  }
  return best;
}

inline constexpr const char* kSweepCsvHeader = "rank,trials,successes,success_rate,mean_relative_error,mean_iterations";

inline void write_sweep_csv(std::ostream& out, const std::vector<PhaseSweepRecord>& records) {
  out << kSweepCsvHeader << '\n';
  char line[256];
  for (const auto& rec : records) {
    std::snprintf(line, sizeof line, "%d,%d,%d,%.6f,%.6e,%.2f\n", rec.rank, rec.trials, rec.successes,
                  rec.success_rate(), rec.mean_relative_error, rec.mean_iterations);
    out << line;
  }
}

}  // namespace ramcomp
