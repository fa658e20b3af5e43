#pragma once

// Command-line frontend. Exit status: 0 success, 1 infeasible certificate or
// unconverged/unsuccessful solve, 2 invalid input or arguments, 3 internal
// numerical or construction failure.

#include <CLI11.hpp>

#include <cstdint>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ramcomp/ramcomp.hpp"

namespace ramcomp::cli {

enum ExitStatus : int {
  kSuccess = 0,
  kNotCertified = 1,
  kInvalidInput = 2,
  kInternalFailure = 3,
};

inline int exit_status_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Input: return kInvalidInput;
    case ErrorKind::Certificate: return kNotCertified;
    case ErrorKind::Numerical:
    case ErrorKind::Construction: return kInternalFailure;
  }
  return kInternalFailure;
}

/// Degree or trial count beyond which `phase` insists on --full.
inline constexpr int kDeskDegreeLimit = 30;
inline constexpr int kDeskTrialLimit = 20;

struct SolverFlags {
  int max_iterations = SolverOptions{}.max_iterations;
  double tolerance = SolverOptions{}.primal_tolerance;
  double penalty = SolverOptions{}.penalty;

  void attach(CLI::App& cmd) {
    cmd.add_option("--max-iterations", max_iterations, "ADMM iteration cap")->capture_default_str();
    cmd.add_option("--tolerance", tolerance, "relative primal and dual residual tolerance")->capture_default_str();
    cmd.add_option("--penalty", penalty, "fixed ADMM penalty (on unit-RMS scaled data)")->capture_default_str();
  }
  SolverOptions options() const {
    SolverOptions o;
    o.max_iterations = max_iterations;
    o.primal_tolerance = tolerance;
    o.dual_tolerance = tolerance;
    o.penalty = penalty;
    return o;
  }
};

inline std::string baseline_path_for(const std::string& out) {
  std::filesystem::path p(out);
  const auto stem = p.stem().string();
  const auto ext = p.extension().string();
  return (p.parent_path() / (stem + "_baseline" + ext)).string();
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Matrix completion on Ramanujan-graph sample sets", "ramcomp"};
  app.require_subcommand(1);

  // graph ------------------------------------------------------------------
  auto* graph = app.add_subcommand("graph", "build or validate sampling masks");
  graph->require_subcommand(1);
  auto* graph_lps = graph->add_subcommand("lps", "LPS Ramanujan graph mask for primes p, q = 1 mod 4");
  int lps_p = 0, lps_q = 0;
  std::string lps_out;
  graph_lps->add_option("--p", lps_p, "prime p = 1 mod 4 (degree p+1)")->required();
  graph_lps->add_option("--q", lps_q, "prime q = 1 mod 4 (n = q(q^2-1)/2)")->required();
  graph_lps->add_option("--out", lps_out, "write the canonical mask file here");
  auto* graph_validate = graph->add_subcommand("validate", "check biregularity and report the spectrum");
  std::string validate_mask;
  graph_validate->add_option("--mask", validate_mask, "mask file")->required();

  // analyze ----------------------------------------------------------------
  auto* analyze = app.add_subcommand("analyze", "coherence parameters and recovery certificate");
  std::string an_matrix, an_mask;
  int an_rank = 0;
  std::optional<double> an_theta;
  analyze->add_option("--matrix", an_matrix, "reference matrix CSV")->required();
  analyze->add_option("--rank", an_rank, "rank r of the reference")->required();
  analyze->add_option("--mask", an_mask, "mask file")->required();
  analyze->add_option("--theta-override", an_theta, "use this theta instead of the mask-relative value");

  // complete ---------------------------------------------------------------
  auto* complete = app.add_subcommand("complete", "nuclear-norm completion");
  std::string co_obs, co_mask, co_mode = "exact", co_truth, co_out;
  std::optional<double> co_eps;
  double co_threshold = kDefaultSuccessThreshold;
  SolverFlags co_solver;
  complete->add_option("--obs", co_obs, "observed matrix CSV (entries off the mask are ignored)")->required();
  complete->add_option("--mask", co_mask, "mask file")->required();
  complete->add_option("--mode", co_mode, "exact | stable")
      ->check(CLI::IsMember({"exact", "stable"}))
      ->capture_default_str();
  complete->add_option("--eps", co_eps, "noise bound for --mode stable");
  complete->add_option("--truth", co_truth, "true matrix CSV; reports relative error and success");
  complete->add_option("--out", co_out, "write the completed matrix CSV here");
  complete->add_option("--threshold", co_threshold, "success threshold on relative error")->capture_default_str();
  co_solver.attach(*complete);

  // certify ----------------------------------------------------------------
  auto* certify = app.add_subcommand("certify", "dual certificate construction and audit");
  std::string ce_matrix, ce_mask;
  int ce_rank = 0, ce_iterations = 1, ce_samples = 100;
  std::uint64_t ce_seed = 0;
  std::optional<double> ce_k1, ce_k2, ce_k3;
  certify->add_option("--matrix", ce_matrix, "reference matrix CSV")->required();
  certify->add_option("--rank", ce_rank, "rank r")->required();
  certify->add_option("--mask", ce_mask, "mask file")->required();
  certify->add_option("--iterations", ce_iterations, "number p of certificate iterations")->capture_default_str();
  certify->add_option("--samples", ce_samples, "random tangent matrices for the contraction audit")
      ->capture_default_str();
  certify->add_option("--seed", ce_seed, "seed for the contraction audit")->capture_default_str();
  certify->add_option("--k1", ce_k1, "override k1 (default phi)");
  certify->add_option("--k2", ce_k2, "override k2 (default theta+phi)");
  certify->add_option("--k3", ce_k3, "override k3 (default sqrt(r(theta^2+phi^2)))");

  // phase ------------------------------------------------------------------
  auto* phase = app.add_subcommand("phase", "phase-transition sweep over rank");
  int ph_p = 0, ph_q = 0, ph_rank_min = 1, ph_rank_max = 1, ph_trials = 20;
  std::uint64_t ph_seed = 0;
  std::string ph_out, ph_mask, ph_baseline_out;
  bool ph_baseline = false, ph_full = false;
  double ph_threshold = kDefaultSuccessThreshold;
  unsigned ph_jobs = 0;
  SolverFlags ph_solver;
  auto* opt_p = phase->add_option("--p", ph_p, "LPS prime p");
  auto* opt_q = phase->add_option("--q", ph_q, "LPS prime q");
  auto* opt_mask = phase->add_option("--mask", ph_mask, "use this mask file instead of an LPS graph");
  opt_p->needs(opt_q);
  opt_q->needs(opt_p);
  opt_mask->excludes(opt_p)->excludes(opt_q);
  phase->add_option("--rank-min", ph_rank_min, "first rank")->required();
  phase->add_option("--rank-max", ph_rank_max, "last rank")->required();
  phase->add_option("--trials", ph_trials, "trials per rank")->capture_default_str();
  phase->add_option("--seed", ph_seed, "matrix seed")->capture_default_str();
  phase->add_option("--out", ph_out, "sweep CSV path")->required();
  phase->add_flag("--baseline", ph_baseline, "also sweep a random mask with the same number of samples");
  phase->add_option("--baseline-out", ph_baseline_out, "baseline CSV path (default: <out>_baseline.csv)");
  phase->add_option("--threshold", ph_threshold, "success threshold on relative error")->capture_default_str();
  phase->add_flag("--full", ph_full, "allow full-scale runs (degree > 30 or more than 20 trials)");
  phase->add_option("--jobs", ph_jobs, "worker threads (0 = logical processors)")->capture_default_str();
  ph_solver.attach(*phase);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInvalidInput;
  }

  try {
    if (graph_lps->parsed()) {
      const auto mask = lps_graph(lps_p, lps_q);
      if (!lps_out.empty()) write_mask_file(lps_out, mask);
      KeyValueBlock b;
      b.add("n_rows", mask.n_rows()).add("n_cols", mask.n_cols()).add("nnz", mask.size());
      b.add("d_r", mask.d_r()).add("d_c", mask.d_c()).add("alpha", mask.alpha());
      b.add("connected", is_connected_bipartite(mask));
      out << b << spectral_certificate(mask).to_block();
      return kSuccess;
    }
    if (graph_validate->parsed()) {
      const auto mask = validate_biregular(read_mask_file(validate_mask));
      KeyValueBlock b;
      b.add("n_rows", mask.n_rows()).add("n_cols", mask.n_cols()).add("nnz", mask.size());
      b.add("d_r", mask.d_r()).add("d_c", mask.d_c()).add("alpha", mask.alpha());
      b.add("connected", is_connected_bipartite(mask));
      out << b << spectral_certificate(mask).to_block();
      return kSuccess;
    }
    if (analyze->parsed()) {
      const Matrix x = read_csv_file(an_matrix);
      const auto mask = validate_biregular(read_mask_file(an_mask));
      const auto sp = subspace_of(x, an_rank);
      auto coh = coherence_report(sp, mask);
      if (an_theta) {
        if (*an_theta < 0) throw ParameterError("theta override must be non-negative");
        coh.theta = *an_theta;
      }
      const double n_min = static_cast<double>(std::min(mask.n_rows(), mask.n_cols()));
      const auto cert = certify_theorem35(coh.mu0, coh.theta, coh.phi, an_rank, mask.alpha(), n_min);
      out << coh.to_block() << '\n' << cert.to_block();
      KeyValueBlock extra;
      extra.add("prior_bound_degree", prior_bound_comparison(coh.mu0, an_rank));
      extra.add("mask_degree", mask.d_r());
      out << extra;
      return cert.feasible ? kSuccess : kNotCertified;
    }
    if (complete->parsed()) {
      if (co_mode == "stable" && !co_eps) throw ParameterError("--mode stable requires --eps");
      const Matrix obs = read_csv_file(co_obs);
      const auto mask = read_mask_file(co_mask);
      const auto opts = co_solver.options();
      const auto outcome = co_mode == "exact" ? complete_exact(obs, mask, opts)
                                              : complete_stable(obs, mask, *co_eps, opts);
      if (!co_out.empty()) write_csv_file(co_out, outcome.X_hat);
      auto b = outcome.to_block();
      bool ok = outcome.converged;
      if (!co_truth.empty()) {
        const Matrix truth = read_csv_file(co_truth);
        const double rel = relative_error(outcome.X_hat, truth);
        const bool success = rel < co_threshold;
        b.add("relative_error", rel).add("success", success);
        ok = ok && success;
      }
      out << b;
      return ok ? kSuccess : kNotCertified;
    }
    if (certify->parsed()) {
      const Matrix x = read_csv_file(ce_matrix);
      const auto mask = validate_biregular(read_mask_file(ce_mask));
      const auto sp = subspace_of(x, ce_rank);
      const auto coh = coherence_report(sp, mask);
      const auto cert = dual_certificate_iterate(sp, mask, ce_iterations);
      KeyValueBlock head;
      head.add("iterations", cert.iterations).add("deviation_T", cert.deviation_T);
      head.add("spectral_Tperp", cert.spectral_Tperp).add("theta", coh.theta).add("phi", coh.phi);
      head.add("theta_plus_phi", coh.theta + coh.phi);
      out << head << "iteration,residual_norm,ratio\n";
      for (std::size_t i = 0; i < cert.residual_norms.size(); ++i) {
        out << i << ',' << format_real(cert.residual_norms[i]) << ',';
        if (i > 0 && cert.residual_norms[i - 1] > 0.0) {
          out << format_real(cert.residual_norms[i] / cert.residual_norms[i - 1]);
        }
        out << '\n';
      }
      const double k1 = ce_k1.value_or(coh.phi);
      const double k2 = ce_k2.value_or(coh.theta + coh.phi);
      const double k3 = ce_k3.value_or(std::sqrt(ce_rank * (coh.theta * coh.theta + coh.phi * coh.phi)));
      const auto verdict = lemma31_check(cert.Y, sp, mask, k1, k2, k3, ce_samples, ce_seed);
      out << verdict.to_block();
      return verdict.pass ? kSuccess : kNotCertified;
    }
    if (phase->parsed()) {
      if (ph_mask.empty() && !opt_p->count()) throw ParameterError("phase needs --p/--q or --mask");
      if (ph_rank_min < 1 || ph_rank_max < ph_rank_min) {
        throw ParameterError("invalid rank range [" + std::to_string(ph_rank_min) + ", " +
                             std::to_string(ph_rank_max) + "]");
      }
      const MaskSource source = ph_mask.empty() ? MaskSource{LpsSource{ph_p, ph_q}} : MaskSource{FileSource{ph_mask}};
      const auto mask = resolve_mask(source);
      const int degree = static_cast<int>(mask.size() / static_cast<std::size_t>(mask.n_rows()));
      if (degree > kDeskDegreeLimit || ph_trials > kDeskTrialLimit) {
        if (!ph_full) {
          throw ParameterError("degree " + std::to_string(degree) + " with " + std::to_string(ph_trials) +
                               " trials is beyond desk scale; pass --full to run it anyway");
        }
        err << "warning: full-scale sweep requested; expect a very long runtime\n";
      }
      SweepConfig config;
      config.rank_min = ph_rank_min;
      config.rank_max = ph_rank_max;
      config.trials_per_rank = ph_trials;
      config.matrix_seed = ph_seed;
      config.success_threshold = ph_threshold;
      config.solver = ph_solver.options();
      config.jobs = ph_jobs;
      const LogSink log = [&err](const std::string& msg) { err << msg << '\n'; };

      const auto write = [](const std::string& path, const std::vector<PhaseSweepRecord>& records) {
        std::ofstream file(path, std::ios::binary);
        if (!file) throw InputError("cannot write " + path);
        write_sweep_csv(file, records);
      };
      const auto critical_text = [](const std::vector<PhaseSweepRecord>& records) {
        const auto r = critical_rank(records);
        return r ? std::to_string(*r) : std::string("none");
      };

      const auto records = phase_sweep(mask, config, log);
      write(ph_out, records);
      out << "critical_rank=" << critical_text(records) << '\n';
      if (ph_baseline) {
        const std::uint64_t mask_seed = derive_seed({ph_seed, 0xba5e11eULL});
        const auto base = baseline_sweep(mask.n_rows(), mask.n_cols(), mask.size(), mask_seed, config, log);
        const auto path = ph_baseline_out.empty() ? baseline_path_for(ph_out) : ph_baseline_out;
        write(path, base);
        out << "baseline_critical_rank=" << critical_text(base) << '\n';
      }
      return kSuccess;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_status_for(e);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalFailure;
  }
  return kInvalidInput;
}

}  // namespace ramcomp::cli
