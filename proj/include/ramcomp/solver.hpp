#pragma once

// Nuclear-norm minimization for matrix completion:
//   exact:  min ||Z||_*  s.t.  E o Z = E o S
//   stable: min ||Z||_*  s.t.  ||E o Z - E o S||_F <= eps
// solved by ADMM on the splitting X = Z, X carrying the nuclear norm (prox =
// singular value thresholding) and Z the constraint (prox = projection).

#include <cmath>
#include <string>

#include "ramcomp/errors.hpp"
#include "ramcomp/graphs.hpp"
#include "ramcomp/linalg.hpp"
#include "ramcomp/report.hpp"

namespace ramcomp {

struct SolverOptions {
  int max_iterations = 5000;
  double primal_tolerance = 1e-9;
  double dual_tolerance = 1e-9;
  double penalty = 1.0;

  void validate() const {
    if (max_iterations < 1) throw ParameterError("max_iterations must be >= 1");
    if (!(primal_tolerance > 0.0) || !(dual_tolerance > 0.0)) throw ParameterError("tolerances must be positive");
    if (!(penalty > 0.0)) throw ParameterError("penalty must be positive");
  }
};

struct CompletionOutcome {
  Matrix X_hat;
  int iterations_used = 0;
  double residual_on_omega = 0.0;
  double nuclear_norm_value = 0.0;
  bool converged = false;

  KeyValueBlock to_block() const {
    KeyValueBlock b;
    b.add("converged", converged).add("iterations_used", iterations_used);
    b.add("residual_on_omega", residual_on_omega).add("nuclear_norm_value", nuclear_norm_value);
    return b;
  }
};

/// Singular value thresholding U diag(max(s - tau, 0)) V^T, the proximal map
/// of tau ||.||_*.
inline Matrix svt(const Matrix& a, double tau) {
  if (!(tau >= 0.0)) throw ParameterError("threshold must be non-negative");
  const auto s = svd(a);
  const Vector shrunk = (s.singulars.array() - tau).max(0.0).matrix();
  Index keep = 0;
  while (keep < shrunk.size() && shrunk(keep) > 0.0) ++keep;
  if (keep == 0) return Matrix::Zero(a.rows(), a.cols());
  return s.U.leftCols(keep) * shrunk.head(keep).asDiagonal() * s.V.leftCols(keep).transpose();
}

namespace detail {

/// Shared ADMM loop. `project` maps a matrix onto the (scaled) constraint set.
/// Starts from Z = `start` (the scaled observations, zeros off Omega).
template <typename Projection>
CompletionOutcome admm_complete(const Matrix& start, const SolverOptions& opts, Projection&& project) {
  const double rho = opts.penalty;
  const double tau = 1.0 / rho;

  Matrix z = start;
  Matrix u = Matrix::Zero(start.rows(), start.cols());
  Matrix x = z;
  Matrix z_prev;
  CompletionOutcome out;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    x = svt(z - u, tau);
    z_prev = z;
    z = project(x + u);
    u += x - z;

    const double primal = (x - z).norm();
    const double dual = rho * (z - z_prev).norm();
    const double primal_scale = std::max(x.norm(), z.norm());
    const double dual_scale = rho * u.norm();
    out.iterations_used = it;
    if (primal <= opts.primal_tolerance * primal_scale && dual <= opts.dual_tolerance * dual_scale) {
      out.converged = true;
      break;
    }
  }
  out.X_hat = std::move(z);
  return out;
}

/// Root mean square of the sampled entries; the problem is positively
/// homogeneous, so iterating on observed / scale keeps the penalty meaningful
/// regardless of the data's magnitude.
inline double observation_scale(const Matrix& sampled, const SampleMask& mask) {
  if (mask.size() == 0) return 1.0;
  const double rms = sampled.norm() / std::sqrt(static_cast<double>(mask.size()));
  return rms > 0.0 ? rms : 1.0;
}

inline void require_observation_shape(const Matrix& observed, const SampleMask& mask) {
  if (observed.rows() != mask.n_rows() || observed.cols() != mask.n_cols()) {
    throw ShapeError("observations " + shape_string(observed.rows(), observed.cols()) + " vs mask " +
                     shape_string(mask.n_rows(), mask.n_cols()));
  }
  require_finite(observed, "observations");
}

}  // namespace detail

/// Equality-constrained completion. Entries of `observed` off Omega are ignored.
inline CompletionOutcome complete_exact(const Matrix& observed, const SampleMask& mask, const SolverOptions& opts = {}) {
  opts.validate();
  detail::require_observation_shape(observed, mask);
  const Matrix& ind = mask.indicator();
  const Matrix sampled = observed.cwiseProduct(ind);

  CompletionOutcome out;
  if (mask.is_full()) {
    // The feasible set is the single point S.
    out.X_hat = sampled;
    out.iterations_used = 1;
    out.converged = true;
  } else {
    const double scale = detail::observation_scale(sampled, mask);
    const Matrix target = sampled / scale;
    const Matrix off = Matrix::Ones(ind.rows(), ind.cols()) - ind;
    out = detail::admm_complete(target, opts,
                                [&](const Matrix& m) -> Matrix { return m.cwiseProduct(off) + target; });
    out.X_hat *= scale;
  }
  out.residual_on_omega = (out.X_hat - sampled).cwiseProduct(ind).norm();
  out.nuclear_norm_value = nuclear_norm(out.X_hat);
  return out;
}

/// Frobenius-ball constrained completion around the noisy observations.
/// With epsilon = 0 the projection is the exact-mode projection.
inline CompletionOutcome complete_stable(const Matrix& observed_noisy, const SampleMask& mask, double epsilon,
                                         const SolverOptions& opts = {}) {
  opts.validate();
  if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be non-negative");
  if (epsilon == 0.0) return complete_exact(observed_noisy, mask, opts);
  detail::require_observation_shape(observed_noisy, mask);
  const Matrix& ind = mask.indicator();
  const Matrix sampled = observed_noisy.cwiseProduct(ind);

  CompletionOutcome out;
  if (sampled.norm() <= epsilon) {
    // Zero is feasible and has the smallest possible nuclear norm.
    out.X_hat = Matrix::Zero(sampled.rows(), sampled.cols());
    out.converged = true;
  } else {
    const double scale = detail::observation_scale(sampled, mask);
    const Matrix target = sampled / scale;
    const double radius = epsilon / scale;
    out = detail::admm_complete(target, opts, [&](const Matrix& m) -> Matrix {
      const Matrix residual = (m - target).cwiseProduct(ind);
      const double norm = residual.norm();
      if (norm <= radius) return m;
      return m - residual * (1.0 - radius / norm);
    });
    out.X_hat *= scale;
  }
  out.residual_on_omega = (out.X_hat - sampled).cwiseProduct(ind).norm();
  out.nuclear_norm_value = nuclear_norm(out.X_hat);
  return out;
}

inline double relative_error(const Matrix& x_hat, const Matrix& x_true) {
  require_same_shape(x_hat, x_true, "relative error");
  const double denom = x_true.norm();
  if (denom == 0.0) throw InputError("reference matrix is zero");
  return (x_hat - x_true).norm() / denom;
}

inline constexpr double kDefaultSuccessThreshold = 1e-6;

/// ||X^ - X||_F / ||X||_F < threshold.
inline bool recovery_success(const Matrix& x_hat, const Matrix& x_true, double threshold = kDefaultSuccessThreshold) {
  return relative_error(x_hat, x_true) < threshold;
}

}  // namespace ramcomp
