#pragma once

// Recovery certificates for nuclear-norm completion on biregular masks:
// the closed-form constants (k1, k2, k3, alpha threshold, c, gamma), the
// explicit dual certificates Y and Y_p, and a numerical audit of the
// dual-certificate conditions for a given Y.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ramcomp/errors.hpp"
#include "ramcomp/graphs.hpp"
#include "ramcomp/linalg.hpp"
#include "ramcomp/report.hpp"
#include "ramcomp/rng.hpp"
#include "ramcomp/subspace.hpp"

namespace ramcomp {

namespace detail {
inline std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += sep;
    out += parts[k];
  }
  return out;
}
}  // namespace detail

struct RecoveryCertificate {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double alpha = 0.0;
  /// r(theta^2+phi^2) / ((1-(theta+phi)) (1-phi^2)), the printed threshold.
  double alpha_threshold = 0.0;
  /// r(theta^2+phi^2) / ((1-(theta+phi)) (1-phi)^2): the exact alpha at which
  /// k3 < (1-k1) sqrt(alpha (1-k2)) starts to hold, i.e. where c turns positive.
  double alpha_threshold_gate = 0.0;
  double c = 0.0;
  double gamma = 0.0;
  bool feasible = false;
  std::vector<std::string> reasons;

  KeyValueBlock to_block() const {
    KeyValueBlock b;
    b.add("k1", k1).add("k2", k2).add("k3", k3).add("alpha", alpha);
    b.add("alpha_threshold", alpha_threshold).add("alpha_threshold_gate", alpha_threshold_gate);
    b.add("c", c).add("gamma", gamma).add("feasible", feasible);
    b.add("reasons", reasons.empty() ? std::string("none") : detail::join(reasons, "; "));
    return b;
  }
};

/// Deterministic recovery constants from (mu0, theta, phi). `n_r` is the
/// smaller matrix dimension. Infeasibility is reported through `feasible` and
/// `reasons`, never thrown.
///
/// k1 = phi, k2 = theta + phi, k3 = sqrt(r (theta^2 + phi^2)),
/// c = (1 - k1) - k3 / sqrt(alpha (1 - k2)),
/// gamma = 2 sqrt(1 + n_r / c^2 (1 + 1 / (alpha (1 - k2)))).
inline RecoveryCertificate certify_theorem35(double mu0, double theta, double phi, int r, double alpha, double n_r) {
  if (mu0 < 0 || theta < 0 || phi < 0 || alpha < 0 || n_r < 0) {
    throw ParameterError("certificate inputs must be non-negative");
  }
  if (r < 1) throw ParameterError("rank must be at least 1");
  constexpr double inf = std::numeric_limits<double>::infinity();
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  RecoveryCertificate cert;
  cert.alpha = alpha;
  cert.k1 = phi;
  cert.k2 = theta + phi;
  const double energy = r * (theta * theta + phi * phi);
  cert.k3 = std::sqrt(energy);

  if (cert.k2 >= 1.0) {
    cert.alpha_threshold = inf;
    cert.alpha_threshold_gate = inf;
    cert.c = nan;
    cert.gamma = inf;
    cert.reasons.emplace_back("theta+phi >= 1");
    return cert;
  }
  const double contraction = 1.0 - cert.k2;
  cert.alpha_threshold = energy / (contraction * (1.0 - phi * phi));
  cert.alpha_threshold_gate = energy / (contraction * (1.0 - phi) * (1.0 - phi));

  if (alpha > 0.0) {
    cert.c = (1.0 - phi) - std::sqrt(energy / (alpha * contraction));
  } else {
    cert.c = energy > 0.0 ? -inf : 1.0 - phi;
  }
  const bool above_threshold = alpha > cert.alpha_threshold;
  const bool gate = cert.c > 0.0;
  if (!above_threshold) cert.reasons.emplace_back("alpha <= alpha_threshold");
  if (!gate) cert.reasons.emplace_back("k3 >= (1-k1)*sqrt(alpha*(1-k2)), so c <= 0");
  cert.feasible = above_threshold && gate && alpha > 0.0;
  if (alpha <= 0.0) cert.reasons.emplace_back("alpha must be positive");

  cert.gamma = cert.c > 0.0 && alpha > 0.0
                   ? 2.0 * std::sqrt(1.0 + n_r / (cert.c * cert.c) * (1.0 + 1.0 / (alpha * contraction)))
                   : inf;
  return cert;
}

/// (gamma + delta) * epsilon; delta -> 0 gives the limiting bound gamma*eps.
inline double error_bound(const RecoveryCertificate& cert, double epsilon, double delta) {
  if (!cert.feasible) throw CertificateError("error bound requested from an infeasible certificate");
  if (epsilon < 0.0) throw ParameterError("epsilon must be non-negative");
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  return (cert.gamma + delta) * epsilon;
}

inline double limiting_error_bound(const RecoveryCertificate& cert, double epsilon) {
  if (!cert.feasible) throw CertificateError("error bound requested from an infeasible certificate");
  if (epsilon < 0.0) throw ParameterError("epsilon must be non-negative");
  return cert.gamma * epsilon;
}

/// Earlier literature's degree requirement d >= 144 mu0^2 r^2, for side-by-side
/// reporting only.
inline double prior_bound_comparison(double mu0, int r) {
  if (!(mu0 > 0.0) || r < 1) throw ParameterError("mu0 and r must be positive");
  return 144.0 * mu0 * mu0 * r * r;
}

// ---------------------------------------------------------------------------
// Dual certificates

struct DualCertificate {
  Matrix Y;
  double deviation_T = 0.0;     // ||P_T(Y) - U V^T||_F
  double spectral_Tperp = 0.0;  // ||P_Tperp(Y)||_S
  int iterations = 0;
  /// ||W_i||_F for i = 0..iterations (only filled by the iterated construction).
  std::vector<double> residual_norms;
};

/// Y = (1/alpha) E o (U V^T).
inline DualCertificate dual_certificate_simple(const SubspacePair& sp, const BiregularMask& mask) {
  detail::require_mask_shape(mask, sp);
  const Matrix w0 = sp.uv();
  DualCertificate cert;
  cert.Y = mask.pattern().restrict(w0) / mask.alpha();
  cert.deviation_T = (project_T(cert.Y, sp) - w0).norm();
  cert.spectral_Tperp = spectral_norm(project_Tperp(cert.Y, sp));
  cert.iterations = 1;
  return cert;
}

/// W_0 = U V^T, W_i = W_{i-1} - (1/alpha) P_T(E o W_{i-1}),
/// Y_p = sum_{i<p} (1/alpha) E o W_i. Then P_T(Y_p) = W_0 - W_p, so
/// deviation_T = ||W_p||_F.
inline DualCertificate dual_certificate_iterate(const SubspacePair& sp, const BiregularMask& mask, int p) {
  if (p < 0) throw ParameterError("iteration count must be non-negative");
  detail::require_mask_shape(mask, sp);
  const auto& pattern = mask.pattern();
  const double inv_alpha = 1.0 / mask.alpha();
  Matrix w = sp.uv();
  DualCertificate cert;
  cert.Y = Matrix::Zero(w.rows(), w.cols());
  cert.residual_norms.push_back(w.norm());
  for (int i = 0; i < p; ++i) {
    const Matrix step = pattern.restrict(w) * inv_alpha;
    cert.Y += step;
    w -= project_T(step, sp);
    cert.residual_norms.push_back(w.norm());
  }
  cert.iterations = p;
  cert.deviation_T = cert.residual_norms.back();
  cert.spectral_Tperp = p == 0 ? 0.0 : spectral_norm(project_Tperp(cert.Y, sp));
  return cert;
}

// ---------------------------------------------------------------------------
// Audit of the dual-certificate conditions for a supplied Y

struct DualCertificateVerdict {
  double k1 = 0.0, k2 = 0.0, k3 = 0.0;
  double spectral_Tperp = 0.0;     // measured ||P_Tperp(Y)||_S, compared with k1
  double deviation_T = 0.0;        // measured ||U V^T - P_T(Y)||_F, compared with k3
  double sampled_contraction = 0.0;  // max over samples of ||(1/a)P_T(E o Z) - Z|| / ||Z||
  double proven_contraction = 0.0;   // theta + phi
  double gate_rhs = 0.0;           // (1-k1) sqrt(alpha (1-k2))
  bool tperp_ok = false;
  bool contraction_ok = false;
  bool deviation_ok = false;
  bool gate_ok = false;
  bool pass = false;
  double c = std::numeric_limits<double>::quiet_NaN();
  double bound_factor = std::numeric_limits<double>::infinity();  // ||X^ - X||_F <= bound_factor * eps
  std::vector<std::string> reasons;

  KeyValueBlock to_block() const {
    KeyValueBlock b;
    b.add("k1", k1).add("k2", k2).add("k3", k3);
    b.add("spectral_Tperp", spectral_Tperp).add("tperp_ok", tperp_ok);
    b.add("sampled_contraction", sampled_contraction).add("proven_contraction", proven_contraction);
    b.add("contraction_ok", contraction_ok);
    b.add("deviation_T", deviation_T).add("deviation_ok", deviation_ok);
    b.add("gate_rhs", gate_rhs).add("gate_ok", gate_ok);
    b.add("c", c).add("bound_factor", bound_factor).add("pass", pass);
    b.add("reasons", reasons.empty() ? std::string("none") : detail::join(reasons, "; "));
    return b;
  }
};

inline constexpr double kSupportTolerance = 0.0;  // support must hold exactly

/// Checks ||P_Tperp(Y)||_S <= k1, ||U V^T - P_T(Y)||_F <= k3, the contraction
/// bound on T (spot-checked on `n_samples` seeded random Z = P_T(G)), and the
/// gate k3 < (1-k1) sqrt(alpha (1-k2)). On success reports c and the error
/// factor 2 sqrt(1 + n_r/c^2 (1 + 1/(alpha (1-k2)))).
inline DualCertificateVerdict lemma31_check(const Matrix& y, const SubspacePair& sp, const BiregularMask& mask,
                                            double k1, double k2, double k3, int n_samples, std::uint64_t seed) {
  detail::require_mask_shape(mask, sp);
  detail::require_tangent_shape(y, sp);
  const auto& ind = mask.indicator();
  for (Index j = 0; j < y.cols(); ++j)
    for (Index i = 0; i < y.rows(); ++i)
      if (ind(i, j) == 0.0 && std::abs(y(i, j)) > kSupportTolerance) {
        throw CertificateError("Y is nonzero at unsampled entry (" + std::to_string(i + 1) + ", " +
                               std::to_string(j + 1) + ")");
      }
  if (n_samples < 0) throw ParameterError("sample count must be non-negative");

  DualCertificateVerdict v;
  v.k1 = k1;
  v.k2 = k2;
  v.k3 = k3;
  const double alpha = mask.alpha();
  const auto& pattern = mask.pattern();

  v.spectral_Tperp = spectral_norm(project_Tperp(y, sp));
  v.deviation_T = (sp.uv() - project_T(y, sp)).norm();

  const auto coh = coherence_report(sp, mask);
  v.proven_contraction = coh.theta + coh.phi;
  Rng rng(seed);
  Matrix g(sp.n_rows(), sp.n_cols());
  for (int s = 0; s < n_samples; ++s) {
    for (Index j = 0; j < g.cols(); ++j)
      for (Index i = 0; i < g.rows(); ++i) g(i, j) = rng.gaussian();
    const Matrix z = project_T(g, sp);
    const double zn = z.norm();
    if (zn == 0.0) continue;
    const double ratio = (project_T(pattern.restrict(z), sp) / alpha - z).norm() / zn;
    v.sampled_contraction = std::max(v.sampled_contraction, ratio);
  }

  if (!(k1 >= 0.0 && k1 < 1.0)) v.reasons.emplace_back("k1 outside [0,1)");
  if (!(k2 >= 0.0 && k2 < 1.0)) v.reasons.emplace_back("k2 outside [0,1)");
  if (!(k3 >= 0.0)) v.reasons.emplace_back("k3 negative");
  const bool constants_ok = v.reasons.empty();

  v.tperp_ok = v.spectral_Tperp <= k1;
  if (!v.tperp_ok) v.reasons.emplace_back("||P_Tperp(Y)||_S > k1");
  v.contraction_ok = v.sampled_contraction <= k2;
  if (!v.contraction_ok) v.reasons.emplace_back("sampled contraction on T exceeds k2");
  v.deviation_ok = v.deviation_T <= k3;
  if (!v.deviation_ok) v.reasons.emplace_back("||UV^T - P_T(Y)||_F > k3");
  v.gate_rhs = k2 < 1.0 ? (1.0 - k1) * std::sqrt(alpha * (1.0 - k2)) : 0.0;
  v.gate_ok = k3 < v.gate_rhs;
  if (!v.gate_ok) v.reasons.emplace_back("gate k3 < (1-k1)*sqrt(alpha*(1-k2)) fails");

  v.pass = constants_ok && v.tperp_ok && v.contraction_ok && v.deviation_ok && v.gate_ok;
  if (v.pass) {
    const double n_r = static_cast<double>(std::min(sp.n_rows(), sp.n_cols()));
    v.c = (1.0 - k1) - k3 / std::sqrt(alpha * (1.0 - k2));
    v.bound_factor = 2.0 * std::sqrt(1.0 + n_r / (v.c * v.c) * (1.0 + 1.0 / (alpha * (1.0 - k2))));
  }
  return v;
}

}  // namespace ramcomp
