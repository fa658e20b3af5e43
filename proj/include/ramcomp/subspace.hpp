#pragma once

// Tangent-space machinery for a rank-r matrix X = U Gamma V^T: projections
// onto T and its complement, coherence parameters, the graph-relative theta
// and phi constants, and the centered sampling operator M.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "ramcomp/errors.hpp"
#include "ramcomp/graphs.hpp"
#include "ramcomp/linalg.hpp"
#include "ramcomp/report.hpp"

namespace ramcomp {

inline constexpr double kRankTolerance = 1e-10;          // relative to sigma_1
inline constexpr double kFactorOrthonormalityTolerance = 1e-6;

/// Reduced SVD factors (U, gamma, V) defining the tangent space T.
struct SubspacePair {
  Matrix U;      // n_r x r
  Vector gamma;  // r, positive, non-increasing
  Matrix V;      // n_c x r

  int rank() const { return static_cast<int>(gamma.size()); }
  Index n_rows() const { return U.rows(); }
  Index n_cols() const { return V.rows(); }
  /// U V^T (called W_0 in the certificate constructions).
  Matrix uv() const { return U * V.transpose(); }
  Matrix reconstruct() const { return U * gamma.asDiagonal() * V.transpose(); }
};

inline SubspacePair truncate(const SvdResult& s, int r) {
  if (r < 1) throw RankError("rank must be at least 1");
  if (r > s.singulars.size()) {
    throw RankError("rank " + std::to_string(r) + " exceeds " + std::to_string(s.singulars.size()) + " singular values");
  }
  const double floor = kRankTolerance * s.singulars(0);
  if (!(s.singulars(r - 1) > floor)) {
    throw RankError("singular value " + std::to_string(r) + " is " + format_real(s.singulars(r - 1)) +
                    ", below numerical rank floor " + format_real(floor));
  }
  return {s.U.leftCols(r), s.singulars.head(r), s.V.leftCols(r)};
}

inline SubspacePair subspace_of(const Matrix& x, int r) { return truncate(svd(x), r); }

namespace detail {
inline void require_tangent_shape(const Matrix& z, const SubspacePair& sp) {
  if (z.rows() != sp.n_rows() || z.cols() != sp.n_cols()) {
    throw ShapeError("matrix " + shape_string(z.rows(), z.cols()) + " vs subspace " +
                     shape_string(sp.n_rows(), sp.n_cols()));
  }
}
inline void require_mask_shape(const SampleMask& mask, const SubspacePair& sp) {
  if (mask.n_rows() != sp.n_rows() || mask.n_cols() != sp.n_cols()) {
    throw ShapeError("mask " + shape_string(mask.n_rows(), mask.n_cols()) + " vs subspace " +
                     shape_string(sp.n_rows(), sp.n_cols()));
  }
}
}  // namespace detail

/// P_T(Z) = U U^T Z + Z V V^T - U U^T Z V V^T, evaluated through r-column
/// products only.
inline Matrix project_T(const Matrix& z, const SubspacePair& sp) {
  detail::require_tangent_shape(z, sp);
  const Matrix utz = sp.U.transpose() * z;  // r x n_c
  const Matrix zv = z * sp.V;               // n_r x r
  const Matrix utzv = utz * sp.V;           // r x r
  return sp.U * utz + (zv - sp.U * utzv) * sp.V.transpose();
}

/// (I - U U^T) Z (I - V V^T), without materializing U_perp or V_perp.
inline Matrix project_Tperp(const Matrix& z, const SubspacePair& sp) { return z - project_T(z, sp); }

/// mu0(U) = (n/r) max_i ||U^i||^2; requires orthonormal columns.
inline double mu0_of(const Matrix& factor) {
  if (factor.cols() == 0 || factor.rows() == 0) throw InputError("empty factor");
  const double err = orthonormality_error(factor);
  if (err > kFactorOrthonormalityTolerance) {
    throw InputError("factor columns are not orthonormal (max |U^T U - I| = " + format_real(err) + ")");
  }
  const double n = static_cast<double>(factor.rows());
  const double r = static_cast<double>(factor.cols());
  return n / r * factor.rowwise().squaredNorm().maxCoeff();
}

/// mu1 = sqrt(n_r n_c / r) max_ij |(U V^T)_ij|.
inline double mu1_of(const SubspacePair& sp) {
  const double scale = std::sqrt(static_cast<double>(sp.n_rows()) * static_cast<double>(sp.n_cols()) / sp.rank());
  return scale * sp.uv().cwiseAbs().maxCoeff();
}

namespace detail {
/// max over neighbourhoods of || (1/alpha) sum_{l in N} F^{l T} F^l - I ||_S.
template <typename NeighbourFn>
double neighbourhood_deviation(const Matrix& factor, int count, double alpha, NeighbourFn&& neighbours) {
  const Index r = factor.cols();
  double worst = 0.0;
  Matrix gram(r, r);
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  for (int j = 0; j < count; ++j) {
    gram.setZero();
    for (int l : neighbours(j)) gram.noalias() += factor.row(l).transpose() * factor.row(l);
    gram /= alpha;
    gram.diagonal().array() -= 1.0;
    eig.compute(gram, Eigen::EigenvaluesOnly);
    worst = std::max(worst, eig.eigenvalues().cwiseAbs().maxCoeff());
  }
  return worst;
}
}  // namespace detail

/// theta evaluated on the mask's own neighbourhoods: the larger of the
/// U-deviation over every column's sampled row set and the V-deviation over
/// every row's sampled column set.
inline double theta_graph(const SubspacePair& sp, const BiregularMask& mask) {
  detail::require_mask_shape(mask, sp);
  const auto& pattern = mask.pattern();
  const double alpha = mask.alpha();
  const double by_columns = detail::neighbourhood_deviation(
      sp.U, mask.n_cols(), alpha, [&](int j) -> const std::vector<int>& { return pattern.col_neighbors(j); });
  const double by_rows = detail::neighbourhood_deviation(
      sp.V, mask.n_rows(), alpha, [&](int i) -> const std::vector<int>& { return pattern.row_neighbors(i); });
  return std::max(by_columns, by_rows);
}

/// phi = (sigma2 / sigma1) mu0 r.
inline double phi_of(double sigma_ratio, double mu0, int r) { return sigma_ratio * mu0 * r; }

inline double phi_of(const BiregularMask& mask, double mu0, int r) {
  return phi_of(mask.sigma2() / mask.sigma1(), mu0, r);
}

struct CoherenceReport {
  double mu0_U = 0.0;
  double mu0_V = 0.0;
  double mu0 = 0.0;
  double mu1 = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double alpha = 0.0;

  KeyValueBlock to_block() const {
    KeyValueBlock b;
    b.add("mu0_U", mu0_U).add("mu0_V", mu0_V).add("mu0", mu0).add("mu1", mu1);
    b.add("theta", theta).add("phi", phi).add("sigma1", sigma1).add("sigma2", sigma2).add("alpha", alpha);
    return b;
  }
};

inline CoherenceReport coherence_report(const SubspacePair& sp, const BiregularMask& mask) {
  CoherenceReport c;
  c.mu0_U = mu0_of(sp.U);
  c.mu0_V = mu0_of(sp.V);
  c.mu0 = std::max(c.mu0_U, c.mu0_V);
  c.mu1 = mu1_of(sp);
  c.theta = theta_graph(sp, mask);
  c.phi = phi_of(mask, c.mu0, sp.rank());
  c.sigma1 = mask.sigma1();
  c.sigma2 = mask.sigma2();
  c.alpha = mask.alpha();
  return c;
}

/// M = (1/alpha) E_Omega - 1, applied entrywise: M o Z = (1/alpha) E o Z - Z.
class CenteredOperator {
 public:
  explicit CenteredOperator(const BiregularMask& mask) : indicator_(mask.indicator()), alpha_(mask.alpha()) {}

  double alpha() const { return alpha_; }

  Matrix apply(const Matrix& z) const {
    require_same_shape(z, indicator_, "centered operator");
    return z.cwiseProduct(indicator_) / alpha_ - z;
  }

  Matrix materialize() const {
    return indicator_ / alpha_ - Matrix::Ones(indicator_.rows(), indicator_.cols());
  }

 private:
  Matrix indicator_;
  double alpha_;
};

}  // namespace ramcomp
