#pragma once

// Dense kernel: SVD, norms, Hadamard product and CSV serialization.
// DenseMatrix is Eigen::MatrixXd; finiteness is enforced at every entry point
// that accepts external data.

#include <Eigen/Dense>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ramcomp/errors.hpp"
#include "ramcomp/rng.hpp"

namespace ramcomp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

struct LinalgOptions {
  double power_tolerance = 1e-10;
  int power_max_iterations = 10000;
};

inline std::string shape_string(Index rows, Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

inline void require_finite(const Matrix& a, std::string_view what) {
  if (!a.allFinite()) throw InputError(std::string(what) + " contains NaN or Inf");
}

inline void require_same_shape(const Matrix& a, const Matrix& b, std::string_view what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(what) + ": " + shape_string(a.rows(), a.cols()) + " vs " +
                     shape_string(b.rows(), b.cols()));
  }
}

/// Thin SVD A = U diag(singulars) V^T with k = min(rows, cols) columns.
/// Singular values are non-increasing; callers truncate.
struct SvdResult {
  Matrix U;
  Vector singulars;
  Matrix V;
};

inline SvdResult svd(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) throw ShapeError("svd of empty matrix");
  require_finite(a, "svd input");
  Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("svd did not converge for " + shape_string(a.rows(), a.cols()) + " matrix");
  }
  return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

/// Singular values only (no vectors), non-increasing.
inline Vector singular_values(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) throw ShapeError("svd of empty matrix");
  require_finite(a, "svd input");
  Eigen::BDCSVD<Matrix> dec(a);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("svd did not converge for " + shape_string(a.rows(), a.cols()) + " matrix");
  }
  return dec.singularValues();
}

/// Largest singular value by power iteration on A^T A.
///
/// Stops once the Rayleigh estimate changes by less than `power_tolerance`
/// (relative) and the eigen-residual is below sqrt(power_tolerance). A run
/// that hits the iteration cap falls back to a full singular value
/// decomposition, so the result is always to SVD accuracy or better.
inline double spectral_norm(const Matrix& a, const LinalgOptions& opts = {}) {
  require_finite(a, "spectral_norm input");
  if (a.size() == 0) return 0.0;
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;

  // Fixed-seed start vector: deterministic, and generically not orthogonal to
  // the top right singular vector (an all-ones start is, for centered masks).
  Rng rng(0x5eed5eedULL);
  Vector v(a.cols());
  for (Index i = 0; i < v.size(); ++i) v(i) = rng.gaussian();
  v.normalize();

  const double tol = opts.power_tolerance;
  const double residual_tol = std::sqrt(tol);
  double previous = 0.0;
  for (int it = 0; it < opts.power_max_iterations; ++it) {
    const Vector w = a * v;
    const Vector bv = a.transpose() * w;
    const double lambda = w.squaredNorm();
    const double bv_norm = bv.norm();
    if (bv_norm == 0.0) break;
    const double residual = (bv - lambda * v).norm();
    if (std::abs(lambda - previous) <= tol * lambda && residual <= residual_tol * lambda) {
      return std::sqrt(lambda);
    }
    previous = lambda;
    v = bv / bv_norm;
  }
  return singular_values(a)(0);
}

inline double frobenius_norm(const Matrix& a) { return a.norm(); }

inline double nuclear_norm(const Matrix& a) { return singular_values(a).sum(); }

inline Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  return a.cwiseProduct(b);
}

/// Max-entry deviation of Q^T Q from the identity.
inline double orthonormality_error(const Matrix& q) {
  const Matrix gram = q.transpose() * q;
  return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// CSV: one row per line, comma separated decimals, no header.

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view token, std::size_t line, std::string_view source) {
  token = trim(token);
  double value = 0.0;
  const auto* end = token.data() + token.size();
  // from_chars rejects a leading '+', which some writers emit.
  const char* begin = token.data();
  if (begin != end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw InputError(std::string(source) + ":" + std::to_string(line) + ": bad number '" +
                     std::string(token) + "'");
  }
  if (!std::isfinite(value)) {
    throw InputError(std::string(source) + ":" + std::to_string(line) + ": non-finite entry");
  }
  return value;
}

inline std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

}  // namespace detail

inline Matrix read_csv(std::istream& in, std::string_view source = "<csv>") {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      row.push_back(detail::parse_double(body.substr(start, comma - start), line_no, source));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InputError(std::string(source) + ":" + std::to_string(line_no) + ": ragged row (" +
                       std::to_string(row.size()) + " entries, expected " +
                       std::to_string(rows.front().size()) + ")");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InputError(std::string(source) + ": empty matrix");
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

inline Matrix read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_csv(in, path);
}

/// Shortest round-trip decimal representation per entry, LF line endings.
inline void write_csv(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << detail::format_double(m(i, j));
    }
    out << '\n';
  }
}

inline void write_csv_file(const std::string& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  write_csv(out, m);
}

}  // namespace ramcomp
