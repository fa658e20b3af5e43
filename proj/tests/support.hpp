#pragma once

#include <Eigen/QR>

#include "ramcomp/ramcomp.hpp"

namespace ramcomp::testing {

inline Matrix gaussian(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.gaussian();
  return m;
}

inline Matrix orthonormal(Index n, Index r, std::uint64_t seed) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(n, r, seed));
  return qr.householderQ() * Matrix::Identity(n, r);
}

/// Sylvester Hadamard matrix of order n (a power of two).
inline Matrix sylvester(Index n) {
  Matrix h = Matrix::Ones(1, 1);
  while (h.rows() < n) {
    Matrix next(2 * h.rows(), 2 * h.rows());
    next << h, h, h, -h;
    h = next;
  }
  return h;
}

/// Shared so the dense SVD of the 1092-vertex graph runs once per binary.
inline const BiregularMask& lps_5_13() {
  static const BiregularMask mask = lps_graph(5, 13);
  return mask;
}

/// Rank-r matrix with random orthonormal factors and singular values 1..r.
inline Matrix random_rank(Index n_r, Index n_c, int r, std::uint64_t seed) {
  const Matrix u = orthonormal(n_r, r, seed);
  const Matrix v = orthonormal(n_c, r, seed + 1);
  Vector s(r);
  for (int k = 0; k < r; ++k) s(k) = r - k;
  return u * s.asDiagonal() * v.transpose();
}

}  // namespace ramcomp::testing
