#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "support.hpp"

using namespace ramcomp;
using ramcomp::testing::gaussian;

TEST(Svd, IdentityHasUnitSingulars) {
  const auto s = svd(Matrix::Identity(3, 3));
  EXPECT_TRUE(s.singulars.isApprox(Vector::Ones(3)));
}

TEST(Svd, DiagonalCase) {
  Matrix a(2, 2);
  a << 3, 0, 0, 1;
  const auto s = svd(a);
  EXPECT_NEAR(s.singulars(0), 3.0, 1e-14);
  EXPECT_NEAR(s.singulars(1), 1.0, 1e-14);
  EXPECT_TRUE(s.U.cwiseAbs().isApprox(Matrix::Identity(2, 2)));
  EXPECT_TRUE(s.V.cwiseAbs().isApprox(Matrix::Identity(2, 2)));
}

TEST(Svd, RandomReconstructionAndOrthonormality) {
  for (int t = 0; t < 500; ++t) {
    const Index rows = 1 + (t * 7) % 64;
    const Index cols = 1 + (t * 13) % 64;
    const Matrix a = gaussian(rows, cols, 1000 + t);
    const auto s = svd(a);
    const Matrix back = s.U * s.singulars.asDiagonal() * s.V.transpose();
    ASSERT_LT((back - a).norm() / a.norm(), 1e-9) << rows << "x" << cols;
    ASSERT_LT(orthonormality_error(s.U), 1e-9);
    ASSERT_LT(orthonormality_error(s.V), 1e-9);
    for (Index k = 1; k < s.singulars.size(); ++k) ASSERT_LE(s.singulars(k), s.singulars(k - 1));
    ASSERT_GE(s.singulars.minCoeff(), 0.0);
  }
}

TEST(Svd, RejectsNonFinite) {
  Matrix a = Matrix::Ones(2, 2);
  a(1, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(svd(a), InputError);
}

TEST(SpectralNorm, Basics) {
  EXPECT_EQ(spectral_norm(Matrix::Zero(4, 3)), 0.0);
  Matrix a(2, 2);
  a << 3, 0, 0, 1;
  EXPECT_NEAR(spectral_norm(a), 3.0, 1e-10);
}

TEST(SpectralNorm, MatchesSvd) {
  for (int t = 0; t < 20; ++t) {
    const Matrix a = gaussian(6, 6, 50 + t);
    const double s1 = singular_values(a)(0);
    EXPECT_NEAR(spectral_norm(a) / s1, 1.0, 1e-8);
  }
}

TEST(SpectralNorm, RepeatedTopSingularValue) {
  // Power iteration stagnates between equal singular vectors; the value is still exact.
  EXPECT_NEAR(spectral_norm(Matrix::Identity(5, 5) * 2.0), 2.0, 1e-12);
}

TEST(NuclearNorm, Examples) {
  EXPECT_NEAR(nuclear_norm(Matrix::Identity(7, 7)), 7.0, 1e-12);
  const Vector u = gaussian(5, 1, 1).col(0).normalized();
  const Vector v = gaussian(4, 1, 2).col(0).normalized();
  EXPECT_NEAR(nuclear_norm(u * v.transpose()), 1.0, 1e-12);
  Matrix a(2, 2);
  a << 1, 1, 1, 0;
  EXPECT_NEAR(nuclear_norm(a), std::sqrt(5.0), 1e-12);
}

TEST(Norms, Ordering) {
  for (int t = 0; t < 100; ++t) {
    const Matrix a = gaussian(1 + t % 9, 1 + t % 5, 300 + t);
    const double s = spectral_norm(a), f = frobenius_norm(a), n = nuclear_norm(a);
    EXPECT_LE(s, f * (1 + 1e-12));
    EXPECT_LE(f, n * (1 + 1e-12));
  }
}

TEST(Hadamard, Examples) {
  Matrix a(2, 2), b(2, 2), want(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  want << 0, 2, 3, 0;
  EXPECT_EQ(hadamard(a, b), want);
  EXPECT_EQ(hadamard(a, Matrix::Ones(2, 2)), a);
  EXPECT_EQ(hadamard(a, Matrix::Zero(2, 2)), Matrix::Zero(2, 2));
  EXPECT_THROW(hadamard(a, Matrix::Ones(2, 3)), ShapeError);
}

TEST(Hadamard, CommutativeAndAssociative) {
  const Matrix a = gaussian(4, 5, 1), b = gaussian(4, 5, 2), c = gaussian(4, 5, 3);
  EXPECT_EQ(hadamard(a, b), hadamard(b, a));
  EXPECT_TRUE(hadamard(hadamard(a, b), c).isApprox(hadamard(a, hadamard(b, c)), 1e-15));
}

TEST(Csv, RoundTripIsExact) {
  const Matrix a = gaussian(5, 3, 9) * 1e-3;
  std::stringstream ss;
  write_csv(ss, a);
  EXPECT_EQ(read_csv(ss), a);
}

TEST(Csv, RejectsMalformed) {
  std::istringstream ragged("1,2\n3\n");
  EXPECT_THROW(read_csv(ragged), InputError);
  std::istringstream word("1,abc\n");
  EXPECT_THROW(read_csv(word), InputError);
  std::istringstream nan("1,nan\n");
  EXPECT_THROW(read_csv(nan), InputError);
  std::istringstream empty("");
  EXPECT_THROW(read_csv(empty), InputError);
  EXPECT_THROW(read_csv_file("/nonexistent/x.csv"), InputError);
}

TEST(Csv, AcceptsSpacesAndCrlf) {
  std::istringstream in(" 1 , 2.5\r\n-3,+4e1\r\n");
  Matrix want(2, 2);
  want << 1, 2.5, -3, 40;
  EXPECT_EQ(read_csv(in), want);
}

TEST(Report, FormatReal) {
  EXPECT_EQ(format_real(6.0), "6.0");
  EXPECT_EQ(format_real(0.25), "0.25");
  KeyValueBlock b;
  b.add("x", 1.5).add("ok", true).add("n", 3);
  std::ostringstream os;
  os << b;
  EXPECT_EQ(os.str(), "x=1.5\nok=true\nn=3\n");
  EXPECT_EQ(b.get("n"), "3");
}

TEST(Rng, DeterministicAndSeedSensitive) {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    EXPECT_NE(x, c.next_u64());
  }
  EXPECT_NE(derive_seed({1, 2, 3}), derive_seed({1, 3, 2}));
  EXPECT_EQ(derive_seed({1, 2, 3}), derive_seed({1, 2, 3}));
}

TEST(Rng, GaussianMoments) {
  Rng rng(7);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.gaussian();
    sum += x;
    sq += x * x;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sq / n, 1.0, 0.01);
}
