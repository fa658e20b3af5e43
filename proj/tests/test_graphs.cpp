#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "support.hpp"

using namespace ramcomp;

namespace {

std::vector<Edge> all_cells(int n_r, int n_c) {
  std::vector<Edge> e;
  for (int i = 0; i < n_r; ++i)
    for (int j = 0; j < n_c; ++j) e.emplace_back(i, j);
  return e;
}

std::vector<Edge> diagonal(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, i);
  return e;
}

/// Every integer quadruple with a0 > 0 odd, a1..a3 even and sum of squares p.
int brute_force_generator_count(int p) {
  const int b = static_cast<int>(std::sqrt(static_cast<double>(p))) + 1;
  int count = 0;
  for (int a0 = -b; a0 <= b; ++a0)
    for (int a1 = -b; a1 <= b; ++a1)
      for (int a2 = -b; a2 <= b; ++a2)
        for (int a3 = -b; a3 <= b; ++a3) {
          if (a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3 != p) continue;
          if (a0 <= 0 || a0 % 2 == 0 || a1 % 2 || a2 % 2 || a3 % 2) continue;
          ++count;
        }
  return count;
}

}  // namespace

TEST(SampleMask, RejectsBadEdges) {
  EXPECT_THROW(SampleMask::from_edges(2, 2, {{0, 0}, {0, 0}}), InputError);
  EXPECT_THROW(SampleMask::from_edges(2, 2, {{2, 0}}), InputError);
  EXPECT_THROW(SampleMask::from_edges(0, 2, {}), InputError);
  const auto m = SampleMask::from_edges(2, 3, {{1, 2}, {0, 1}});
  EXPECT_EQ(m.edges().front(), Edge(0, 1));
  EXPECT_TRUE(m.contains(1, 2));
  EXPECT_FALSE(m.contains(0, 0));
}

TEST(Biregular, AllOnes) {
  const auto m = validate_biregular(all_cells(4, 4), 4, 4);
  EXPECT_EQ(m.d_r(), 4);
  EXPECT_EQ(m.d_c(), 4);
  EXPECT_NEAR(m.sigma1(), 4.0, 1e-12);
  EXPECT_NEAR(m.sigma2(), 0.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.alpha(), 1.0);
  const auto rep = spectral_certificate(m);
  EXPECT_TRUE(rep.is_ramanujan);
}

TEST(Biregular, Identity) {
  const auto m = validate_biregular(diagonal(4), 4, 4);
  EXPECT_EQ(m.d_r(), 1);
  EXPECT_NEAR(m.sigma1(), 1.0, 1e-12);
  EXPECT_NEAR(m.sigma2(), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(m.alpha(), 0.25);
  const auto rep = spectral_certificate(m);
  EXPECT_DOUBLE_EQ(rep.ramanujan_bound, 0.0);
  EXPECT_FALSE(rep.is_ramanujan);
}

TEST(Biregular, RejectsIrregularRow) {
  // Row 0 has degree 3, the others 2.
  std::vector<Edge> e{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {2, 1}, {2, 2}};
  EXPECT_THROW(validate_biregular(e, 3, 3), BiregularityError);
}

TEST(Biregular, RectangularInvariants) {
  // 2 x 4, rows of degree 2, columns of degree 1.
  const auto m = validate_biregular({{0, 0}, {0, 1}, {1, 2}, {1, 3}}, 2, 4);
  EXPECT_EQ(m.d_r() * m.n_rows(), m.d_c() * m.n_cols());
  EXPECT_NEAR(m.sigma1(), std::sqrt(m.d_r() * m.d_c()), 1e-8);
  EXPECT_NEAR(m.alpha(), static_cast<double>(m.d_c()) / m.n_rows(), 1e-12);
  EXPECT_NEAR(m.alpha(), static_cast<double>(m.d_r()) / m.n_cols(), 1e-12);
}

TEST(Lps, Arithmetic) {
  EXPECT_TRUE(lps::is_prime(13));
  EXPECT_FALSE(lps::is_prime(1));
  EXPECT_FALSE(lps::is_prime(91));
  EXPECT_EQ(lps::sqrt_minus_one(13), 5);
  EXPECT_TRUE(lps::is_quadratic_residue(29, 13));
  EXPECT_FALSE(lps::is_quadratic_residue(5, 13));
  EXPECT_EQ(lps::inverse_mod(5, 13) * 5 % 13, 1);
}

TEST(Lps, GeneratorsForFive) {
  const auto g = lps::generators(5);
  ASSERT_EQ(g.size(), 6u);
  for (const auto& a : g) {
    EXPECT_EQ(a[0], 1);
    EXPECT_EQ(std::abs(a[1]) + std::abs(a[2]) + std::abs(a[3]), 2);
  }
}

TEST(Lps, GeneratorCountMatchesBruteForce) {
  for (int p : {5, 13, 17, 29, 37, 41}) {
    EXPECT_EQ(static_cast<int>(lps::generators(p).size()), p + 1) << p;
    EXPECT_EQ(brute_force_generator_count(p), p + 1) << p;
  }
}

TEST(Lps, RejectsBadParameters) {
  EXPECT_THROW(lps_graph(4, 13), ParameterError);
  EXPECT_THROW(lps_graph(7, 13), ParameterError);
  EXPECT_THROW(lps_graph(5, 11), ParameterError);
  EXPECT_THROW(lps_graph(13, 13), ParameterError);
}

TEST(Lps, FiveThirteen) {
  const auto& m = ramcomp::testing::lps_5_13();
  EXPECT_EQ(m.n_rows(), 1092);
  EXPECT_EQ(m.n_cols(), 1092);
  EXPECT_EQ(m.d_r(), 6);
  EXPECT_EQ(m.d_c(), 6);
  EXPECT_NEAR(m.sigma1(), 6.0, 1e-8);
  EXPECT_LE(m.sigma2(), 2.0 * std::sqrt(5.0) + 1e-6);
  EXPECT_TRUE(is_connected_bipartite(m));
  EXPECT_TRUE(spectral_certificate(m).is_ramanujan);
}

TEST(Lps, PslCaseIsSymmetricAndRamanujan) {
  const auto m = lps_graph(29, 13);
  EXPECT_EQ(m.n_rows(), 1092);
  EXPECT_EQ(m.d_r(), 30);
  EXPECT_TRUE(m.indicator().isApprox(m.indicator().transpose()));
  EXPECT_EQ(m.indicator().diagonal().sum(), 0.0);
  EXPECT_TRUE(is_connected_graph(m));
  EXPECT_LE(m.sigma2(), 2.0 * std::sqrt(29.0) + 1e-6);
}

TEST(Lps, SmallFieldRamanujan) {
  for (int p : {13, 17}) {
    const auto m = lps_graph(p, 5);
    EXPECT_EQ(m.d_r(), p + 1);
    EXPECT_NEAR(m.sigma1(), p + 1.0, 1e-8);
    EXPECT_LE(m.sigma2(), 2.0 * std::sqrt(static_cast<double>(p)) + 1e-6);
  }
}

TEST(Lps, Deterministic) {
  const auto a = lps_graph(13, 5), b = lps_graph(13, 5);
  EXPECT_EQ(a.edges(), b.edges());
}

TEST(RandomMask, FullWithoutReplacement) {
  const auto e = random_mask(4, 5, 20, 3, false);
  EXPECT_EQ(e.size(), 20u);
  EXPECT_TRUE(SampleMask::from_edges(4, 5, e).is_full());
  EXPECT_THROW(random_mask(4, 5, 21, 3, false), ParameterError);
}

TEST(RandomMask, SeedBehaviour) {
  EXPECT_EQ(random_mask(100, 100, 500, 1, false), random_mask(100, 100, 500, 1, false));
  EXPECT_NE(random_mask(100, 100, 500, 1, false), random_mask(100, 100, 500, 2, false));
  const auto with = random_mask(10, 10, 300, 5, true);
  EXPECT_LE(with.size(), 100u);
  EXPECT_EQ(std::set<Edge>(with.begin(), with.end()).size(), with.size());
}

TEST(PermutationUnion, Regular) {
  const auto m = permutation_union_mask(60, 30, 11);
  EXPECT_EQ(m.d_r(), 30);
  EXPECT_EQ(m.d_c(), 30);
  EXPECT_EQ(m.size(), 1800u);
  EXPECT_EQ(m.edges(), permutation_union_mask(60, 30, 11).edges());
  EXPECT_THROW(permutation_union_mask(5, 6, 1), ParameterError);
}

TEST(MaskFile, RoundTrip) {
  const auto m = lps_graph(13, 5);
  std::stringstream ss;
  write_mask(ss, m);
  const auto back = read_mask(ss);
  EXPECT_EQ(back.edges(), m.edges());
  EXPECT_EQ(back.n_rows(), 60);
}

TEST(MaskFile, Header) {
  std::ostringstream os;
  write_mask(os, ramcomp::testing::lps_5_13());
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "1092 1092 6552");
}

TEST(MaskFile, RejectsMalformed) {
  const auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_mask(in);
  };
  EXPECT_THROW(parse(""), InputError);
  EXPECT_THROW(parse("2 2\n"), InputError);
  EXPECT_THROW(parse("2 2 1\n3 1\n"), InputError);
  EXPECT_THROW(parse("2 2 1\n0 1\n"), InputError);
  EXPECT_THROW(parse("2 2 2\n1 1\n"), InputError);
  EXPECT_THROW(parse("2 2 2\n1 1\n1 1\n"), InputError);
  EXPECT_THROW(parse("2 2 1\n1 x\n"), InputError);
  EXPECT_EQ(parse("2 2 2\n2 2\n1 1\n").size(), 2u);
}
