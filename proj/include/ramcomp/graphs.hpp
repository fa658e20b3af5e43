#pragma once

// Sampling masks: general sample patterns, biregular masks with spectral
// data, the LPS Cayley-graph construction over PSL/PGL(2,q), random baselines,
// and the canonical coordinate mask file format.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ramcomp/errors.hpp"
#include "ramcomp/linalg.hpp"
#include "ramcomp/report.hpp"
#include "ramcomp/rng.hpp"

namespace ramcomp {

/// (row, col), zero-based.
using Edge = std::pair<int, int>;

/// A 0/1 sample pattern E_Omega: sorted, duplicate-free edge list plus its
/// dense indicator and per-row / per-column neighbourhoods.
class SampleMask {
 public:
  SampleMask() = default;

  /// Validates bounds and duplicates; input order is irrelevant.
  static SampleMask from_edges(int n_rows, int n_cols, std::vector<Edge> edges) {
    if (n_rows <= 0 || n_cols <= 0) throw InputError("mask dimensions must be positive");
    std::sort(edges.begin(), edges.end());
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto [i, j] = edges[k];
      if (i < 0 || i >= n_rows || j < 0 || j >= n_cols) {
        throw InputError("edge (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                         ") outside " + shape_string(n_rows, n_cols));
      }
      if (k > 0 && edges[k - 1] == edges[k]) {
        throw InputError("duplicate edge (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")");
      }
    }
    SampleMask m;
    m.n_rows_ = n_rows;
    m.n_cols_ = n_cols;
    m.edges_ = std::move(edges);
    m.indicator_ = Matrix::Zero(n_rows, n_cols);
    m.row_neighbors_.assign(n_rows, {});
    m.col_neighbors_.assign(n_cols, {});
    for (const auto& [i, j] : m.edges_) {
      m.indicator_(i, j) = 1.0;
      m.row_neighbors_[i].push_back(j);
      m.col_neighbors_[j].push_back(i);
    }
    return m;
  }

  static SampleMask full(int n_rows, int n_cols) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n_rows) * n_cols);
    for (int i = 0; i < n_rows; ++i)
      for (int j = 0; j < n_cols; ++j) edges.emplace_back(i, j);
    return from_edges(n_rows, n_cols, std::move(edges));
  }

  int n_rows() const { return n_rows_; }
  int n_cols() const { return n_cols_; }
  std::size_t size() const { return edges_.size(); }
  bool is_full() const { return edges_.size() == static_cast<std::size_t>(n_rows_) * n_cols_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Matrix& indicator() const { return indicator_; }
  bool contains(int i, int j) const { return indicator_(i, j) != 0.0; }
  /// Columns sampled in row i.
  const std::vector<int>& row_neighbors(int i) const { return row_neighbors_[i]; }
  /// Rows sampled in column j, i.e. N(j).
  const std::vector<int>& col_neighbors(int j) const { return col_neighbors_[j]; }

  /// E_Omega o Z.
  Matrix restrict(const Matrix& z) const {
    require_same_shape(z, indicator_, "mask restriction");
    return z.cwiseProduct(indicator_);
  }

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<Edge> edges_;
  Matrix indicator_;
  std::vector<std::vector<int>> row_neighbors_;
  std::vector<std::vector<int>> col_neighbors_;
};

/// A (d_r, d_c)-biregular pattern with its singular-value data.
/// Built only through validate_biregular, so the invariants always hold.
class BiregularMask {
 public:
  const SampleMask& pattern() const { return pattern_; }
  operator const SampleMask&() const { return pattern_; }  // NOLINT(google-explicit-constructor)

  int n_rows() const { return pattern_.n_rows(); }
  int n_cols() const { return pattern_.n_cols(); }
  std::size_t size() const { return pattern_.size(); }
  const std::vector<Edge>& edges() const { return pattern_.edges(); }
  const Matrix& indicator() const { return pattern_.indicator(); }
  Matrix restrict(const Matrix& z) const { return pattern_.restrict(z); }

  int d_r() const { return d_r_; }
  int d_c() const { return d_c_; }
  double sigma1() const { return sigma1_; }
  double sigma2() const { return sigma2_; }
  /// Sampled fraction d_c / n_r = d_r / n_c.
  double alpha() const { return alpha_; }

 private:
  friend BiregularMask validate_biregular(SampleMask pattern);
  SampleMask pattern_;
  int d_r_ = 0;
  int d_c_ = 0;
  double sigma1_ = 0.0;
  double sigma2_ = 0.0;
  double alpha_ = 0.0;
};

/// Checks uniform row and column degrees and computes sigma1, sigma2, alpha
/// from the full singular spectrum of the 0/1 matrix.
inline BiregularMask validate_biregular(SampleMask pattern) {
  if (pattern.size() == 0) throw BiregularityError("mask has no edges");
  const int d_r = static_cast<int>(pattern.row_neighbors(0).size());
  for (int i = 0; i < pattern.n_rows(); ++i) {
    if (static_cast<int>(pattern.row_neighbors(i).size()) != d_r) {
      throw BiregularityError("row " + std::to_string(i + 1) + " has degree " +
                              std::to_string(pattern.row_neighbors(i).size()) + ", expected " +
                              std::to_string(d_r));
    }
  }
  const int d_c = static_cast<int>(pattern.col_neighbors(0).size());
  for (int j = 0; j < pattern.n_cols(); ++j) {
    if (static_cast<int>(pattern.col_neighbors(j).size()) != d_c) {
      throw BiregularityError("column " + std::to_string(j + 1) + " has degree " +
                              std::to_string(pattern.col_neighbors(j).size()) + ", expected " +
                              std::to_string(d_c));
    }
  }
  const Vector s = singular_values(pattern.indicator());
  BiregularMask mask;
  mask.d_r_ = d_r;
  mask.d_c_ = d_c;
  mask.sigma1_ = s(0);
  mask.sigma2_ = s.size() > 1 ? s(1) : 0.0;
  mask.alpha_ = static_cast<double>(d_c) / pattern.n_rows();
  mask.pattern_ = std::move(pattern);
  return mask;
}

inline BiregularMask validate_biregular(const std::vector<Edge>& edges, int n_rows, int n_cols) {
  return validate_biregular(SampleMask::from_edges(n_rows, n_cols, edges));
}

// ---------------------------------------------------------------------------
// Spectral certificate

struct SpectralReport {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  double ramanujan_bound = 0.0;
  bool is_ramanujan = false;

  KeyValueBlock to_block() const {
    KeyValueBlock b;
    b.add("sigma1", sigma1).add("sigma2", sigma2).add("ramanujan_bound", ramanujan_bound);
    b.add("is_ramanujan", is_ramanujan);
    return b;
  }
};

inline constexpr double kRamanujanSlack = 1e-6;

inline SpectralReport spectral_certificate(const BiregularMask& mask) {
  SpectralReport r;
  r.sigma1 = mask.sigma1();
  r.sigma2 = mask.sigma2();
  r.ramanujan_bound = std::sqrt(mask.d_r() - 1.0) + std::sqrt(mask.d_c() - 1.0);
  r.is_ramanujan = r.sigma2 <= r.ramanujan_bound + kRamanujanSlack;
  return r;
}

/// Connectivity of the bipartite graph with parts [n_rows] and [n_cols].
inline bool is_connected_bipartite(const SampleMask& mask) {
  const int n_r = mask.n_rows(), n_c = mask.n_cols();
  std::vector<char> seen(static_cast<std::size_t>(n_r) + n_c, 0);
  std::queue<int> frontier;  // rows are 0..n_r-1, columns n_r..n_r+n_c-1
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    const auto& next = u < n_r ? mask.row_neighbors(u) : mask.col_neighbors(u - n_r);
    const int offset = u < n_r ? n_r : 0;
    for (int w : next) {
      if (!seen[w + offset]) {
        seen[w + offset] = 1;
        ++reached;
        frontier.push(w + offset);
      }
    }
  }
  return reached == n_r + n_c;
}

/// Connectivity of a square mask read as a graph adjacency matrix.
inline bool is_connected_graph(const SampleMask& mask) {
  if (mask.n_rows() != mask.n_cols()) throw ShapeError("graph connectivity needs a square mask");
  const int n = mask.n_rows();
  std::vector<char> seen(n, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (int v : mask.row_neighbors(u)) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        frontier.push(v);
      }
    }
  }
  return reached == n;
}

// ---------------------------------------------------------------------------
// LPS construction

namespace lps {

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long k = 2; k * k <= n; ++k)
    if (n % k == 0) return false;
  return true;
}

inline int mod(long long a, int q) {
  const long long r = a % q;
  return static_cast<int>(r < 0 ? r + q : r);
}

/// Quadratic residue test by exhaustive squaring.
inline bool is_quadratic_residue(long long a, int q) {
  const int target = mod(a, q);
  for (long long x = 1; x < q; ++x)
    if (x * x % q == target) return true;
  return false;
}

/// Smallest i in [1, q-1] with i^2 = -1 (mod q).
inline int sqrt_minus_one(int q) {
  for (long long i = 1; i < q; ++i)
    if (i * i % q == q - 1) return static_cast<int>(i);
  throw ParameterError("-1 is not a square mod " + std::to_string(q));
}

inline int inverse_mod(int a, int q) {
  // Fermat; q is prime.
  long long result = 1, base = mod(a, q);
  for (long long e = q - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % q;
    base = base * base % q;
  }
  return static_cast<int>(result);
}

/// Integer solutions of a0^2+a1^2+a2^2+a3^2 = p with a0 > 0 odd and
/// a1, a2, a3 even. For a prime p = 1 (mod 4) there are exactly p+1.
inline std::vector<std::array<int, 4>> generators(int p) {
  if (p <= 0 || p % 4 != 1) throw ParameterError("p must be 1 mod 4, got " + std::to_string(p));
  std::vector<std::array<int, 4>> out;
  const int bound = static_cast<int>(std::sqrt(static_cast<double>(p))) + 1;
  for (int a0 = 1; a0 <= bound; a0 += 2)
    for (int a1 = -bound; a1 <= bound; ++a1)
      for (int a2 = -bound; a2 <= bound; ++a2)
        for (int a3 = -bound; a3 <= bound; ++a3) {
          if ((a1 | a2 | a3) & 1) continue;
          if (a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3 == p) out.push_back({a0, a1, a2, a3});
        }
  return out;
}

/// 2x2 matrix over Z/qZ, row-major (a b; c d).
using Mat2 = std::array<int, 4>;

inline Mat2 multiply(const Mat2& x, const Mat2& y, int q) {
  return {mod(1LL * x[0] * y[0] + 1LL * x[1] * y[2], q), mod(1LL * x[0] * y[1] + 1LL * x[1] * y[3], q),
          mod(1LL * x[2] * y[0] + 1LL * x[3] * y[2], q), mod(1LL * x[2] * y[1] + 1LL * x[3] * y[3], q)};
}

/// Projective representative: scaled so the first nonzero entry is 1.
inline Mat2 canonical(const Mat2& m, int q) {
  for (int k = 0; k < 4; ++k) {
    if (m[k] != 0) {
      const int s = inverse_mod(m[k], q);
      return {mod(1LL * m[0] * s, q), mod(1LL * m[1] * s, q), mod(1LL * m[2] * s, q), mod(1LL * m[3] * s, q)};
    }
  }
  throw ConstructionError("zero matrix has no projective class");
}

inline int determinant(const Mat2& m, int q) { return mod(1LL * m[0] * m[3] - 1LL * m[1] * m[2], q); }

/// Canonical projective representatives whose determinant is a nonzero
/// square (PSL(2,q)) or a non-square (the other coset of PSL in PGL(2,q)),
/// in lexicographic order.
inline std::vector<Mat2> projective_elements(int q, bool square_determinant) {
  std::vector<char> square(q, 0);
  for (long long x = 1; x < q; ++x) square[x * x % q] = 1;
  std::vector<Mat2> out;
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b)
      for (int c = 0; c < q; ++c)
        for (int d = 0; d < q; ++d) {
          const Mat2 m{a, b, c, d};
          const int lead = a ? a : b ? b : c ? c : d;
          if (lead != 1) continue;
          const int det = determinant(m, q);
          if (det != 0 && static_cast<bool>(square[det]) == square_determinant) out.push_back(m);
        }
  return out;
}

inline Mat2 generator_matrix(const std::array<int, 4>& g, int i, int q) {
  const auto [a0, a1, a2, a3] = g;
  return {mod(a0 + 1LL * i * a1, q), mod(a2 + 1LL * i * a3, q), mod(-a2 + 1LL * i * a3, q),
          mod(a0 - 1LL * i * a1, q)};
}

}  // namespace lps

/// LPS Ramanujan graph X^{p,q} as an n x n mask, n = q(q^2-1)/2, degree p+1.
///
/// When p is a square mod q the generators lie in PSL(2,q) and the mask is
/// the adjacency matrix of the Cayley graph on PSL(2,q). Otherwise the Cayley
/// graph on PGL(2,q) is bipartite between PSL(2,q) and its coset, and the mask
/// is that bipartite graph's biadjacency matrix (rows: PSL(2,q), columns: the
/// coset). Vertices are indexed by their canonical representatives in
/// lexicographic order.
inline BiregularMask lps_graph(int p, int q) {
  if (!lps::is_prime(p) || p % 4 != 1) throw ParameterError("p must be a prime = 1 mod 4, got " + std::to_string(p));
  if (!lps::is_prime(q) || q % 4 != 1) throw ParameterError("q must be a prime = 1 mod 4, got " + std::to_string(q));
  if (p == q) throw ParameterError("p and q must differ");
  const bool residue = lps::is_quadratic_residue(p, q);
  const int i = lps::sqrt_minus_one(q);
  const auto quads = lps::generators(p);
  if (static_cast<int>(quads.size()) != p + 1) {
    throw ConstructionError("expected " + std::to_string(p + 1) + " generators, found " + std::to_string(quads.size()));
  }
  std::vector<lps::Mat2> gens;
  gens.reserve(quads.size());
  for (const auto& g : quads) gens.push_back(lps::canonical(lps::generator_matrix(g, i, q), q));

  const auto rows = lps::projective_elements(q, true);
  const auto cols = residue ? rows : lps::projective_elements(q, false);
  const int n = static_cast<int>(rows.size());
  const auto key = [q](const lps::Mat2& m) {
    return ((static_cast<std::size_t>(m[0]) * q + m[1]) * q + m[2]) * q + m[3];
  };
  const std::size_t table_size = static_cast<std::size_t>(q) * q * q * q;
  std::vector<int> row_index(table_size, -1), col_index(table_size, -1);
  for (int v = 0; v < n; ++v) row_index[key(rows[v])] = v;
  for (int v = 0; v < static_cast<int>(cols.size()); ++v) col_index[key(cols[v])] = v;

  // Neighbours of `from[u]` under right multiplication, looked up in `index`.
  std::vector<int> neighbours;
  const auto neighbourhood = [&](const std::vector<lps::Mat2>& from, const std::vector<int>& index, int u) {
    neighbours.clear();
    for (const auto& s : gens) {
      const int v = index[key(lps::canonical(lps::multiply(from[u], s, q), q))];
      if (v < 0) throw ConstructionError("product left the expected coset of PSL(2," + std::to_string(q) + ")");
      neighbours.push_back(v);
    }
    std::sort(neighbours.begin(), neighbours.end());
    const auto dup = std::adjacent_find(neighbours.begin(), neighbours.end());
    if (dup != neighbours.end()) {
      throw ConstructionError("multiple edges between vertices " + std::to_string(u + 1) + " and " +
                              std::to_string(*dup + 1));
    }
  };

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * gens.size());
  for (int u = 0; u < n; ++u) {
    neighbourhood(rows, col_index, u);
    for (int v : neighbours) {
      if (residue && v == u) throw ConstructionError("self-loop at vertex " + std::to_string(u + 1));
      edges.emplace_back(u, v);
    }
  }
  auto pattern = SampleMask::from_edges(n, static_cast<int>(cols.size()), std::move(edges));

  // The generator set is closed under inversion, so walking from a column
  // vertex must reproduce exactly its sampled rows.
  for (int v = 0; v < pattern.n_cols(); ++v) {
    neighbourhood(cols, row_index, v);
    if (neighbours != pattern.col_neighbors(v)) {
      throw ConstructionError("generator set not closed under inverse at vertex " + std::to_string(v + 1));
    }
  }
  return validate_biregular(std::move(pattern));
}

// ---------------------------------------------------------------------------
// Random masks

/// m cells of [n_rows] x [n_cols], uniformly. Without replacement the result
/// has exactly m distinct edges; with replacement duplicates collapse.
inline std::vector<Edge> random_mask(int n_rows, int n_cols, std::uint64_t m, std::uint64_t seed, bool replacement) {
  if (n_rows <= 0 || n_cols <= 0) throw ParameterError("mask dimensions must be positive");
  const std::uint64_t cells = static_cast<std::uint64_t>(n_rows) * static_cast<std::uint64_t>(n_cols);
  if (!replacement && m > cells) {
    throw ParameterError("cannot draw " + std::to_string(m) + " distinct cells from " + std::to_string(cells));
  }
  Rng rng(seed);
  std::set<std::uint64_t> chosen;
  if (replacement) {
    for (std::uint64_t k = 0; k < m; ++k) chosen.insert(rng.below(cells));
  } else {
    // Floyd's algorithm: exactly m distinct draws, m calls to the generator.
    for (std::uint64_t j = cells - m; j < cells; ++j) {
      const std::uint64_t t = rng.below(j + 1);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
  }
  std::vector<Edge> edges;
  edges.reserve(chosen.size());
  for (auto cell : chosen) edges.emplace_back(static_cast<int>(cell / n_cols), static_cast<int>(cell % n_cols));
  return edges;
}

/// Union of d edge-disjoint permutation matrices on n x n (a d-regular
/// bipartite mask). Each permutation is a randomized perfect matching in the
/// bipartite complement of the edges chosen so far, which is (n-k)-regular
/// and therefore always has one.
inline BiregularMask permutation_union_mask(int n, int d, std::uint64_t seed) {
  if (n <= 0 || d <= 0 || d > n) throw ParameterError("need 0 < d <= n for a permutation union");
  Rng rng(seed);
  std::vector<std::vector<char>> used(n, std::vector<char>(n, 0));
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * d);
  std::vector<int> order(n);
  for (int k = 0; k < d; ++k) {
    std::vector<int> match_of_col(n, -1);
    std::vector<std::vector<int>> candidates(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        if (!used[i][j]) candidates[i].push_back(j);
      rng.shuffle(candidates[i]);
    }
    std::vector<char> visited(n);
    // Kuhn's augmenting path search, iterative to keep the stack flat.
    const auto augment = [&](int root) {
      std::fill(visited.begin(), visited.end(), 0);
      std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
      std::vector<int> path_cols;
      while (!stack.empty()) {
        auto& [row, next] = stack.back();
        if (next == candidates[row].size()) {
          stack.pop_back();
          if (!path_cols.empty()) path_cols.pop_back();
          continue;
        }
        const int col = candidates[row][next++];
        if (visited[col]) continue;
        visited[col] = 1;
        path_cols.push_back(col);
        if (match_of_col[col] < 0) {
          // Flip the alternating path.
          for (std::size_t s = 0; s < stack.size(); ++s) match_of_col[path_cols[s]] = stack[s].first;
          return true;
        }
        stack.emplace_back(match_of_col[col], 0);
      }
      return false;
    };
    for (int i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    for (int row : order) {
      if (!augment(row)) throw ConstructionError("no perfect matching in complement (unreachable for regular graphs)");
    }
    for (int j = 0; j < n; ++j) {
      used[match_of_col[j]][j] = 1;
      edges.emplace_back(match_of_col[j], j);
    }
  }
  return validate_biregular(edges, n, n);
}

// ---------------------------------------------------------------------------
// Coordinate mask files: "n_rows n_cols nnz" then nnz lines "i j", 1-based,
// sorted by (i, j), LF endings.

inline void write_mask(std::ostream& out, const SampleMask& mask) {
  out << mask.n_rows() << ' ' << mask.n_cols() << ' ' << mask.size() << '\n';
  for (const auto& [i, j] : mask.edges()) out << (i + 1) << ' ' << (j + 1) << '\n';
}

inline void write_mask_file(const std::string& path, const SampleMask& mask) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  write_mask(out, mask);
}

/// Accepts entries in any order; rejects duplicates, out-of-range indices and
/// a count that disagrees with the header.
inline SampleMask read_mask(std::istream& in, const std::string& source = "<mask>") {
  std::string line;
  long long n_rows = 0, n_cols = 0, nnz = -1;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream header(line);
    std::string extra;
    if (!(header >> n_rows >> n_cols >> nnz) || (header >> extra)) {
      throw InputError(source + ":" + std::to_string(line_no) + ": bad header, expected 'n_rows n_cols nnz'");
    }
    break;
  }
  if (nnz < 0) throw InputError(source + ": missing header");
  if (n_rows <= 0 || n_cols <= 0 || n_rows > INT32_MAX || n_cols > INT32_MAX) {
    throw InputError(source + ": bad dimensions");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(nnz));
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream entry(line);
    long long i = 0, j = 0;
    std::string extra;
    if (!(entry >> i >> j) || (entry >> extra)) {
      throw InputError(source + ":" + std::to_string(line_no) + ": bad entry, expected 'i j'");
    }
    if (i < 1 || i > n_rows || j < 1 || j > n_cols) {
      throw InputError(source + ":" + std::to_string(line_no) + ": index out of range");
    }
    edges.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1));
  }
  if (static_cast<long long>(edges.size()) != nnz) {
    throw InputError(source + ": header declares " + std::to_string(nnz) + " entries, found " +
                     std::to_string(edges.size()));
  }
  return SampleMask::from_edges(static_cast<int>(n_rows), static_cast<int>(n_cols), std::move(edges));
}

inline SampleMask read_mask_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_mask(in, path);
}

}  // namespace ramcomp
