// Independent reference computations used by the tests. Nothing here calls the
// library's LP, vertex, rank, or canonicalization code.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doflab/bounds.hpp"
#include "doflab/engine.hpp"
#include "doflab/rational.hpp"

namespace oracle {

using doflab::Rational;

inline Rational q(long long n, long long d = 1) { return Rational(doflab::BigInt(n), doflab::BigInt(d)); }

/// A halfspace written by hand: label -> coefficient, and a right side.
struct Row {
  std::map<std::string, Rational> coef;
  Rational rhs;
};

/// Key that identifies a halfspace up to positive scaling: largest |coef| scaled to 1.
inline std::string key(std::map<std::string, Rational> coef, Rational rhs) {
  for (auto it = coef.begin(); it != coef.end();) it = it->second.is_zero() ? coef.erase(it) : std::next(it);
  Rational big(0);
  for (const auto& [l, c] : coef) big = std::max(big, c.abs());
  if (big.is_zero()) big = Rational(1);
  std::string k;
  for (const auto& [l, c] : coef) k += l + "=" + (c / big).str() + ";";
  return k + "<=" + (rhs / big).str();
}

inline std::string key(const Row& r) { return key(r.coef, r.rhs); }

inline std::string key(const doflab::Inequality& row) {
  std::map<std::string, Rational> c;
  for (const auto& [s, a] : row.coefficients()) c[s.label()] = a;
  return key(c, row.rhs());
}

inline std::multiset<std::string> keys(const std::vector<Row>& rows) {
  std::multiset<std::string> out;
  for (const auto& r : rows) out.insert(key(r));
  return out;
}

inline std::multiset<std::string> keys(const doflab::Region& region) {
  std::multiset<std::string> out;
  for (const auto& r : region.inequalities()) out.insert(key(r));
  return out;
}

inline Row box(const std::string& l) { return Row{{{l, q(1)}}, q(1)}; }
inline Row nonneg(const std::string& l) { return Row{{{l, q(-1)}}, q(0)}; }

/// The eight inequality families bounding the 3-user hybrid region with common messages.
inline std::vector<Row> common_region31() {
  std::vector<Row> rows;
  for (const char* l : {"d_1", "d_2", "d_3", "d_12", "d_13", "d_23", "d_123"}) {
    rows.push_back(box(l));
    rows.push_back(nonneg(l));
  }
  rows.push_back(Row{{{"d_1", q(1, 2)}, {"d_12", q(1)}, {"d_2", q(1)}}, q(1)});
  rows.push_back(Row{{{"d_1", q(1, 2)}, {"d_13", q(1)}, {"d_3", q(1)}}, q(1)});
  rows.push_back(Row{{{"d_1", q(1, 3)},
                      {"d_12", q(1, 2)},
                      {"d_2", q(1, 2)},
                      {"d_123", q(1)},
                      {"d_13", q(1)},
                      {"d_23", q(1)},
                      {"d_3", q(1)}},
                     q(1)});
  rows.push_back(Row{{{"d_1", q(1, 3)},
                      {"d_123", q(1)},
                      {"d_12", q(1)},
                      {"d_23", q(1)},
                      {"d_2", q(1)},
                      {"d_13", q(1, 2)},
                      {"d_3", q(1, 2)}},
                     q(1)});
  return rows;
}

/// The seven private-message inequalities plus nonnegativity.
inline std::vector<Row> private_region31() {
  return {box("d_1"),
          box("d_2"),
          box("d_3"),
          Row{{{"d_1", q(1, 2)}, {"d_2", q(1)}}, q(1)},
          Row{{{"d_1", q(1, 2)}, {"d_3", q(1)}}, q(1)},
          Row{{{"d_1", q(1, 3)}, {"d_2", q(1, 2)}, {"d_3", q(1)}}, q(1)},
          Row{{{"d_1", q(1, 3)}, {"d_2", q(1)}, {"d_3", q(1, 2)}}, q(1)},
          nonneg("d_1"),
          nonneg("d_2"),
          nonneg("d_3")};
}

/// The private region in the d_1 = 1 plane.
inline std::vector<Row> private_slice31() {
  return {Row{{{"d_2", q(1)}}, q(1, 2)},
          Row{{{"d_3", q(1)}}, q(1, 2)},
          Row{{{"d_2", q(1, 2)}, {"d_3", q(1)}}, q(2, 3)},
          Row{{{"d_2", q(1)}, {"d_3", q(1, 2)}}, q(2, 3)},
          nonneg("d_2"),
          nonneg("d_3")};
}

using Dense = std::vector<std::vector<Rational>>;

inline Rational det(Dense m) {
  const std::size_t n = m.size();
  if (n == 0) return q(1);
  if (n == 1) return m[0][0];
  if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
  // Laplace expansion along the first row; n <= 4 in every caller.
  Rational d(0);
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    Dense minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Rational> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != c) row.push_back(m[r][k]);
      }
      minor.push_back(row);
    }
    const Rational term = m[0][c] * det(minor);
    d = (c % 2 == 0) ? d + term : d - term;
  }
  return d;
}

/// Dense form of a region's rows over its variable order.
inline std::pair<Dense, std::vector<Rational>> dense(const doflab::Region& region) {
  Dense a;
  std::vector<Rational> b;
  for (const auto& row : region.inequalities()) {
    std::vector<Rational> r;
    for (const auto& v : region.variables()) r.push_back(row.coefficient(v));
    a.push_back(r);
    b.push_back(row.rhs());
  }
  return {a, b};
}

inline bool satisfies(const Dense& a, const std::vector<Rational>& b, const std::vector<Rational>& x) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational s(0);
    for (std::size_t j = 0; j < x.size(); ++j) s += a[i][j] * x[j];
    if (s > b[i]) return false;
  }
  return true;
}

/// Vertices by Cramer's rule over every choice of n rows (n = number of variables).
inline std::set<std::vector<Rational>> vertices(const Dense& a, const std::vector<Rational>& b, std::size_t n) {
  std::set<std::vector<Rational>> out;
  const std::size_t m = a.size();
  std::vector<bool> pick(m, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(std::min(n, m)), true);
  if (n > m) return out;
  do {
    Dense sub;
    std::vector<Rational> rhs;
    for (std::size_t i = 0; i < m; ++i) {
      if (pick[i]) {
        sub.push_back(a[i]);
        rhs.push_back(b[i]);
      }
    }
    const Rational d = det(sub);
    if (d.is_zero()) continue;
    std::vector<Rational> x(n);
    for (std::size_t j = 0; j < n; ++j) {
      Dense mj = sub;
      for (std::size_t i = 0; i < n; ++i) mj[i][j] = rhs[i];
      x[j] = det(mj) / d;
    }
    if (satisfies(a, b, x)) out.insert(x);
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return out;
}

// ---- GF(2^61 - 1) reference arithmetic, written without the library's ModP type. ----

constexpr std::uint64_t kP = (std::uint64_t{1} << 61) - 1;

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  __extension__ using U = unsigned __int128;
  return static_cast<std::uint64_t>((static_cast<U>(a) * b) % kP);
}
inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b) { return (a + b) % kP; }
inline std::uint64_t submod(std::uint64_t a, std::uint64_t b) { return (a + kP - b) % kP; }
inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod(r, a);
    a = mulmod(a, a);
    e >>= 1;
  }
  return r;
}
inline std::uint64_t invmod(std::uint64_t a) { return powmod(a, kP - 2); }

using ModMatrix = std::vector<std::vector<std::uint64_t>>;

inline ModMatrix to_mod(const doflab::Matrix<doflab::ModP>& g) {
  ModMatrix m(g.rows, std::vector<std::uint64_t>(g.cols));
  for (std::size_t i = 0; i < g.rows; ++i) {
    for (std::size_t j = 0; j < g.cols; ++j) m[i][j] = g(i, j).value();
  }
  return m;
}

/// Reduced row echelon form, in place; returns the rank.
inline std::size_t rref(ModMatrix& m) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    const std::uint64_t inv = invmod(m[r][c]);
    for (auto& v : m[r]) v = mulmod(v, inv);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || m[i][c] == 0) continue;
      const std::uint64_t f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] = submod(m[i][j], mulmod(f, m[r][j]));
    }
    ++r;
  }
  return r;
}

inline std::size_t rank(ModMatrix m) { return rref(m); }

/// Decodable iff the observations can be combined to cancel all interference and
/// still leave |desired| independent functions of the desired symbols:
/// with N a basis of the left null space of G_int, rank(N G_desired) = |desired|.
inline bool decodable(const ModMatrix& g, const std::vector<std::size_t>& desired) {
  const std::size_t rows = g.size();
  if (rows == 0) return desired.empty();
  const std::size_t cols = g[0].size();
  std::vector<std::size_t> other;
  for (std::size_t c = 0; c < cols; ++c) {
    if (std::find(desired.begin(), desired.end(), c) == desired.end()) other.push_back(c);
  }
  // Left null space of G_int = null space of G_int^T.
  ModMatrix t(other.size(), std::vector<std::uint64_t>(rows));
  for (std::size_t j = 0; j < other.size(); ++j) {
    for (std::size_t i = 0; i < rows; ++i) t[j][i] = g[i][other[j]];
  }
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  if (!t.empty()) {
    r = rref(t);
    for (std::size_t i = 0; i < r; ++i) {
      std::size_t c = 0;
      while (t[i][c] == 0) ++c;
      pivots.push_back(c);
    }
  }
  ModMatrix basis;
  for (std::size_t f = 0; f < rows; ++f) {
    if (std::find(pivots.begin(), pivots.end(), f) != pivots.end()) continue;
    std::vector<std::uint64_t> w(rows, 0);
    w[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) w[pivots[i]] = submod(0, t[i][f]);
    basis.push_back(w);
  }
  ModMatrix ng(basis.size(), std::vector<std::uint64_t>(desired.size(), 0));
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (std::size_t j = 0; j < desired.size(); ++j) {
      std::uint64_t s = 0;
      for (std::size_t i = 0; i < rows; ++i) s = addmod(s, mulmod(basis[k][i], g[i][desired[j]]));
      ng[k][j] = s;
    }
  }
  return rank(ng) == desired.size();
}

/// Small random rational with numerator in [-n, n] and denominator in [1, d].
inline Rational small_rational(std::mt19937_64& rng, int n, int d) {
  std::uniform_int_distribution<int> num(-n, n);
  std::uniform_int_distribution<int> den(1, d);
  return q(num(rng), den(rng));
}

}  // namespace oracle
