#include "doflab/lp.hpp"

#include <optional>

#include "doflab/error.hpp"

namespace doflab::lp {
namespace {

// Canonical-form tableau: rows are B^-1 [A | b], basis[i] names the basic column of row i.
class Tableau {
 public:
  Tableau(std::vector<std::vector<Rational>> rows, std::vector<std::size_t> basis, std::size_t columns)
      : t_(std::move(rows)), basis_(std::move(basis)), columns_(columns), allowed_(columns, true) {}

  void forbid(std::size_t column) { allowed_[column] = false; }
  std::size_t rows() const { return t_.size(); }
  std::size_t basic(std::size_t row) const { return basis_[row]; }
  const Rational& rhs(std::size_t row) const { return t_[row][columns_]; }
  const Rational& at(std::size_t row, std::size_t col) const { return t_[row][col]; }

  // Maximizes c.y over the current basis; returns false when unbounded.
  bool optimize(const std::vector<Rational>& c) {
    while (true) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < columns_ && !entering; ++j) {
        if (!allowed_[j] || is_basic(j)) continue;
        Rational reduced = c[j];
        for (std::size_t i = 0; i < t_.size(); ++i) {
          if (!t_[i][j].is_zero() && !c[basis_[i]].is_zero()) reduced -= c[basis_[i]] * t_[i][j];
        }
        if (reduced.sign() > 0) entering = j;
      }
      if (!entering) return true;

      std::optional<std::size_t> leaving;
      Rational best_ratio;
      for (std::size_t i = 0; i < t_.size(); ++i) {
        if (t_[i][*entering].sign() <= 0) continue;
        Rational ratio = t_[i][columns_] / t_[i][*entering];
        if (!leaving || ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[*leaving])) {
          leaving = i;
          best_ratio = std::move(ratio);
        }
      }
      if (!leaving) return false;
      pivot(*leaving, *entering);
    }
  }

  Rational objective_value(const std::vector<Rational>& c) const {
    Rational v;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (!c[basis_[i]].is_zero()) v += c[basis_[i]] * t_[i][columns_];
    }
    return v;
  }

  void pivot(std::size_t row, std::size_t col) {
    const Rational p = t_[row][col];
    for (auto& v : t_[row]) {
      if (!v.is_zero()) v /= p;
    }
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (i == row || t_[i][col].is_zero()) continue;
      const Rational f = t_[i][col];
      for (std::size_t j = 0; j <= columns_; ++j) {
        if (!t_[row][j].is_zero()) t_[i][j] -= f * t_[row][j];
      }
    }
    basis_[row] = col;
  }

  void drop_row(std::size_t row) {
    t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(row));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
  }

  std::vector<Rational> solution() const {
    std::vector<Rational> y(columns_);
    for (std::size_t i = 0; i < t_.size(); ++i) y[basis_[i]] = t_[i][columns_];
    return y;
  }

 private:
  bool is_basic(std::size_t j) const {
    for (auto b : basis_) {
      if (b == j) return true;
    }
    return false;
  }

  std::vector<std::vector<Rational>> t_;
  std::vector<std::size_t> basis_;
  std::size_t columns_;
  std::vector<bool> allowed_;
};

}  // namespace

Result maximize(const Problem& problem, const std::vector<Rational>& objective) {
  const std::size_t n = problem.variables;
  const std::size_t m = problem.rows.size();
  if (objective.size() != n) throw InternalError("objective length does not match variable count");

  std::size_t artificials = 0;
  for (const auto& b : problem.rhs) {
    if (b.sign() < 0) ++artificials;
  }
  // Columns: x+ (n), x- (n), slack (m), artificial.
  const std::size_t cols = 2 * n + m + artificials;
  std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(cols + 1));
  std::vector<std::size_t> basis(m);
  std::size_t next_art = 2 * n + m;
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = problem.rhs[i].sign() < 0;
    const Rational s = flip ? Rational(-1) : Rational(1);
    for (std::size_t j = 0; j < n; ++j) {
      rows[i][j] = s * problem.rows[i][j];
      rows[i][n + j] = -rows[i][j];
    }
    rows[i][2 * n + i] = s;
    rows[i][cols] = s * problem.rhs[i];
    if (flip) {
      rows[i][next_art] = Rational(1);
      basis[i] = next_art++;
    } else {
      basis[i] = 2 * n + i;
    }
  }

  Tableau tab(std::move(rows), std::move(basis), cols);
  if (artificials > 0) {
    std::vector<Rational> phase1(cols);
    for (std::size_t j = 2 * n + m; j < cols; ++j) phase1[j] = Rational(-1);
    tab.optimize(phase1);
    if (tab.objective_value(phase1).sign() < 0) return Result{Status::Infeasible, {}, {}};
    // Pivot remaining (zero-valued) artificials out of the basis, or drop their rows.
    for (std::size_t i = tab.rows(); i-- > 0;) {
      if (tab.basic(i) < 2 * n + m) continue;
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < 2 * n + m && !col; ++j) {
        if (!tab.at(i, j).is_zero()) col = j;
      }
      if (col) {
        tab.pivot(i, *col);
      } else {
        tab.drop_row(i);
      }
    }
    for (std::size_t j = 2 * n + m; j < cols; ++j) tab.forbid(j);
  }

  std::vector<Rational> c(cols);
  for (std::size_t j = 0; j < n; ++j) {
    c[j] = objective[j];
    c[n + j] = -objective[j];
  }
  if (!tab.optimize(c)) return Result{Status::Unbounded, {}, {}};

  const auto y = tab.solution();
  Result r;
  r.status = Status::Optimal;
  r.value = tab.objective_value(c);
  r.x.resize(n);
  for (std::size_t j = 0; j < n; ++j) r.x[j] = y[j] - y[n + j];
  return r;
}

std::vector<Rational> lexmin_on_face(const Problem& problem, const std::vector<Rational>& objective,
                                     const Rational& value) {
  Problem face = problem;
  std::vector<Rational> neg(objective.size());
  for (std::size_t j = 0; j < objective.size(); ++j) neg[j] = -objective[j];
  face.add_row(objective, value);
  face.add_row(neg, -value);

  std::vector<Rational> x(problem.variables);
  for (std::size_t j = 0; j < problem.variables; ++j) {
    std::vector<Rational> c(problem.variables);
    c[j] = Rational(-1);
    const auto r = maximize(face, c);
    if (r.status != Status::Optimal) throw InternalError("lexicographic refinement failed on optimal face");
    x[j] = -r.value;
    std::vector<Rational> e(problem.variables);
    e[j] = Rational(1);
    face.add_row(e, x[j]);
    e[j] = Rational(-1);
    face.add_row(e, -x[j]);
  }
  return x;
}

bool solve_square(std::vector<std::vector<Rational>> m, std::vector<Rational> v, std::vector<Rational>& x) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col].is_zero()) ++piv;
    if (piv == n) return false;
    std::swap(m[piv], m[col]);
    std::swap(v[piv], v[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col].is_zero()) continue;
      const Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) {
        if (!m[col][c].is_zero()) m[r][c] -= f * m[col][c];
      }
      v[r] -= f * v[col];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = v[i] / m[i][i];
  return true;
}

}  // namespace doflab::lp
