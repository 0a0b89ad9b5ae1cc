#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "doflab/dof_point.hpp"
#include "doflab/rational.hpp"
#include "doflab/subset.hpp"

namespace doflab {

/// One member of the hybrid-CSIT outer-bound family: the delayed-CSIT subset E_D
/// and the orderings of E_P and E_D that fix the degraded chain.
struct Theorem1Origin {
  UserSubset delayed_set;
  std::vector<int> perfect_order;
  std::vector<int> delayed_order;
  friend bool operator==(const Theorem1Origin&, const Theorem1Origin&) = default;
};

/// d_S <= 1.
struct BoxOrigin {
  UserSubset subset;
  friend bool operator==(const BoxOrigin&, const BoxOrigin&) = default;
};

/// d_S >= 0, stored as -d_S <= 0.
struct NonnegOrigin {
  UserSubset subset;
  friend bool operator==(const NonnegOrigin&, const NonnegOrigin&) = default;
};

/// Row supplied by a caller rather than generated.
struct ManualOrigin {
  std::string note;
  friend bool operator==(const ManualOrigin&, const ManualOrigin&) = default;
};

using Provenance = std::variant<Theorem1Origin, BoxOrigin, NonnegOrigin, ManualOrigin>;

/// Short machine-friendly tag, e.g. "T1[E_D=23;pi_P=1;pi_D=2,3]", "box[d_12]".
std::string describe(const Provenance& origin);

using Coefficients = std::map<UserSubset, Rational>;

/// Halfspace sum_S a_S d_S <= b in canonical form: the coefficients, cleared of
/// denominators, are coprime integers (a positive rescaling of the input row).
class Inequality {
 public:
  Inequality(int users, const Coefficients& coefficients, const Rational& rhs, Provenance origin);

  int users() const noexcept { return users_; }
  const Coefficients& coefficients() const noexcept { return coefficients_; }
  const Rational& rhs() const noexcept { return rhs_; }
  const Provenance& origin() const noexcept { return origin_; }

  Rational coefficient(UserSubset subset) const;
  /// Left-hand side in canonical scaling.
  Rational evaluate(const DofPoint& point) const;
  /// No nonzero coefficients (the row is 0 <= rhs).
  bool is_trivial() const noexcept { return coefficients_.empty(); }

  /// Same halfspace rescaled so the largest |coefficient| is 1; for generated
  /// outer-bound rows this is the familiar "... <= 1" form. Trivial rows are
  /// returned unscaled.
  std::pair<Coefficients, Rational> display_form() const;
  /// Display-form text, e.g. "1/2 d_1 + d_12 + d_2 <= 1".
  std::string str() const;

  /// Identity of the halfspace, ignoring provenance.
  bool same_halfspace(const Inequality& other) const {
    return coefficients_ == other.coefficients_ && rhs_ == other.rhs_;
  }
  bool parallel_to(const Inequality& other) const { return coefficients_ == other.coefficients_; }

 private:
  int users_;
  Coefficients coefficients_;
  Rational rhs_;
  Provenance origin_;
};

/// Drops rows that repeat an earlier halfspace; first occurrence wins.
std::vector<Inequality> deduplicate(const std::vector<Inequality>& rows);

/// Among rows with identical coefficients keeps only the tightest right-hand side.
std::vector<Inequality> merge_parallel(const std::vector<Inequality>& rows);

/// A set of halfspaces over an ordered list of DoF variables.
class Region {
 public:
  /// Deduplicates rows; throws DimensionError if a row references an unlisted variable.
  Region(int users, std::vector<UserSubset> variables, std::vector<Inequality> rows);

  int users() const noexcept { return users_; }
  const std::vector<UserSubset>& variables() const noexcept { return variables_; }
  const std::vector<Inequality>& inequalities() const noexcept { return rows_; }
  std::size_t dimension() const noexcept { return variables_.size(); }
  bool has_variable(UserSubset subset) const;

  /// "#<index> <provenance>"; stable across runs.
  std::string row_id(std::size_t index) const;

  /// Returns a copy with extra rows appended (then deduplicated).
  Region with_rows(const std::vector<Inequality>& extra) const;

 private:
  int users_;
  std::vector<UserSubset> variables_;
  std::vector<Inequality> rows_;
};

/// Every outer-bound row for K users of which the first K_P have perfect CSIT,
/// over all nonempty E_D in {K_P+1..K} and all orderings of E_P and E_D.
/// Deduplicated; order is (E_D mask, pi_P, pi_D) lexicographic. Empty when K_P == K.
std::vector<Inequality> theorem1_inequalities(int users, int perfect_users);

/// Outer-bound rows plus 0 <= d_S <= 1 for every nonempty S.
Region full_region(int users, int perfect_users);

/// Sets all multi-receiver variables to zero and drops them.
Region restrict_private(const Region& region);

/// Upper bound on the enumeration size before any row is generated.
std::size_t theorem1_row_budget(int users, int perfect_users);

/// One row per inequality; columns are the region's variable labels, "rhs", "provenance".
std::string region_csv(const Region& region);

}  // namespace doflab
