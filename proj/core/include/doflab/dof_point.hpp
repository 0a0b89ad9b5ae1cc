#pragma once

#include <map>
#include <string>
#include <vector>

#include "doflab/rational.hpp"
#include "doflab/subset.hpp"

namespace doflab {

/// Multiple-order DoF tuple: one nonnegative rational per message subset.
/// Subsets without an entry are zero; zeros are never stored, so equality
/// does not depend on how the point was built.
class DofPoint {
 public:
  explicit DofPoint(int users);

  /// Order-1 point (d_1, ..., d_K).
  static DofPoint private_tuple(const std::vector<Rational>& values);

  int users() const noexcept { return users_; }
  const std::map<UserSubset, Rational>& values() const noexcept { return values_; }

  Rational get(UserSubset subset) const;
  /// Throws ParameterError for negative values or subsets outside {1..K}.
  void set(UserSubset subset, const Rational& value);

  Rational sum() const;

  /// "(1, 1/3, 1/3)" over the given variable order.
  std::string str(const std::vector<UserSubset>& order) const;
  /// "d_1=1,d_2=1/3" over stored entries.
  std::string str() const;

  friend bool operator==(const DofPoint&, const DofPoint&) = default;

 private:
  int users_;
  std::map<UserSubset, Rational> values_;
};

}  // namespace doflab
