#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "doflab/bounds.hpp"
#include "doflab/dof_point.hpp"
#include "doflab/lp.hpp"
#include "doflab/rational.hpp"
#include "doflab/subset.hpp"

namespace doflab {

/// Left side and bound of one row, both in the row's display scaling.
struct RowValue {
  Rational lhs;
  Rational bound;
};

/// Exact classification of a point against every row; indices refer to the
/// inequality list the verdict was computed from.
struct MembershipVerdict {
  bool feasible = true;
  std::vector<std::size_t> tight;
  std::vector<std::size_t> violated;
  std::vector<RowValue> values;
};

/// Symbols still owed per message class, and the slots left to deliver them.
struct ResidualDemand {
  std::map<UserSubset, std::int64_t> cardinalities;
  std::int64_t slots = 0;
};

struct Optimum {
  Rational value;
  DofPoint argpoint;
};

/// Throws DimensionError if the point has a nonzero entry outside the region's variables.
MembershipVerdict contains(const Region& region, const DofPoint& point);

/// Substitutes fixed values and drops those variables. Rows that become 0 <= c
/// are dropped and parallel rows keep only the tightest bound. Throws
/// EmptyRegionError if some row becomes 0 <= c with c < 0.
Region slice(const Region& region, const std::map<UserSubset, Rational>& fixes);

/// Exact vertex set by hyperplane-subset intersection, sorted lexicographically
/// over the region's variable order. Dimension must be at most 4 and
/// C(rows, dimension) at most 10^6, otherwise CapabilityError.
std::vector<DofPoint> vertices(const Region& region);

/// Exact LP optimum; the argpoint is the lexicographically smallest optimal vertex.
Optimum maximize(const Region& region, const std::map<UserSubset, Rational>& weights);

/// Evaluates each outer-bound row with d_S replaced by the owed symbol counts
/// and the right side scaled by the slot budget.
MembershipVerdict extension_feasibility(int users, int perfect_users, const ResidualDemand& demand);

/// Removes every row implied by the others (exact LP test per row, in order).
Region remove_redundant(const Region& region);

/// Dense A x <= b over region.variables().
lp::Problem to_problem(const Region& region);

}  // namespace doflab
