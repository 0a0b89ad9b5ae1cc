#include "doflab/polytope.hpp"

#include <set>

#include "doflab/error.hpp"

namespace doflab {
namespace {

std::vector<Rational> dense_row(const Inequality& row, const std::vector<UserSubset>& vars) {
  std::vector<Rational> a(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) a[j] = row.coefficient(vars[j]);
  return a;
}

RowValue display_value(const Inequality& row, const Rational& canonical_lhs, const Rational& scale_rhs = Rational(1)) {
  Rational largest(1);
  if (!row.is_trivial()) {
    largest = Rational(0);
    for (const auto& [s, a] : row.coefficients()) largest = std::max(largest, a.abs());
  }
  return RowValue{canonical_lhs / largest, row.rhs() * scale_rhs / largest};
}

double binomial_estimate(std::size_t n, std::size_t k) {
  double r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

lp::Problem to_problem(const Region& region) {
  lp::Problem p;
  p.variables = region.dimension();
  for (const auto& row : region.inequalities()) p.add_row(dense_row(row, region.variables()), row.rhs());
  return p;
}

MembershipVerdict contains(const Region& region, const DofPoint& point) {
  for (const auto& [s, v] : point.values()) {
    if (!region.has_variable(s)) {
      throw DimensionError("point has nonzero " + s.label() + " which is not a region variable");
    }
  }
  MembershipVerdict verdict;
  const auto& rows = region.inequalities();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Rational lhs = rows[i].evaluate(point);
    verdict.values.push_back(display_value(rows[i], lhs));
    if (lhs == rows[i].rhs()) {
      verdict.tight.push_back(i);
    } else if (lhs > rows[i].rhs()) {
      verdict.violated.push_back(i);
    }
  }
  verdict.feasible = verdict.violated.empty();
  return verdict;
}

Region slice(const Region& region, const std::map<UserSubset, Rational>& fixes) {
  if (fixes.empty()) return region;
  for (const auto& [s, v] : fixes) {
    if (!region.has_variable(s)) throw DimensionError("cannot fix " + s.label() + ": not a region variable");
  }
  std::vector<UserSubset> vars;
  for (const auto& v : region.variables()) {
    if (!fixes.contains(v)) vars.push_back(v);
  }
  std::vector<Inequality> rows;
  for (const auto& row : region.inequalities()) {
    Coefficients free;
    Rational rhs = row.rhs();
    for (const auto& [s, a] : row.coefficients()) {
      auto it = fixes.find(s);
      if (it == fixes.end()) {
        free.emplace(s, a);
      } else {
        rhs -= a * it->second;
      }
    }
    Inequality reduced(region.users(), free, rhs, row.origin());
    if (reduced.is_trivial()) {
      if (reduced.rhs().sign() < 0) {
        throw EmptyRegionError("slice makes row " + row.str() + " (" + describe(row.origin()) + ") unsatisfiable");
      }
      continue;
    }
    rows.push_back(std::move(reduced));
  }
  return Region(region.users(), std::move(vars), merge_parallel(deduplicate(rows)));
}

std::vector<DofPoint> vertices(const Region& region) {
  const std::size_t dim = region.dimension();
  const auto& rows = region.inequalities();
  if (dim > 4) {
    throw CapabilityError("vertex enumeration supports at most 4 free variables, region has " + std::to_string(dim));
  }
  if (binomial_estimate(rows.size(), dim) > 1e6) {
    throw CapabilityError("vertex enumeration would examine more than 10^6 hyperplane subsets");
  }
  const auto& vars = region.variables();
  std::vector<std::vector<Rational>> dense;
  dense.reserve(rows.size());
  for (const auto& row : rows) dense.push_back(dense_row(row, vars));

  auto feasible = [&](const std::vector<Rational>& x) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Rational lhs;
      for (std::size_t j = 0; j < dim; ++j) {
        if (!dense[i][j].is_zero()) lhs += dense[i][j] * x[j];
      }
      if (lhs > rows[i].rhs()) return false;
    }
    return true;
  };

  std::set<std::vector<Rational>> found;
  if (dim == 0) {
    if (feasible({})) found.insert({});
  } else if (rows.size() >= dim) {
    std::vector<std::size_t> pick(dim);
    for (std::size_t i = 0; i < dim; ++i) pick[i] = i;
    while (true) {
      std::vector<std::vector<Rational>> m;
      std::vector<Rational> b;
      for (auto idx : pick) {
        m.push_back(dense[idx]);
        b.push_back(rows[idx].rhs());
      }
      std::vector<Rational> x;
      if (lp::solve_square(std::move(m), std::move(b), x) && feasible(x)) found.insert(std::move(x));

      // Next combination in lexicographic order.
      std::size_t k = dim;
      while (k > 0 && pick[k - 1] == rows.size() - dim + (k - 1)) --k;
      if (k == 0) break;
      ++pick[k - 1];
      for (std::size_t j = k; j < dim; ++j) pick[j] = pick[j - 1] + 1;
    }
  }

  std::vector<DofPoint> out;
  out.reserve(found.size());
  for (const auto& x : found) {
    DofPoint p(region.users());
    for (std::size_t j = 0; j < dim; ++j) p.set(vars[j], x[j]);
    out.push_back(std::move(p));
  }
  return out;
}

Optimum maximize(const Region& region, const std::map<UserSubset, Rational>& weights) {
  for (const auto& [s, w] : weights) {
    if (!w.is_zero() && !region.has_variable(s)) {
      throw DimensionError("weight on " + s.label() + " which is not a region variable");
    }
  }
  const auto& vars = region.variables();
  std::vector<Rational> c(vars.size());
  for (std::size_t j = 0; j < vars.size(); ++j) {
    auto it = weights.find(vars[j]);
    if (it != weights.end()) c[j] = it->second;
  }
  const auto problem = to_problem(region);
  const auto r = lp::maximize(problem, c);
  if (r.status == lp::Status::Infeasible) throw EmptyRegionError("region is empty");
  if (r.status == lp::Status::Unbounded) throw InternalError("objective is unbounded over the region");

  const auto x = lp::lexmin_on_face(problem, c, r.value);
  DofPoint arg(region.users());
  for (std::size_t j = 0; j < vars.size(); ++j) arg.set(vars[j], x[j]);
  return Optimum{r.value, std::move(arg)};
}

MembershipVerdict extension_feasibility(int users, int perfect_users, const ResidualDemand& demand) {
  if (demand.slots < 0) throw ParameterError("slot budget must be nonnegative");
  DofPoint counts(users);
  for (const auto& [s, n] : demand.cardinalities) {
    if (n < 0) throw ParameterError("negative symbol count for " + s.label());
    counts.set(s, Rational(n));
  }
  const auto rows = theorem1_inequalities(users, perfect_users);
  MembershipVerdict verdict;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto v = display_value(rows[i], rows[i].evaluate(counts), Rational(demand.slots));
    if (v.lhs == v.bound) {
      verdict.tight.push_back(i);
    } else if (v.lhs > v.bound) {
      verdict.violated.push_back(i);
    }
    verdict.values.push_back(v);
  }
  verdict.feasible = verdict.violated.empty();
  return verdict;
}

Region remove_redundant(const Region& region) {
  const auto& rows = region.inequalities();
  const auto& vars = region.variables();
  std::vector<bool> keep(rows.size(), true);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    lp::Problem others;
    others.variables = vars.size();
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j != i && keep[j]) others.add_row(dense_row(rows[j], vars), rows[j].rhs());
    }
    const auto r = lp::maximize(others, dense_row(rows[i], vars));
    if (r.status == lp::Status::Optimal && r.value <= rows[i].rhs()) keep[i] = false;
  }
  std::vector<Inequality> kept;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (keep[i]) kept.push_back(rows[i]);
  }
  return Region(region.users(), vars, std::move(kept));
}

}  // namespace doflab
