#pragma once

#include <vector>

#include "doflab/rational.hpp"

namespace doflab::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
  Status status = Status::Infeasible;
  Rational value;
  std::vector<Rational> x;
};

/// Dense halfspace system A x <= b over free variables.
struct Problem {
  std::size_t variables = 0;
  std::vector<std::vector<Rational>> rows;  // each of length `variables`
  std::vector<Rational> rhs;

  void add_row(std::vector<Rational> a, Rational b) {
    rows.push_back(std::move(a));
    rhs.push_back(std::move(b));
  }
};

/// max objective . x subject to problem; exact two-phase simplex with Bland's rule.
Result maximize(const Problem& problem, const std::vector<Rational>& objective);

/// Lexicographically smallest point of { x : A x <= b, objective . x = value }.
/// Requires that face to be nonempty and bounded below in every coordinate.
std::vector<Rational> lexmin_on_face(const Problem& problem, const std::vector<Rational>& objective,
                                     const Rational& value);

/// Solves the square system M x = v exactly; returns false when M is singular.
bool solve_square(std::vector<std::vector<Rational>> m, std::vector<Rational> v, std::vector<Rational>& x);

}  // namespace doflab::lp
