#include "doflab/bounds.hpp"

#include <algorithm>
#include <sstream>

#include "doflab/error.hpp"

namespace doflab {
namespace {

// Past this many generated rows the enumeration is refused instead of run.
constexpr std::size_t kMaxTheorem1Rows = 2'000'000;

void check_params(int users, int perfect_users) {
  if (users < 1 || users > kMaxUsers) {
    throw ParameterError("user count " + std::to_string(users) + " outside 1.." + std::to_string(kMaxUsers));
  }
  if (perfect_users < 0 || perfect_users > users) {
    throw ParameterError("perfect-CSIT user count " + std::to_string(perfect_users) + " outside 0.." +
                         std::to_string(users));
  }
}

std::string join(const std::vector<int>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out += sep;
    out += std::to_string(v[i]);
  }
  return out;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Adds `weight` to every S with must <= S <= within.
void add_submasks(Coefficients& coeffs, UserSubset within, int must, const Rational& weight) {
  const UserSubset rest = within.without(must);
  const UserSubset anchor = UserSubset::of({must});
  const std::uint32_t full = rest.mask();
  std::uint32_t sub = full;
  while (true) {
    coeffs[UserSubset::from_mask(sub) | anchor] += weight;
    if (sub == 0) break;
    sub = (sub - 1) & full;
  }
}

}  // namespace

std::string describe(const Provenance& origin) {
  struct Visitor {
    std::string operator()(const Theorem1Origin& o) const {
      return "T1[E_D=" + o.delayed_set.digits() + ";pi_P=" + join(o.perfect_order, ",") +
             ";pi_D=" + join(o.delayed_order, ",") + "]";
    }
    std::string operator()(const BoxOrigin& o) const { return "box[" + o.subset.label() + "]"; }
    std::string operator()(const NonnegOrigin& o) const { return "nonneg[" + o.subset.label() + "]"; }
    std::string operator()(const ManualOrigin& o) const { return "manual[" + o.note + "]"; }
  };
  return std::visit(Visitor{}, origin);
}

Inequality::Inequality(int users, const Coefficients& coefficients, const Rational& rhs, Provenance origin)
    : users_(users), rhs_(rhs), origin_(std::move(origin)) {
  if (users < 1 || users > kMaxUsers) throw ParameterError("user count out of range");
  for (const auto& [s, a] : coefficients) {
    if (s.empty() || s.max_member() > users) {
      throw DimensionError("coefficient on {" + s.digits() + "} outside 1.." + std::to_string(users));
    }
    if (!a.is_zero()) coefficients_.emplace(s, a);
  }
  if (coefficients_.empty()) {
    rhs_ = Rational(rhs_.sign());
    return;
  }
  BigInt den_lcm = 1;
  for (const auto& [s, a] : coefficients_) den_lcm = lcm(den_lcm, a.den());
  BigInt num_gcd = 0;
  for (const auto& [s, a] : coefficients_) num_gcd = gcd(num_gcd, a.num() * (den_lcm / a.den()));
  const Rational scale(den_lcm, num_gcd);
  for (auto& [s, a] : coefficients_) a *= scale;
  rhs_ *= scale;
}

Rational Inequality::coefficient(UserSubset subset) const {
  auto it = coefficients_.find(subset);
  return it == coefficients_.end() ? Rational() : it->second;
}

Rational Inequality::evaluate(const DofPoint& point) const {
  Rational total;
  for (const auto& [s, a] : coefficients_) {
    const Rational v = point.get(s);
    if (!v.is_zero()) total += a * v;
  }
  return total;
}

std::pair<Coefficients, Rational> Inequality::display_form() const {
  if (coefficients_.empty()) return {coefficients_, rhs_};
  Rational largest;
  for (const auto& [s, a] : coefficients_) largest = std::max(largest, a.abs());
  Coefficients out;
  for (const auto& [s, a] : coefficients_) out.emplace(s, a / largest);
  return {out, rhs_ / largest};
}

std::string Inequality::str() const {
  const auto [coeffs, rhs] = display_form();
  std::string out;
  for (const auto& [s, a] : coeffs) {
    const bool negative = a.sign() < 0;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    const Rational mag = a.abs();
    if (mag != Rational(1)) out += mag.str() + " ";
    out += s.label();
  }
  if (out.empty()) out = "0";
  return out + " <= " + rhs.str();
}

std::vector<Inequality> deduplicate(const std::vector<Inequality>& rows) {
  std::vector<Inequality> out;
  out.reserve(rows.size());
  for (const auto& row : rows) {
    const bool seen = std::any_of(out.begin(), out.end(), [&](const Inequality& k) { return k.same_halfspace(row); });
    if (!seen) out.push_back(row);
  }
  return out;
}

std::vector<Inequality> merge_parallel(const std::vector<Inequality>& rows) {
  std::vector<bool> keep(rows.size(), true);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size() && keep[i]; ++j) {
      if (i == j || !rows[i].parallel_to(rows[j])) continue;
      // j dominates i if strictly tighter, or equally tight and earlier.
      if (rows[j].rhs() < rows[i].rhs() || (rows[j].rhs() == rows[i].rhs() && j < i)) keep[i] = false;
    }
  }
  std::vector<Inequality> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (keep[i]) out.push_back(rows[i]);
  }
  return out;
}

Region::Region(int users, std::vector<UserSubset> variables, std::vector<Inequality> rows)
    : users_(users), variables_(std::move(variables)), rows_(deduplicate(rows)) {
  if (users < 1 || users > kMaxUsers) throw ParameterError("user count out of range");
  for (const auto& v : variables_) {
    if (v.empty() || v.max_member() > users) throw DimensionError("variable {" + v.digits() + "} outside 1..K");
  }
  for (const auto& row : rows_) {
    for (const auto& [s, a] : row.coefficients()) {
      if (!has_variable(s)) {
        throw DimensionError("row " + row.str() + " references " + s.label() + " which is not a region variable");
      }
    }
  }
}

bool Region::has_variable(UserSubset subset) const {
  return std::find(variables_.begin(), variables_.end(), subset) != variables_.end();
}

std::string Region::row_id(std::size_t index) const {
  return "#" + std::to_string(index) + " " + describe(rows_.at(index).origin());
}

Region Region::with_rows(const std::vector<Inequality>& extra) const {
  std::vector<Inequality> rows = rows_;
  rows.insert(rows.end(), extra.begin(), extra.end());
  return Region(users_, variables_, std::move(rows));
}

std::size_t theorem1_row_budget(int users, int perfect_users) {
  check_params(users, perfect_users);
  const int delayed = users - perfect_users;
  auto factorial = [](int n) {
    std::size_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::size_t>(i);
    return f;
  };
  // sum_{j=1..delayed} C(delayed, j) * j! * K_P!, saturating.
  std::size_t total = 0;
  std::size_t choose = 1;
  for (int j = 1; j <= delayed; ++j) {
    choose = choose * static_cast<std::size_t>(delayed - j + 1) / static_cast<std::size_t>(j);
    const double term = static_cast<double>(choose) * static_cast<double>(factorial(std::min(j, 20))) *
                        static_cast<double>(factorial(std::min(perfect_users, 20)));
    if (term > static_cast<double>(kMaxTheorem1Rows) * 4) return kMaxTheorem1Rows * 4;
    total += static_cast<std::size_t>(term);
  }
  return total;
}

std::vector<Inequality> theorem1_inequalities(int users, int perfect_users) {
  check_params(users, perfect_users);
  if (perfect_users == users) return {};
  if (theorem1_row_budget(users, perfect_users) > kMaxTheorem1Rows) {
    throw CapabilityError("outer-bound enumeration for K=" + std::to_string(users) +
                          ", K_P=" + std::to_string(perfect_users) + " exceeds the row budget");
  }

  const UserSubset perfect = UserSubset::prefix(perfect_users);
  const UserSubset delayed_pool = UserSubset::range(perfect_users + 1, users);
  std::vector<int> perfect_members = perfect.members();
  const auto perfect_orders = permutations_of(perfect_members);

  std::vector<Inequality> rows;
  for (std::uint32_t mask = 1; mask <= delayed_pool.mask(); ++mask) {
    if ((mask & ~delayed_pool.mask()) != 0) continue;
    const UserSubset delayed_set = UserSubset::from_mask(mask);
    const int nd = delayed_set.size();
    const auto delayed_orders = permutations_of(delayed_set.members());

    for (const auto& pi_p : perfect_orders) {
      for (const auto& pi_d : delayed_orders) {
        Coefficients coeffs;
        // Perfect-CSIT stage i: S within {pi_P(1..i)} containing pi_P(i).
        UserSubset prefix_p;
        for (int i = 1; i <= perfect_users; ++i) {
          prefix_p = prefix_p.with(pi_p[i - 1]);
          const Rational w(BigInt(1), BigInt(perfect_users + nd - i + 1));
          add_submasks(coeffs, prefix_p, pi_p[i - 1], w);
        }
        // Delayed-CSIT stage i: S within E_P u {pi_D(1..i)} containing pi_D(i).
        UserSubset prefix_d = perfect;
        for (int i = 1; i <= nd; ++i) {
          prefix_d = prefix_d.with(pi_d[i - 1]);
          const Rational w(BigInt(1), BigInt(nd - i + 1));
          add_submasks(coeffs, prefix_d, pi_d[i - 1], w);
        }
        rows.emplace_back(users, coeffs, Rational(1), Theorem1Origin{delayed_set, pi_p, pi_d});
      }
    }
  }
  return deduplicate(rows);
}

Region full_region(int users, int perfect_users) {
  check_params(users, perfect_users);
  auto rows = theorem1_inequalities(users, perfect_users);
  const auto vars = canonical_subsets(users);
  for (const auto& s : vars) rows.emplace_back(users, Coefficients{{s, Rational(1)}}, Rational(1), BoxOrigin{s});
  for (const auto& s : vars) rows.emplace_back(users, Coefficients{{s, Rational(-1)}}, Rational(0), NonnegOrigin{s});
  return Region(users, vars, std::move(rows));
}

Region restrict_private(const Region& region) {
  std::vector<UserSubset> vars;
  for (const auto& v : region.variables()) {
    if (v.size() == 1) vars.push_back(v);
  }
  std::vector<Inequality> rows;
  for (const auto& row : region.inequalities()) {
    Coefficients kept;
    for (const auto& [s, a] : row.coefficients()) {
      if (s.size() == 1) kept.emplace(s, a);
    }
    Inequality reduced(region.users(), kept, row.rhs(), row.origin());
    if (reduced.is_trivial()) {
      if (reduced.rhs().sign() < 0) throw EmptyRegionError("row " + row.str() + " is infeasible with d_S = 0 for |S| >= 2");
      continue;
    }
    rows.push_back(std::move(reduced));
  }
  return Region(region.users(), std::move(vars), std::move(rows));
}

std::string region_csv(const Region& region) {
  std::ostringstream os;
  for (const auto& v : region.variables()) os << v.label() << ',';
  os << "rhs,provenance\n";
  for (const auto& row : region.inequalities()) {
    const auto [coeffs, rhs] = row.display_form();
    for (const auto& v : region.variables()) {
      auto it = coeffs.find(v);
      os << (it == coeffs.end() ? std::string("0") : it->second.str()) << ',';
    }
    os << rhs.str() << ',' << csv_escape(describe(row.origin())) << '\n';
  }
  return os.str();
}

}  // namespace doflab
