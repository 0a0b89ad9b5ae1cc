#include "doflab/dof_point.hpp"

#include "doflab/error.hpp"

namespace doflab {

DofPoint::DofPoint(int users) : users_(users) {
  if (users < 1 || users > kMaxUsers) throw ParameterError("user count out of range");
}

DofPoint DofPoint::private_tuple(const std::vector<Rational>& values) {
  DofPoint p(static_cast<int>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) {
    p.set(UserSubset::of({static_cast<int>(i) + 1}), values[i]);
  }
  return p;
}

Rational DofPoint::get(UserSubset subset) const {
  auto it = values_.find(subset);
  return it == values_.end() ? Rational() : it->second;
}

void DofPoint::set(UserSubset subset, const Rational& value) {
  if (subset.empty() || subset.max_member() > users_) {
    throw ParameterError("subset {" + subset.digits() + "} outside 1.." + std::to_string(users_));
  }
  if (value.sign() < 0) throw ParameterError("negative DoF value for " + subset.label());
  if (value.is_zero()) {
    values_.erase(subset);
  } else {
    values_[subset] = value;
  }
}

Rational DofPoint::sum() const {
  Rational total;
  for (const auto& [s, v] : values_) total += v;
  return total;
}

std::string DofPoint::str(const std::vector<UserSubset>& order) const {
  std::string out = "(";
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0) out += ", ";
    out += get(order[i]).str();
  }
  return out + ")";
}

std::string DofPoint::str() const {
  std::string out;
  for (const auto& [s, v] : values_) {
    if (!out.empty()) out += ',';
    out += s.label() + "=" + v.str();
  }
  return out;
}

}  // namespace doflab
