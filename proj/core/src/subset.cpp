#include "doflab/subset.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#include "doflab/error.hpp"

namespace doflab {
namespace {

void check_user(int user) {
  if (user < 1 || user > kMaxUsers) {
    throw ParameterError("user index " + std::to_string(user) + " outside 1.." + std::to_string(kMaxUsers));
  }
}

void check_users(int users) {
  if (users < 1 || users > kMaxUsers) {
    throw ParameterError("user count " + std::to_string(users) + " outside 1.." + std::to_string(kMaxUsers));
  }
}

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

}  // namespace

UserSubset UserSubset::of(std::initializer_list<int> users) {
  std::uint32_t mask = 0;
  for (int u : users) {
    check_user(u);
    mask |= 1u << (u - 1);
  }
  return UserSubset(mask);
}

UserSubset UserSubset::of(const std::vector<int>& users) {
  std::uint32_t mask = 0;
  for (int u : users) {
    check_user(u);
    mask |= 1u << (u - 1);
  }
  return UserSubset(mask);
}

UserSubset UserSubset::prefix(int n) { return range(1, n); }

UserSubset UserSubset::range(int first, int last) {
  std::uint32_t mask = 0;
  for (int u = first; u <= last; ++u) {
    check_user(u);
    mask |= 1u << (u - 1);
  }
  return UserSubset(mask);
}

int UserSubset::size() const noexcept { return std::popcount(mask_); }

bool UserSubset::contains(int user) const noexcept {
  return user >= 1 && user <= 32 && (mask_ >> (user - 1)) & 1u;
}

int UserSubset::max_member() const noexcept { return mask_ == 0 ? 0 : 32 - std::countl_zero(mask_); }

std::vector<int> UserSubset::members() const {
  std::vector<int> out;
  for (int u = 1; u <= 32; ++u) {
    if (contains(u)) out.push_back(u);
  }
  return out;
}

UserSubset UserSubset::with(int user) const {
  check_user(user);
  return UserSubset(mask_ | (1u << (user - 1)));
}

UserSubset UserSubset::without(int user) const {
  check_user(user);
  return UserSubset(mask_ & ~(1u << (user - 1)));
}

std::string UserSubset::digits() const {
  const auto m = members();
  const bool dotted = !m.empty() && m.back() > 9;
  std::string out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (dotted && i > 0) out += '.';
    out += std::to_string(m[i]);
  }
  return out;
}

UserSubset UserSubset::parse(std::string_view text) {
  std::string_view body = text;
  if (body.starts_with("d_")) body.remove_prefix(2);
  if (body.empty()) throw ParameterError("empty subset label '" + std::string(text) + "'");

  std::vector<int> users;
  if (body.find('.') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= body.size()) {
      auto dot = body.find('.', start);
      auto piece = body.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
      if (piece.empty()) throw ParameterError("malformed subset label '" + std::string(text) + "'");
      int value = 0;
      for (char c : piece) {
        if (!std::isdigit(static_cast<unsigned char>(c)) || value > 100) {
          throw ParameterError("malformed subset label '" + std::string(text) + "'");
        }
        value = value * 10 + (c - '0');
      }
      users.push_back(value);
      if (dot == std::string_view::npos) break;
      start = dot + 1;
    }
  } else {
    for (char c : body) {
      if (!std::isdigit(static_cast<unsigned char>(c)) || c == '0') {
        throw ParameterError("malformed subset label '" + std::string(text) + "'");
      }
      users.push_back(c - '0');
    }
  }
  std::vector<int> sorted = users;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ParameterError("repeated user in subset label '" + std::string(text) + "'");
  }
  return of(users);
}

std::strong_ordering operator<=>(UserSubset a, UserSubset b) noexcept {
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  return a.mask_ <=> b.mask_;
}

std::vector<UserSubset> canonical_subsets(int users) {
  check_users(users);
  std::vector<UserSubset> out;
  out.reserve((std::size_t{1} << users) - 1);
  for (int card = 1; card <= users; ++card) {
    for (std::uint32_t mask = 1; mask < (1u << users); ++mask) {
      if (std::popcount(mask) == card) out.push_back(UserSubset::from_mask(mask));
    }
  }
  return out;
}

std::size_t subset_index(UserSubset subset, int users) {
  check_users(users);
  if (subset.empty() || subset.max_member() > users) {
    throw ParameterError("subset {" + subset.digits() + "} is not a nonempty subset of 1.." + std::to_string(users));
  }
  const int card = subset.size();
  std::size_t index = 0;
  for (int j = 1; j < card; ++j) index += binomial(users, j);
  // Rank among same-cardinality masks in ascending numeric order (combinatorial number system).
  int i = 1;
  for (int bit = 0; bit < users; ++bit) {
    if ((subset.mask() >> bit) & 1u) {
      index += binomial(bit, i);
      ++i;
    }
  }
  return index;
}

UserSubset subset_at(std::size_t index, int users) {
  check_users(users);
  const std::size_t total = (std::size_t{1} << users) - 1;
  if (index >= total) throw ParameterError("subset index " + std::to_string(index) + " out of range");
  int card = 1;
  while (index >= binomial(users, card)) {
    index -= binomial(users, card);
    ++card;
  }
  std::uint32_t mask = 0;
  for (int i = card; i >= 1; --i) {
    int c = i - 1;
    while (binomial(c + 1, i) <= index) ++c;
    index -= binomial(c, i);
    mask |= 1u << c;
  }
  return UserSubset::from_mask(mask);
}

std::vector<std::vector<int>> permutations_of(std::vector<int> members) {
  std::sort(members.begin(), members.end());
  std::vector<std::vector<int>> out;
  do {
    out.push_back(members);
  } while (std::next_permutation(members.begin(), members.end()));
  return out;
}

}  // namespace doflab
