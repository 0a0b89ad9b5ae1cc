#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace doflab {

inline constexpr int kMaxUsers = 16;

/// Set of receivers drawn from {1..K}, stored as a bitmask (bit i-1 <=> user i).
///
/// Ordering is the canonical variable order: cardinality first, then mask.
class UserSubset {
 public:
  constexpr UserSubset() = default;
  static constexpr UserSubset from_mask(std::uint32_t mask) { return UserSubset(mask); }
  static UserSubset of(std::initializer_list<int> users);
  static UserSubset of(const std::vector<int>& users);
  /// {1..n}; empty for n == 0.
  static UserSubset prefix(int n);
  /// {first..last}; empty when first > last.
  static UserSubset range(int first, int last);

  constexpr std::uint32_t mask() const noexcept { return mask_; }
  constexpr bool empty() const noexcept { return mask_ == 0; }
  int size() const noexcept;
  bool contains(int user) const noexcept;
  bool subset_of(UserSubset other) const noexcept { return (mask_ & ~other.mask_) == 0; }
  /// Largest member, 0 for the empty set.
  int max_member() const noexcept;
  std::vector<int> members() const;

  UserSubset with(int user) const;
  UserSubset without(int user) const;
  UserSubset operator|(UserSubset o) const noexcept { return UserSubset(mask_ | o.mask_); }
  UserSubset operator&(UserSubset o) const noexcept { return UserSubset(mask_ & o.mask_); }
  /// Set difference.
  UserSubset operator-(UserSubset o) const noexcept { return UserSubset(mask_ & ~o.mask_); }

  /// Member digits, e.g. "123"; dot-separated ("1.10") once any member exceeds 9.
  std::string digits() const;
  /// Variable label, e.g. "d_13".
  std::string label() const { return "d_" + digits(); }
  /// Inverse of label()/digits(); accepts both "d_13" and "13".
  static UserSubset parse(std::string_view text);

  friend constexpr bool operator==(UserSubset a, UserSubset b) noexcept { return a.mask_ == b.mask_; }
  friend std::strong_ordering operator<=>(UserSubset a, UserSubset b) noexcept;

 private:
  constexpr explicit UserSubset(std::uint32_t mask) : mask_(mask) {}
  std::uint32_t mask_ = 0;
};

/// All 2^K - 1 nonempty subsets of {1..K}, by (cardinality, mask). Requires 1 <= K <= 16.
std::vector<UserSubset> canonical_subsets(int users);

/// Position of a nonempty subset in canonical_subsets(users).
std::size_t subset_index(UserSubset subset, int users);
UserSubset subset_at(std::size_t index, int users);

/// Permutations of the given members in lexicographic order.
std::vector<std::vector<int>> permutations_of(std::vector<int> members);

}  // namespace doflab
