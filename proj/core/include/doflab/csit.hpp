#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace doflab {

enum class CsitState { Perfect, Delayed, None };

char csit_code(CsitState s) noexcept;
/// 'P', 'D' or 'N'; throws ParameterError otherwise.
CsitState csit_from_code(char c);

/// Per-slot, per-receiver CSIT state. Slots and users are 1-based in the accessors.
class CsitConfig {
 public:
  CsitConfig(int users, int slots, std::vector<CsitState> row_major);

  /// Static hybrid model: users 1..K_P perfect, the rest delayed, in every slot.
  static CsitConfig hybrid(int users, int perfect_users, int slots);

  int users() const noexcept { return users_; }
  int slots() const noexcept { return slots_; }
  CsitState at(int slot, int user) const;

  /// True when every slot shares one row of the form P..P D..D.
  bool is_static_hybrid() const;
  /// Number of leading perfect users when is_static_hybrid().
  int perfect_users() const;

  friend bool operator==(const CsitConfig&, const CsitConfig&) = default;

 private:
  int users_;
  int slots_;
  std::vector<CsitState> states_;
};

}  // namespace doflab
