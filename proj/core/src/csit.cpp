#include "doflab/csit.hpp"

#include "doflab/error.hpp"
#include "doflab/subset.hpp"

namespace doflab {

char csit_code(CsitState s) noexcept {
  switch (s) {
    case CsitState::Perfect: return 'P';
    case CsitState::Delayed: return 'D';
    case CsitState::None: return 'N';
  }
  return '?';
}

CsitState csit_from_code(char c) {
  switch (c) {
    case 'P': return CsitState::Perfect;
    case 'D': return CsitState::Delayed;
    case 'N': return CsitState::None;
    default: throw ParameterError(std::string("unknown CSIT state '") + c + "'");
  }
}

CsitConfig::CsitConfig(int users, int slots, std::vector<CsitState> row_major)
    : users_(users), slots_(slots), states_(std::move(row_major)) {
  if (users < 1 || users > kMaxUsers) throw ParameterError("user count out of range");
  if (slots < 1) throw ParameterError("slot count must be positive");
  if (states_.size() != static_cast<std::size_t>(users) * static_cast<std::size_t>(slots)) {
    throw ParameterError("CSIT table does not cover every slot x user cell");
  }
}

CsitConfig CsitConfig::hybrid(int users, int perfect_users, int slots) {
  if (perfect_users < 0 || perfect_users > users) throw ParameterError("perfect-user count out of range");
  std::vector<CsitState> states;
  states.reserve(static_cast<std::size_t>(users * slots));
  for (int t = 0; t < slots; ++t) {
    for (int u = 1; u <= users; ++u) {
      states.push_back(u <= perfect_users ? CsitState::Perfect : CsitState::Delayed);
    }
  }
  return CsitConfig(users, slots, std::move(states));
}

CsitState CsitConfig::at(int slot, int user) const {
  if (slot < 1 || slot > slots_ || user < 1 || user > users_) {
    throw ParameterError("CSIT lookup (slot " + std::to_string(slot) + ", user " + std::to_string(user) +
                         ") out of range");
  }
  return states_[static_cast<std::size_t>((slot - 1) * users_ + (user - 1))];
}

bool CsitConfig::is_static_hybrid() const {
  int kp = perfect_users();
  for (int t = 1; t <= slots_; ++t) {
    for (int u = 1; u <= users_; ++u) {
      CsitState expected = u <= kp ? CsitState::Perfect : CsitState::Delayed;
      if (at(t, u) != expected) return false;
    }
  }
  return true;
}

int CsitConfig::perfect_users() const {
  int kp = 0;
  while (kp < users_ && at(1, kp + 1) == CsitState::Perfect) ++kp;
  return kp;
}

}  // namespace doflab
