#include "doflab/scheme.hpp"

#include <algorithm>
#include <span>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <utility>

#include "doflab/error.hpp"

namespace doflab {

namespace detail {
std::span<const std::pair<std::string_view, std::string_view>> builtin_table();
}

namespace {

constexpr int kMaxSlots = 4096;
constexpr int kMaxAntennas = 64;

const std::set<std::string, std::less<>> kReserved{"scheme", "users", "antennas", "slots", "csit",
                                                   "data",   "slot",  "send",     "zf",    "obs", "part"};

// Cursor over one ';'-separated statement; columns are reported against the source line.
class Cursor {
 public:
  Cursor(std::string_view text, std::size_t line, std::size_t column0)
      : text_(text), line_(line), column0_(column0) {}

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(line_, column0_ + pos_, message); }
  [[noreturn]] void fail_at(std::size_t pos, const std::string& message) const {
    throw ParseError(line_, column0_ + pos, message);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  std::size_t pos() const { return pos_; }

  bool try_eat(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  void expect(char c) {
    if (!try_eat(c)) fail(std::string("expected '") + c + "'");
  }
  void expect_end() {
    if (!at_end()) fail("unexpected text '" + std::string(text_.substr(pos_)) + "'");
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
    }
    if (start == pos_) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  int integer() {
    skip_ws();
    const std::size_t start = pos_;
    long long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1'000'000'000) fail_at(start, "integer too large");
      ++pos_;
    }
    if (start == pos_) fail("expected integer");
    return static_cast<int>(v);
  }

  std::string quoted() {
    expect('"');
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '"') ++pos_;
    if (pos_ >= text_.size()) fail_at(start - 1, "unterminated string");
    std::string s(text_.substr(start, pos_ - start));
    ++pos_;
    return s;
  }

  int receiver(int users) {
    skip_ws();
    const std::size_t start = pos_;
    if (peek() != 'R') fail("expected receiver R<i>");
    ++pos_;
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail("expected receiver R<i>");
    }
    const int r = integer();
    if (r < 1 || r > users) fail_at(start, "unknown receiver R" + std::to_string(r));
    return r;
  }

 private:
  std::string_view text_;
  std::size_t line_;
  std::size_t column0_;
  std::size_t pos_ = 0;
};

struct Statement {
  std::string_view text;
  std::size_t line;
  std::size_t column;  // 1-based column of text[0]
};

// Splits the input into statements on newlines and ';', dropping '#' comments.
std::vector<Statement> split_statements(std::string_view input) {
  std::vector<Statement> out;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= input.size()) {
    std::size_t end = input.find('\n', begin);
    if (end == std::string_view::npos) end = input.size();
    std::string_view line = input.substr(begin, end - begin);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;

    bool quoted = false;
    std::size_t stmt_begin = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      const char c = i < line.size() ? line[i] : '\0';
      if (c == '"') quoted = !quoted;
      const bool cut = i == line.size() || (!quoted && (c == ';' || c == '#'));
      if (!cut) continue;
      out.push_back(Statement{line.substr(stmt_begin, i - stmt_begin), line_no, stmt_begin + 1});
      if (c == '#') break;
      stmt_begin = i + 1;
    }
    if (end == input.size()) break;
    begin = end + 1;
  }
  return out;
}

class Parser {
 public:
  Scheme run(std::string_view input) {
    const auto statements = split_statements(input);
    for (const auto& st : statements) {
      Cursor c(st.text, st.line, st.column);
      if (c.at_end()) continue;
      last_line_ = st.line;
      statement(c);
    }
    require_header(Cursor("", last_line_ == 0 ? 1 : last_line_, 1));
    return std::move(s_);
  }

 private:
  void statement(Cursor& c) {
    const std::size_t kw_pos = c.pos();
    const std::string kw = c.identifier();
    if (kw == "scheme") {
      once(c, kw_pos, have_name_, "scheme");
      s_.name = c.quoted();
    } else if (kw == "users") {
      once(c, kw_pos, have_users_, "users");
      s_.users = c.integer();
      if (s_.users < 1 || s_.users > kMaxUsers) c.fail_at(kw_pos, "users must be in 1.." + std::to_string(kMaxUsers));
    } else if (kw == "antennas") {
      once(c, kw_pos, have_antennas_, "antennas");
      s_.antennas = c.integer();
      if (s_.antennas < 1 || s_.antennas > kMaxAntennas) c.fail_at(kw_pos, "antennas must be in 1..64");
    } else if (kw == "slots") {
      once(c, kw_pos, have_slots_, "slots");
      s_.slots = c.integer();
      if (s_.slots < 1 || s_.slots > kMaxSlots) c.fail_at(kw_pos, "slots must be in 1..4096");
      s_.slot_streams.assign(static_cast<std::size_t>(s_.slots), {});
    } else if (kw == "csit") {
      require_header(c);
      csit(c);
    } else if (kw == "data") {
      require_header(c);
      data(c);
    } else if (kw == "slot") {
      require_header(c);
      slot(c);
    } else if (kw == "send") {
      require_header(c);
      if (current_slot_ == 0) c.fail_at(kw_pos, "send outside a slot block");
      s_.slot_streams[static_cast<std::size_t>(current_slot_ - 1)].push_back(stream(c));
    } else {
      c.fail_at(kw_pos, "unknown statement '" + kw + "'");
    }
    c.expect_end();
  }

  void once(Cursor& c, std::size_t pos, bool& flag, const char* what) {
    if (flag) c.fail_at(pos, std::string("duplicate '") + what + "' declaration");
    if (current_slot_ != 0 || body_started_) c.fail_at(pos, std::string("'") + what + "' must precede the body");
    flag = true;
  }

  void require_header(const Cursor& c) {
    body_started_ = true;
    const char* missing = !have_name_       ? "scheme"
                          : !have_users_    ? "users"
                          : !have_antennas_ ? "antennas"
                          : !have_slots_    ? "slots"
                                            : nullptr;
    if (missing) c.fail_at(0, std::string("missing header declaration '") + missing + "'");
  }

  void csit(Cursor& c) {
    const std::size_t start = c.pos();
    CsitRange range;
    range.first = c.integer();
    range.last = c.try_eat('-') ? c.integer() : range.first;
    if (range.first < 1 || range.last > s_.slots || range.first > range.last) {
      c.fail_at(start, "csit slot range " + std::to_string(range.first) + "-" + std::to_string(range.last) +
                           " outside 1.." + std::to_string(s_.slots));
    }
    for (const auto& prev : s_.csit_ranges) {
      if (range.first <= prev.last && prev.first <= range.last) c.fail_at(start, "overlapping csit ranges");
    }
    c.expect(':');
    while (!c.at_end()) {
      const char code = c.peek();
      try {
        range.states.push_back(csit_from_code(code));
      } catch (const ParameterError&) {
        c.fail(std::string("invalid csit state '") + code + "'");
      }
      c.try_eat(code);
    }
    if (static_cast<int>(range.states.size()) != s_.users) {
      c.fail("expected " + std::to_string(s_.users) + " csit states, got " + std::to_string(range.states.size()));
    }
    s_.csit_ranges.push_back(std::move(range));
  }

  void data(Cursor& c) {
    std::vector<std::pair<std::string, std::size_t>> ids;
    do {
      const std::size_t pos = c.pos();
      std::string id = c.identifier();
      if (kReserved.contains(id)) c.fail_at(pos, "'" + id + "' is reserved");
      ids.emplace_back(std::move(id), pos);
    } while (c.try_eat(','));
    c.expect('-');
    if (!c.try_eat('>')) c.fail("expected '->'");
    const int dest = c.receiver(s_.users);
    for (auto& [id, pos] : ids) {
      if (s_.symbol_index(id)) c.fail_at(pos, "duplicate symbol '" + id + "'");
      s_.symbols.push_back(DataSymbol{id, dest});
    }
  }

  void slot(Cursor& c) {
    const std::size_t pos = c.pos();
    const int t = c.integer();
    if (t < 1 || t > s_.slots) {
      c.fail_at(pos, "slot index " + std::to_string(t) + " out of range 1.." + std::to_string(s_.slots));
    }
    if (!seen_slots_.insert(t).second) c.fail_at(pos, "slot " + std::to_string(t) + " declared twice");
    c.expect(':');
    current_slot_ = t;
  }

  Stream stream(Cursor& c) {
    Stream st;
    int sign = 1;
    if (c.try_eat('-')) {
      sign = -1;
    } else {
      c.try_eat('+');
    }
    while (true) {
      st.expr.terms.push_back(Term{sign, atom(c)});
      if (c.try_eat('+')) {
        sign = 1;
      } else if (c.try_eat('-')) {
        sign = -1;
      } else {
        break;
      }
    }
    if (!c.at_end()) {
      const std::size_t pos = c.pos();
      if (c.identifier() != "zf") c.fail_at(pos, "expected '+', '-' or 'zf'");
      do {
        const std::size_t rpos = c.pos();
        const int r = c.receiver(s_.users);
        if (st.zf.contains(r)) c.fail_at(rpos, "receiver R" + std::to_string(r) + " repeated in zf set");
        st.zf = st.zf.with(r);
      } while (c.try_eat(','));
    }
    return st;
  }

  Atom atom(Cursor& c) {
    const std::size_t pos = c.pos();
    std::string id = c.identifier();
    if ((id == "obs" || id == "part") && c.peek() == '(') {
      c.expect('(');
      const int r = c.receiver(s_.users);
      c.expect(',');
      const int t = c.integer();
      if (id == "obs") {
        c.expect(')');
        return ObsAtom{r, t};
      }
      c.expect(',');
      c.expect('{');
      UserSubset owners;
      if (c.peek() == '}') c.fail("owner set must be nonempty");
      do {
        const std::size_t upos = c.pos();
        const int u = c.integer();
        if (u < 1 || u > s_.users) c.fail_at(upos, "unknown user " + std::to_string(u));
        if (owners.contains(u)) c.fail_at(upos, "user " + std::to_string(u) + " repeated in owner set");
        owners = owners.with(u);
      } while (c.try_eat(','));
      c.expect('}');
      c.expect(')');
      return PartAtom{r, t, owners};
    }
    if (kReserved.contains(id)) c.fail_at(pos, "'" + id + "' is reserved");
    return DataSymAtom{std::move(id)};
  }

  Scheme s_;
  bool have_name_ = false, have_users_ = false, have_antennas_ = false, have_slots_ = false;
  bool body_started_ = false;
  int current_slot_ = 0;
  std::set<int> seen_slots_;
  std::size_t last_line_ = 0;
};

std::string receivers(const UserSubset& s) {
  std::string out;
  for (int r : s.members()) {
    if (!out.empty()) out += ", ";
    out += "R" + std::to_string(r);
  }
  return out;
}

std::string atom_str(const Atom& a) {
  if (const auto* d = std::get_if<DataSymAtom>(&a)) return d->id;
  if (const auto* o = std::get_if<ObsAtom>(&a)) {
    return "obs(R" + std::to_string(o->receiver) + ", " + std::to_string(o->slot) + ")";
  }
  const auto& p = std::get<PartAtom>(a);
  std::string owners;
  for (int u : p.owners.members()) {
    if (!owners.empty()) owners += ", ";
    owners += std::to_string(u);
  }
  return "part(R" + std::to_string(p.receiver) + ", " + std::to_string(p.slot) + ", {" + owners + "})";
}

// Streams sharing a class and a zero-forcing set compete for the same null-space dimensions.
// Pure data streams are classed by destination; any stream carrying retransmitted
// observations is a class of its own.
std::string stream_class(const Scheme& s, const Stream& st, std::size_t index) {
  int dest = 0;
  for (const auto& term : st.expr.terms) {
    const auto* d = std::get_if<DataSymAtom>(&term.atom);
    if (!d) return "#" + std::to_string(index);
    const auto idx = s.symbol_index(d->id);
    if (!idx) return "#" + std::to_string(index);
    const int here = s.symbols[*idx].destination;
    if (dest != 0 && dest != here) return "#" + std::to_string(index);
    dest = here;
  }
  return "R" + std::to_string(dest);
}

}  // namespace

std::optional<CsitState> Scheme::csit_at(int slot, int user) const {
  for (const auto& r : csit_ranges) {
    if (slot >= r.first && slot <= r.last && user >= 1 && user <= static_cast<int>(r.states.size())) {
      return r.states[static_cast<std::size_t>(user - 1)];
    }
  }
  return std::nullopt;
}

CsitConfig Scheme::csit() const {
  std::vector<CsitState> cells;
  cells.reserve(static_cast<std::size_t>(slots * users));
  for (int t = 1; t <= slots; ++t) {
    for (int u = 1; u <= users; ++u) {
      const auto st = csit_at(t, u);
      if (!st) {
        throw ParameterError("no csit declared for slot " + std::to_string(t) + ", user " + std::to_string(u));
      }
      cells.push_back(*st);
    }
  }
  return CsitConfig(users, slots, std::move(cells));
}

std::optional<std::size_t> Scheme::symbol_index(std::string_view id) const {
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i].id == id) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> Scheme::desired_columns(int user) const {
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (symbols[i].destination == user) cols.push_back(i);
  }
  return cols;
}

Scheme parse_scheme(std::string_view text) { return Parser().run(text); }

std::string emit_expr(const Expr& expr) {
  std::string out;
  for (std::size_t i = 0; i < expr.terms.size(); ++i) {
    const auto& t = expr.terms[i];
    if (i == 0) {
      if (t.sign < 0) out += "-";
    } else {
      out += t.sign < 0 ? " - " : " + ";
    }
    out += atom_str(t.atom);
  }
  return out;
}

std::string emit_scheme(const Scheme& s) {
  std::ostringstream os;
  os << "scheme \"" << s.name << "\"\n";
  os << "users " << s.users << "\n";
  os << "antennas " << s.antennas << "\n";
  os << "slots " << s.slots << "\n";
  for (const auto& r : s.csit_ranges) {
    os << "csit " << r.first << "-" << r.last << ":";
    for (auto st : r.states) os << ' ' << csit_code(st);
    os << "\n";
  }
  // Consecutive symbols with one destination share a declaration; order is preserved.
  for (std::size_t i = 0; i < s.symbols.size();) {
    std::size_t j = i;
    os << "data ";
    while (j < s.symbols.size() && s.symbols[j].destination == s.symbols[i].destination) {
      if (j > i) os << ", ";
      os << s.symbols[j].id;
      ++j;
    }
    os << " -> R" << s.symbols[i].destination << "\n";
    i = j;
  }
  for (int t = 1; t <= s.slots; ++t) {
    os << "slot " << t << ":\n";
    for (const auto& st : s.streams(t)) {
      os << "  send " << emit_expr(st.expr);
      if (!st.zf.empty()) os << " zf " << receivers(st.zf);
      os << "\n";
    }
  }
  return os.str();
}

std::string_view issue_kind_name(IssueKind kind) noexcept {
  switch (kind) {
    case IssueKind::Causality: return "causality";
    case IssueKind::CsitAvailability: return "csit-availability";
    case IssueKind::ZfCapacity: return "zf-capacity";
    case IssueKind::ZfRequiresPerfect: return "zf-requires-perfect";
    case IssueKind::UndefinedSymbol: return "undefined-symbol";
    case IssueKind::UncoveredCsit: return "uncovered-csit";
  }
  return "unknown";
}

bool ValidationReport::has(IssueKind kind) const {
  return std::any_of(issues.begin(), issues.end(), [&](const auto& i) { return i.kind == kind; });
}

bool ValidationReport::executable() const {
  return std::all_of(issues.begin(), issues.end(), [](const auto& i) { return i.kind == IssueKind::ZfCapacity; });
}

ValidationReport validate(const Scheme& s) {
  ValidationReport rep;
  auto add = [&](int slot, IssueKind kind, std::string detail) {
    rep.issues.push_back(ValidationIssue{slot, kind, std::move(detail)});
  };

  for (int t = 1; t <= s.slots; ++t) {
    std::string missing;
    for (int u = 1; u <= s.users; ++u) {
      if (!s.csit_at(t, u)) missing += (missing.empty() ? "R" : ", R") + std::to_string(u);
    }
    if (!missing.empty()) add(t, IssueKind::UncoveredCsit, "no csit declared for " + missing);
  }

  for (int t = 1; t <= s.slots; ++t) {
    const auto& streams = s.streams(t);
    for (std::size_t k = 0; k < streams.size(); ++k) {
      const auto& st = streams[k];
      const std::string where = "stream " + std::to_string(k + 1) + " (" + emit_expr(st.expr) + ")";
      for (const auto& term : st.expr.terms) {
        if (const auto* d = std::get_if<DataSymAtom>(&term.atom)) {
          if (!s.symbol_index(d->id)) add(t, IssueKind::UndefinedSymbol, where + ": symbol '" + d->id + "' is not declared");
          continue;
        }
        const auto [r, tp] = std::visit(
            [](const auto& a) -> std::pair<int, int> {
              if constexpr (std::is_same_v<std::decay_t<decltype(a)>, DataSymAtom>) {
                return {0, 0};
              } else {
                return {a.receiver, a.slot};
              }
            },
            term.atom);
        if (tp < 1 || tp >= t) {
          add(t, IssueKind::Causality,
              where + ": refers to slot " + std::to_string(tp) + ", only slots 1.." + std::to_string(t - 1) +
                  " are available");
        } else if (s.csit_at(tp, r) == CsitState::None) {
          add(t, IssueKind::CsitAvailability,
              where + ": channel of R" + std::to_string(r) + " in slot " + std::to_string(tp) + " is never known");
        }
      }
      for (int r : st.zf.members()) {
        const auto state = s.csit_at(t, r);
        if (state && *state != CsitState::Perfect) {
          add(t, IssueKind::ZfRequiresPerfect,
              where + ": zero-forcing at R" + std::to_string(r) + " needs perfect csit, state is " +
                  std::string(1, csit_code(*state)));
        }
      }
      if (st.zf.size() >= s.antennas) {
        add(t, IssueKind::ZfCapacity,
            where + ": null space of " + receivers(st.zf) + " is empty with " + std::to_string(s.antennas) +
                " antennas");
      }
    }

    // Streams of one class zero-forced at (a superset of) Z live in a space of dimension M - |Z|.
    std::map<std::string, std::vector<UserSubset>> classes;
    for (std::size_t k = 0; k < streams.size(); ++k) classes[stream_class(s, streams[k], k)].push_back(streams[k].zf);
    for (const auto& [cls, zfs] : classes) {
      if (cls[0] == 'R' && static_cast<int>(zfs.size()) > s.antennas) {
        add(t, IssueKind::ZfCapacity,
            std::to_string(zfs.size()) + " independent streams for " + cls + " exceed " + std::to_string(s.antennas) +
                " antennas");
      }
      std::set<std::uint32_t> seen;
      for (const auto& z : zfs) {
        if (z.empty() || z.size() >= s.antennas || !seen.insert(z.mask()).second) continue;
        const auto n = std::count_if(zfs.begin(), zfs.end(), [&](const auto& o) { return z.subset_of(o); });
        if (n > s.antennas - z.size()) {
          add(t, IssueKind::ZfCapacity,
              std::to_string(n) + " streams for " + cls + " zero-forced at " + receivers(z) + " exceed null space dimension " +
                  std::to_string(s.antennas - z.size()));
        }
      }
    }
  }
  std::stable_sort(rep.issues.begin(), rep.issues.end(), [](const auto& a, const auto& b) { return a.slot < b.slot; });
  rep.ok = rep.issues.empty();
  return rep;
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [name, body] : detail::builtin_table()) names.emplace_back(name);
  return names;
}

std::string builtin_source(std::string_view name) {
  for (const auto& [n, body] : detail::builtin_table()) {
    if (n == name) return std::string(body);
  }
  std::string known;
  for (const auto& n : builtin_names()) known += (known.empty() ? "" : ", ") + n;
  throw ParameterError("unknown built-in scheme '" + std::string(name) + "' (known: " + known + ")");
}

std::string builtin(std::string_view name) { return emit_scheme(parse_scheme(builtin_source(name))); }

}  // namespace doflab
