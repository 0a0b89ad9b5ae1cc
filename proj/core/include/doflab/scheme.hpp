#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "doflab/csit.hpp"
#include "doflab/subset.hpp"

namespace doflab {

/// A declared data symbol.
struct DataSymAtom {
  std::string id;
  friend bool operator==(const DataSymAtom&, const DataSymAtom&) = default;
};

/// Everything receiver `receiver` observed in slot `slot`.
struct ObsAtom {
  int receiver = 0;
  int slot = 0;
  friend bool operator==(const ObsAtom&, const ObsAtom&) = default;
};

/// The part of an observation carried by symbols destined to `owners`.
struct PartAtom {
  int receiver = 0;
  int slot = 0;
  UserSubset owners;
  friend bool operator==(const PartAtom&, const PartAtom&) = default;
};

using Atom = std::variant<DataSymAtom, ObsAtom, PartAtom>;

struct Term {
  int sign = 1;  // +1 or -1
  Atom atom;
  friend bool operator==(const Term&, const Term&) = default;
};

/// Signed unit-weight sum of atoms; channel-dependent weights come from the engine.
struct Expr {
  std::vector<Term> terms;
  friend bool operator==(const Expr&, const Expr&) = default;
};

/// One beamformed stream: what is sent, and the receivers it must be invisible to.
struct Stream {
  Expr expr;
  UserSubset zf;
  friend bool operator==(const Stream&, const Stream&) = default;
};

struct DataSymbol {
  std::string id;
  int destination = 0;
  friend bool operator==(const DataSymbol&, const DataSymbol&) = default;
};

/// `csit a-b: S S S` declaration.
struct CsitRange {
  int first = 0;
  int last = 0;
  std::vector<CsitState> states;
  friend bool operator==(const CsitRange&, const CsitRange&) = default;
};

struct Scheme {
  std::string name;
  int users = 0;
  int antennas = 0;
  int slots = 0;
  std::vector<CsitRange> csit_ranges;
  std::vector<DataSymbol> symbols;
  std::vector<std::vector<Stream>> slot_streams;  // index 0 is slot 1

  /// State at (slot, user), or nullopt when no declaration covers the cell.
  std::optional<CsitState> csit_at(int slot, int user) const;
  /// Full table; throws ParameterError if any cell is uncovered.
  CsitConfig csit() const;

  std::optional<std::size_t> symbol_index(std::string_view id) const;
  /// Column indices of symbols destined to `user`, in declaration order.
  std::vector<std::size_t> desired_columns(int user) const;
  const std::vector<Stream>& streams(int slot) const { return slot_streams.at(static_cast<std::size_t>(slot - 1)); }

  friend bool operator==(const Scheme&, const Scheme&) = default;
};

/// Parses the line-oriented schedule format. Structural errors (syntax, unknown
/// receiver, duplicate symbol, slot out of range) throw ParseError; semantic
/// checks are left to validate().
Scheme parse_scheme(std::string_view text);

/// Canonical text: header, csit ranges, data declarations, then every slot ascending.
std::string emit_scheme(const Scheme& scheme);
std::string emit_expr(const Expr& expr);

enum class IssueKind { Causality, CsitAvailability, ZfCapacity, ZfRequiresPerfect, UndefinedSymbol, UncoveredCsit };

std::string_view issue_kind_name(IssueKind kind) noexcept;

struct ValidationIssue {
  int slot = 0;
  IssueKind kind{};
  std::string detail;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationIssue> issues;

  bool has(IssueKind kind) const;
  /// Issues that make the schedule impossible to execute (everything except zf-capacity).
  bool executable() const;
};

/// Semantic checks: causality, CSIT availability for retransmitted
/// observations, zero-forcing needs perfect CSIT and a nonempty null space, and
/// per-slot stream counts within the antenna budget.
ValidationReport validate(const Scheme& scheme);

/// Names of the shipped schedules.
std::vector<std::string> builtin_names();
/// Canonical text of a shipped schedule; throws ParameterError for unknown names.
std::string builtin(std::string_view name);
/// The shipped file as written, comments included.
std::string builtin_source(std::string_view name);

}  // namespace doflab
