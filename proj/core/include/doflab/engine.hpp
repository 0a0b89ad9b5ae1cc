#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "doflab/dof_point.hpp"
#include "doflab/rational.hpp"
#include "doflab/scheme.hpp"

namespace doflab {

__extension__ using UInt128 = unsigned __int128;

/// Element of GF(p) with p = 2^61 - 1.
class ModP {
 public:
  static constexpr std::uint64_t kModulus = (std::uint64_t{1} << 61) - 1;

  constexpr ModP() = default;
  /// Reduces any 64-bit value.
  constexpr explicit ModP(std::uint64_t v) : v_(reduce_wide(v)) {}
  static constexpr ModP from_signed(std::int64_t v) {
    return v >= 0 ? ModP(static_cast<std::uint64_t>(v)) : -ModP(static_cast<std::uint64_t>(-(v + 1)) + 1);
  }

  constexpr std::uint64_t value() const noexcept { return v_; }
  constexpr bool is_zero() const noexcept { return v_ == 0; }

  friend constexpr ModP operator+(ModP a, ModP b) { return raw(reduce_once(a.v_ + b.v_)); }
  friend constexpr ModP operator-(ModP a, ModP b) { return raw(reduce_once(a.v_ + kModulus - b.v_)); }
  friend constexpr ModP operator*(ModP a, ModP b) {
    const UInt128 w = static_cast<UInt128>(a.v_) * b.v_;
    const std::uint64_t lo = static_cast<std::uint64_t>(w) & kModulus;
    const std::uint64_t hi = static_cast<std::uint64_t>(w >> 61);
    return raw(reduce_once(lo + hi));
  }
  constexpr ModP operator-() const { return raw(v_ == 0 ? 0 : kModulus - v_); }
  ModP& operator+=(ModP o) { return *this = *this + o; }
  ModP& operator-=(ModP o) { return *this = *this - o; }
  ModP& operator*=(ModP o) { return *this = *this * o; }
  /// Throws DivisionByZero for zero.
  ModP inverse() const;
  friend ModP operator/(ModP a, ModP b) { return a * b.inverse(); }

  friend constexpr bool operator==(ModP, ModP) = default;

 private:
  static constexpr ModP raw(std::uint64_t v) {
    ModP m;
    m.v_ = v;
    return m;
  }
  static constexpr std::uint64_t reduce_once(std::uint64_t v) { return v >= kModulus ? v - kModulus : v; }
  static constexpr std::uint64_t reduce_wide(std::uint64_t v) { return reduce_once((v & kModulus) + (v >> 61)); }

  std::uint64_t v_ = 0;
};

using Complex = std::complex<double>;

enum class ArithmeticMode { PrimeField, RationalRandom, ComplexFloat };

std::string_view mode_name(ArithmeticMode mode) noexcept;
/// Accepts "field", "prime", "rational", "float", "complex"; throws ParameterError otherwise.
ArithmeticMode parse_mode(std::string_view text);

/// Dense row-major matrix over one of the engine scalars.
template <typename S>
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<S> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, S{}) {}
  S& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const S& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  /// Copy restricted to the given columns, in the given order.
  Matrix select_columns(const std::vector<std::size_t>& which) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// H[slot][receiver] row vectors of length M; slots and receivers are 1-based in at().
template <typename S>
struct Channels {
  int slots = 0;
  int receivers = 0;
  int antennas = 0;
  std::uint64_t seed = 0;
  std::vector<S> entries;

  const S& at(int slot, int receiver, int antenna) const {
    return entries[(static_cast<std::size_t>(slot - 1) * receivers + (receiver - 1)) * antennas + antenna];
  }
  S& at(int slot, int receiver, int antenna) {
    return entries[(static_cast<std::size_t>(slot - 1) * receivers + (receiver - 1)) * antennas + antenna];
  }
  friend bool operator==(const Channels&, const Channels&) = default;
};

using ChannelRealization = std::variant<Channels<ModP>, Channels<Rational>, Channels<Complex>>;

/// beams[slot - 1][stream] is a length-M column vector.
template <typename S>
struct PrecoderSet {
  std::vector<std::vector<std::vector<S>>> beams;
  const std::vector<S>& at(int slot, std::size_t stream) const { return beams[static_cast<std::size_t>(slot - 1)][stream]; }
};

/// Per receiver, a T x N matrix of coefficients on the N declared data symbols.
template <typename S>
struct ObservationSet {
  std::vector<Matrix<S>> per_receiver;  // index 0 is R1
  const Matrix<S>& of(int receiver) const { return per_receiver[static_cast<std::size_t>(receiver - 1)]; }
};

/// Keyed 64-bit generator: a pure function of its arguments.
std::uint64_t keyed_draw(std::uint64_t seed, std::uint64_t domain, std::uint64_t a, std::uint64_t b = 0,
                         std::uint64_t c = 0, std::uint64_t d = 0) noexcept;
/// Seed of trial `index` under master seed `seed`.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) noexcept;
/// Precoder key paired with channel seed `seed` in a trial.
std::uint64_t precoder_seed(std::uint64_t seed) noexcept;

/// Channel draw in any mode; determined by (seed, mode, scheme dimensions).
ChannelRealization draw_channels(const Scheme& scheme, std::uint64_t seed, ArithmeticMode mode);
template <typename S>
Channels<S> draw_channels_as(const Scheme& scheme, std::uint64_t seed);

/// Random beams: zero-forced streams get a random point of the exact null space of the
/// stacked zf channel rows, other streams a random vector. Throws InfeasibleError when
/// |zf| >= M or the null space is trivial.
template <typename S>
PrecoderSet<S> make_precoders(const Scheme& scheme, const Channels<S>& channels, std::uint64_t seed);

/// Coefficient vector over data symbols for an expression sent in `slot`, given the rows
/// already built for slots before it.
template <typename S>
std::vector<S> expand_expr(const Scheme& scheme, const Expr& expr, const ObservationSet<S>& partial, int slot);

/// Builds every receiver's observation matrix slot by slot. Throws InfeasibleError if an
/// expression refers to an observation that does not exist yet or an undeclared symbol.
template <typename S>
ObservationSet<S> expand(const Scheme& scheme, const Channels<S>& channels, const PrecoderSet<S>& precoders);

/// Effective gain of `stream` in `slot` at `receiver`: H_r(slot) . b.
template <typename S>
S stream_gain(const Channels<S>& channels, const PrecoderSet<S>& precoders, int slot, std::size_t stream,
              int receiver);

/// rank(G) == rank(G restricted to non-desired columns) + |desired|.
/// Exact elimination for ModP and Rational. For Complex both ranks count singular values
/// above 1e-9 times the largest singular value of the whole of G.
template <typename S>
bool decode_check(const Matrix<S>& g, const std::vector<std::size_t>& desired);

template <typename S>
std::size_t rank(const Matrix<S>& g);

struct ReceiverDecode {
  int receiver = 0;
  std::size_t desired = 0;
  std::size_t rank_full = 0;
  std::size_t rank_interference = 0;
  bool decodable = false;
};

struct DecodeReport {
  std::vector<ReceiverDecode> receivers;
  bool all_decodable() const;
};

template <typename S>
DecodeReport decode(const Scheme& scheme, const ObservationSet<S>& observations);

/// One full trial: channels from `seed`, precoders from a derived key, expansion, decode.
DecodeReport run_trial(const Scheme& scheme, std::uint64_t seed, ArithmeticMode mode);

struct SimReport {
  int trials = 0;
  ArithmeticMode mode = ArithmeticMode::PrimeField;
  std::uint64_t seed = 0;
  int users = 0;
  std::vector<int> successes_per_receiver;
  int full_successes = 0;
  /// desired_r / T for every receiver, present when every trial decoded at every receiver.
  std::optional<DofPoint> achieved_dof;
  /// Symbols per receiver divided by T, regardless of outcome.
  DofPoint nominal_dof{1};
};

/// Runs `trials` independent trials (trial i uses trial_seed(seed, i)) on up to `threads`
/// worker threads. Throws ParameterError if trials < 1 and InfeasibleError if the scheme
/// has blocking validation issues.
SimReport simulate(const Scheme& scheme, int trials, std::uint64_t seed, ArithmeticMode mode, int threads = 1);

extern template struct Matrix<ModP>;
extern template struct Matrix<Rational>;
extern template struct Matrix<Complex>;

}  // namespace doflab
