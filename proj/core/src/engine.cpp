#include "doflab/engine.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>
#include <tuple>

#include "doflab/error.hpp"

namespace doflab {
namespace {

enum Domain : std::uint64_t {
  kChannelDomain = 0x43484e,  // "CHN"
  kNullCoefDomain = 0x4e4346,  // "NCF"
  kTrialDomain = 0x54524c,    // "TRL"
  kPrecoderDomain = 0x505245  // "PRE"
};

constexpr std::uint64_t splitmix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <typename S>
struct Scalar;

template <>
struct Scalar<ModP> {
  static ModP one() { return ModP(1); }
  static bool is_zero(const ModP& v) { return v.is_zero(); }
  static ModP draw(std::uint64_t seed, std::uint64_t domain, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    for (std::uint64_t k = 0;; ++k) {
      const std::uint64_t x = keyed_draw(seed, domain, a, b, c, k) >> 3;
      if (x < ModP::kModulus) return ModP(x);
    }
  }
};

template <>
struct Scalar<Rational> {
  static Rational one() { return Rational(1); }
  static bool is_zero(const Rational& v) { return v.is_zero(); }
  // Numerator uniform in [-2^24, 2^24], denominator uniform in [1, 256].
  static Rational draw(std::uint64_t seed, std::uint64_t domain, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    const std::uint64_t r = keyed_draw(seed, domain, a, b, c, 0);
    const auto num = static_cast<std::int64_t>(r % ((std::uint64_t{1} << 25) + 1)) - (std::int64_t{1} << 24);
    const auto den = static_cast<std::int64_t>(1 + ((r >> 40) % 256));
    return Rational(BigInt(num), BigInt(den));
  }
};

template <>
struct Scalar<Complex> {
  static Complex one() { return Complex(1.0, 0.0); }
  static bool is_zero(const Complex& v) { return v == Complex(0.0, 0.0); }
  // Circularly symmetric standard Gaussian, E|z|^2 = 1, by Box-Muller.
  static Complex draw(std::uint64_t seed, std::uint64_t domain, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    const double u1 = (static_cast<double>(keyed_draw(seed, domain, a, b, c, 0) >> 11) + 0.5) * 0x1p-53;
    const double u2 = static_cast<double>(keyed_draw(seed, domain, a, b, c, 1) >> 11) * 0x1p-53;
    const double radius = std::sqrt(-std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return Complex(radius * std::cos(angle), radius * std::sin(angle));
  }
};

template <typename S>
std::size_t exact_rank(Matrix<S> m) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
    std::size_t piv = rank;
    while (piv < m.rows && Scalar<S>::is_zero(m(piv, col))) ++piv;
    if (piv == m.rows) continue;
    if (piv != rank) {
      for (std::size_t j = 0; j < m.cols; ++j) std::swap(m(piv, j), m(rank, j));
    }
    const S inv = Scalar<S>::one() / m(rank, col);
    for (std::size_t i = rank + 1; i < m.rows; ++i) {
      if (Scalar<S>::is_zero(m(i, col))) continue;
      const S f = m(i, col) * inv;
      for (std::size_t j = col; j < m.cols; ++j) {
        if (!Scalar<S>::is_zero(m(rank, j))) m(i, j) -= f * m(rank, j);
      }
    }
    ++rank;
  }
  return rank;
}

Eigen::MatrixXcd to_eigen(const Matrix<Complex>& m) {
  Eigen::MatrixXcd e(static_cast<Eigen::Index>(m.rows), static_cast<Eigen::Index>(m.cols));
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
  }
  return e;
}

double largest_singular_value(const Matrix<Complex>& m) {
  if (m.rows == 0 || m.cols == 0) return 0.0;
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

// Singular values above 1e-9 times `reference` (the largest singular value of the
// receiver's whole observation matrix, so that zero-forced residue does not count).
std::size_t float_rank(const Matrix<Complex>& m, double reference) {
  if (m.rows == 0 || m.cols == 0 || reference == 0.0) return 0;
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
  const auto& sv = svd.singularValues();
  const double threshold = 1e-9 * reference;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++r;
  }
  return r;
}

// (rank of G, rank of its non-desired columns); desired must be deduplicated and in range.
template <typename S>
std::pair<std::size_t, std::size_t> decode_ranks(const Matrix<S>& g, const std::vector<std::size_t>& other) {
  if constexpr (std::is_same_v<S, Complex>) {
    const double ref = largest_singular_value(g);
    return {float_rank(g, ref), float_rank(g.select_columns(other), ref)};
  } else {
    return {exact_rank(g), exact_rank(g.select_columns(other))};
  }
}

// Basis of { x : A x = 0 } for the stacked rows A.
template <typename S>
std::vector<std::vector<S>> exact_null_space(Matrix<S> a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols && row < a.rows; ++col) {
    std::size_t piv = row;
    while (piv < a.rows && Scalar<S>::is_zero(a(piv, col))) ++piv;
    if (piv == a.rows) continue;
    for (std::size_t j = 0; j < a.cols; ++j) std::swap(a(piv, j), a(row, j));
    const S inv = Scalar<S>::one() / a(row, col);
    for (std::size_t j = 0; j < a.cols; ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows; ++i) {
      if (i == row || Scalar<S>::is_zero(a(i, col))) continue;
      const S f = a(i, col);
      for (std::size_t j = 0; j < a.cols; ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  std::vector<std::vector<S>> basis;
  for (std::size_t free = 0; free < a.cols; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    std::vector<S> x(a.cols, S{});
    x[free] = Scalar<S>::one();
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = -a(i, free);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::vector<std::vector<Complex>> float_null_space(const Matrix<Complex>& a) {
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double threshold = sv.size() > 0 ? 1e-9 * sv(0) : 0.0;
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++r;
  }
  const auto& v = svd.matrixV();
  std::vector<std::vector<Complex>> basis;
  for (Eigen::Index j = r; j < v.cols(); ++j) {
    std::vector<Complex> x(static_cast<std::size_t>(v.rows()));
    for (Eigen::Index i = 0; i < v.rows(); ++i) x[static_cast<std::size_t>(i)] = v(i, j);
    basis.push_back(std::move(x));
  }
  return basis;
}

template <typename S>
void normalize(std::vector<S>&) {}

template <>
void normalize(std::vector<Complex>& b) {
  double n = 0;
  for (const auto& v : b) n += std::norm(v);
  n = std::sqrt(n);
  if (n > 0) {
    for (auto& v : b) v /= n;
  }
}

template <typename S>
bool all_zero(const std::vector<S>& v) {
  return std::all_of(v.begin(), v.end(), [](const S& x) { return Scalar<S>::is_zero(x); });
}

template <typename S>
DecodeReport trial(const Scheme& scheme, std::uint64_t seed) {
  const auto channels = draw_channels_as<S>(scheme, seed);
  const auto precoders = make_precoders(scheme, channels, precoder_seed(seed));
  return decode(scheme, expand(scheme, channels, precoders));
}

}  // namespace

ModP ModP::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero in GF(2^61-1)");
  ModP result(1);
  ModP base = *this;
  for (std::uint64_t e = kModulus - 2; e > 0; e >>= 1) {
    if (e & 1) result *= base;
    base *= base;
  }
  return result;
}

std::string_view mode_name(ArithmeticMode mode) noexcept {
  switch (mode) {
    case ArithmeticMode::PrimeField: return "field";
    case ArithmeticMode::RationalRandom: return "rational";
    case ArithmeticMode::ComplexFloat: return "float";
  }
  return "unknown";
}

ArithmeticMode parse_mode(std::string_view text) {
  if (text == "field" || text == "prime") return ArithmeticMode::PrimeField;
  if (text == "rational") return ArithmeticMode::RationalRandom;
  if (text == "float" || text == "complex") return ArithmeticMode::ComplexFloat;
  throw ParameterError("unknown arithmetic mode '" + std::string(text) + "' (field, rational, float)");
}

template <typename S>
Matrix<S> Matrix<S>::select_columns(const std::vector<std::size_t>& which) const {
  Matrix<S> out(rows, which.size());
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < which.size(); ++j) out(i, j) = (*this)(i, which[j]);
  }
  return out;
}

template struct Matrix<ModP>;
template struct Matrix<Rational>;
template struct Matrix<Complex>;

std::uint64_t keyed_draw(std::uint64_t seed, std::uint64_t domain, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                         std::uint64_t d) noexcept {
  std::uint64_t h = splitmix(seed ^ 0x6a09e667f3bcc908ULL);
  h = splitmix(h ^ domain);
  h = splitmix(h ^ a);
  h = splitmix(h ^ b);
  h = splitmix(h ^ c);
  return splitmix(h ^ d);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return keyed_draw(seed, kTrialDomain, index);
}

std::uint64_t precoder_seed(std::uint64_t seed) noexcept { return keyed_draw(seed, kPrecoderDomain, 0); }

template <typename S>
Channels<S> draw_channels_as(const Scheme& scheme, std::uint64_t seed) {
  Channels<S> ch;
  ch.slots = scheme.slots;
  ch.receivers = scheme.users;
  ch.antennas = scheme.antennas;
  ch.seed = seed;
  ch.entries.resize(static_cast<std::size_t>(scheme.slots) * scheme.users * scheme.antennas);
  for (int t = 1; t <= scheme.slots; ++t) {
    for (int r = 1; r <= scheme.users; ++r) {
      for (int a = 0; a < scheme.antennas; ++a) {
        ch.at(t, r, a) = Scalar<S>::draw(seed, kChannelDomain, static_cast<std::uint64_t>(t),
                                         static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(a));
      }
    }
  }
  return ch;
}

ChannelRealization draw_channels(const Scheme& scheme, std::uint64_t seed, ArithmeticMode mode) {
  switch (mode) {
    case ArithmeticMode::PrimeField: return draw_channels_as<ModP>(scheme, seed);
    case ArithmeticMode::RationalRandom: return draw_channels_as<Rational>(scheme, seed);
    case ArithmeticMode::ComplexFloat: return draw_channels_as<Complex>(scheme, seed);
  }
  throw InternalError("unhandled arithmetic mode");
}

template <typename S>
PrecoderSet<S> make_precoders(const Scheme& scheme, const Channels<S>& channels, std::uint64_t seed) {
  const int m = scheme.antennas;
  PrecoderSet<S> set;
  set.beams.resize(static_cast<std::size_t>(scheme.slots));
  for (int t = 1; t <= scheme.slots; ++t) {
    const auto& streams = scheme.streams(t);
    for (std::size_t k = 0; k < streams.size(); ++k) {
      const auto& zf = streams[k].zf;
      if (zf.size() >= m) {
        throw InfeasibleError("slot " + std::to_string(t) + ", stream " + std::to_string(k + 1) +
                              ": zero-forcing at " + std::to_string(zf.size()) + " receivers leaves no null space with " +
                              std::to_string(m) + " antennas");
      }
      std::vector<std::vector<S>> basis;
      if (zf.empty()) {
        for (int a = 0; a < m; ++a) {
          std::vector<S> e(static_cast<std::size_t>(m), S{});
          e[static_cast<std::size_t>(a)] = Scalar<S>::one();
          basis.push_back(std::move(e));
        }
      } else {
        Matrix<S> stacked(zf.members().size(), static_cast<std::size_t>(m));
        std::size_t i = 0;
        for (int r : zf.members()) {
          for (int a = 0; a < m; ++a) stacked(i, static_cast<std::size_t>(a)) = channels.at(t, r, a);
          ++i;
        }
        if constexpr (std::is_same_v<S, Complex>) {
          basis = float_null_space(stacked);
        } else {
          basis = exact_null_space(stacked);
        }
      }
      if (basis.empty()) {
        throw InfeasibleError("slot " + std::to_string(t) + ", stream " + std::to_string(k + 1) +
                              ": zero-forcing null space is trivial for this realization");
      }
      std::vector<S> b;
      for (std::uint64_t attempt = 0; b.empty() || all_zero(b); ++attempt) {
        b.assign(static_cast<std::size_t>(m), S{});
        for (std::size_t j = 0; j < basis.size(); ++j) {
          const S c = Scalar<S>::draw(seed, kNullCoefDomain + (attempt << 24), static_cast<std::uint64_t>(t), k, j);
          for (int a = 0; a < m; ++a) b[static_cast<std::size_t>(a)] += c * basis[j][static_cast<std::size_t>(a)];
        }
      }
      normalize(b);
      set.beams[static_cast<std::size_t>(t - 1)].push_back(std::move(b));
    }
  }
  return set;
}

template <typename S>
std::vector<S> expand_expr(const Scheme& scheme, const Expr& expr, const ObservationSet<S>& partial, int slot) {
  const std::size_t n = scheme.symbols.size();
  std::vector<S> coef(n, S{});
  for (const auto& term : expr.terms) {
    const S sign = term.sign < 0 ? -Scalar<S>::one() : Scalar<S>::one();
    if (const auto* d = std::get_if<DataSymAtom>(&term.atom)) {
      const auto idx = scheme.symbol_index(d->id);
      if (!idx) throw InfeasibleError("slot " + std::to_string(slot) + ": undeclared symbol '" + d->id + "'");
      coef[*idx] += sign;
      continue;
    }
    int r = 0;
    int tp = 0;
    std::optional<UserSubset> owners;
    if (const auto* o = std::get_if<ObsAtom>(&term.atom)) {
      r = o->receiver;
      tp = o->slot;
    } else {
      const auto& p = std::get<PartAtom>(term.atom);
      r = p.receiver;
      tp = p.slot;
      owners = p.owners;
    }
    if (tp < 1 || tp >= slot) {
      throw InfeasibleError("slot " + std::to_string(slot) + ": observation of R" + std::to_string(r) + " at slot " +
                            std::to_string(tp) + " is not available yet");
    }
    const auto& g = partial.of(r);
    for (std::size_t j = 0; j < n; ++j) {
      if (owners && !owners->contains(scheme.symbols[j].destination)) continue;
      coef[j] += sign * g(static_cast<std::size_t>(tp - 1), j);
    }
  }
  return coef;
}

template <typename S>
S stream_gain(const Channels<S>& channels, const PrecoderSet<S>& precoders, int slot, std::size_t stream,
              int receiver) {
  const auto& b = precoders.at(slot, stream);
  S g{};
  for (int a = 0; a < channels.antennas; ++a) g += channels.at(slot, receiver, a) * b[static_cast<std::size_t>(a)];
  return g;
}

template <typename S>
ObservationSet<S> expand(const Scheme& scheme, const Channels<S>& channels, const PrecoderSet<S>& precoders) {
  if (channels.slots != scheme.slots || channels.receivers != scheme.users || channels.antennas != scheme.antennas) {
    throw ParameterError("channel realization does not match scheme dimensions");
  }
  const std::size_t n = scheme.symbols.size();
  ObservationSet<S> obs;
  obs.per_receiver.assign(static_cast<std::size_t>(scheme.users), Matrix<S>(static_cast<std::size_t>(scheme.slots), n));
  for (int t = 1; t <= scheme.slots; ++t) {
    const auto& streams = scheme.streams(t);
    std::vector<std::vector<S>> coefs;
    coefs.reserve(streams.size());
    for (const auto& st : streams) coefs.push_back(expand_expr(scheme, st.expr, obs, t));
    for (int r = 1; r <= scheme.users; ++r) {
      auto& g = obs.per_receiver[static_cast<std::size_t>(r - 1)];
      for (std::size_t k = 0; k < streams.size(); ++k) {
        const S gain = stream_gain(channels, precoders, t, k, r);
        if (Scalar<S>::is_zero(gain)) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (!Scalar<S>::is_zero(coefs[k][j])) g(static_cast<std::size_t>(t - 1), j) += gain * coefs[k][j];
        }
      }
    }
  }
  return obs;
}

template <typename S>
std::size_t rank(const Matrix<S>& g) {
  if constexpr (std::is_same_v<S, Complex>) {
    return float_rank(g, largest_singular_value(g));
  } else {
    return exact_rank(g);
  }
}

template <typename S>
bool decode_check(const Matrix<S>& g, const std::vector<std::size_t>& desired) {
  std::vector<bool> is_desired(g.cols, false);
  std::size_t count = 0;
  for (auto c : desired) {
    if (c >= g.cols) throw ParameterError("desired column " + std::to_string(c) + " out of range");
    if (!is_desired[c]) ++count;
    is_desired[c] = true;
  }
  std::vector<std::size_t> other;
  for (std::size_t c = 0; c < g.cols; ++c) {
    if (!is_desired[c]) other.push_back(c);
  }
  const auto [full, interference] = decode_ranks(g, other);
  return full == interference + count;
}

bool DecodeReport::all_decodable() const {
  return std::all_of(receivers.begin(), receivers.end(), [](const auto& r) { return r.decodable; });
}

template <typename S>
DecodeReport decode(const Scheme& scheme, const ObservationSet<S>& observations) {
  DecodeReport rep;
  for (int r = 1; r <= scheme.users; ++r) {
    const auto& g = observations.of(r);
    const auto desired = scheme.desired_columns(r);
    std::vector<std::size_t> other;
    for (std::size_t c = 0; c < g.cols; ++c) {
      if (std::find(desired.begin(), desired.end(), c) == desired.end()) other.push_back(c);
    }
    ReceiverDecode d;
    d.receiver = r;
    d.desired = desired.size();
    std::tie(d.rank_full, d.rank_interference) = decode_ranks(g, other);
    d.decodable = d.rank_full == d.rank_interference + d.desired;
    rep.receivers.push_back(d);
  }
  return rep;
}

DecodeReport run_trial(const Scheme& scheme, std::uint64_t seed, ArithmeticMode mode) {
  switch (mode) {
    case ArithmeticMode::PrimeField: return trial<ModP>(scheme, seed);
    case ArithmeticMode::RationalRandom: return trial<Rational>(scheme, seed);
    case ArithmeticMode::ComplexFloat: return trial<Complex>(scheme, seed);
  }
  throw InternalError("unhandled arithmetic mode");
}

SimReport simulate(const Scheme& scheme, int trials, std::uint64_t seed, ArithmeticMode mode, int threads) {
  if (trials < 1) throw ParameterError("trials must be at least 1");
  const auto report = validate(scheme);
  if (!report.executable()) {
    for (const auto& issue : report.issues) {
      if (issue.kind != IssueKind::ZfCapacity) {
        throw InfeasibleError("slot " + std::to_string(issue.slot) + ": " + std::string(issue_kind_name(issue.kind)) +
                              ": " + issue.detail);
      }
    }
  }

  SimReport out;
  out.trials = trials;
  out.mode = mode;
  out.seed = seed;
  out.users = scheme.users;
  out.successes_per_receiver.assign(static_cast<std::size_t>(scheme.users), 0);
  out.nominal_dof = DofPoint(scheme.users);
  for (int r = 1; r <= scheme.users; ++r) {
    out.nominal_dof.set(UserSubset::of({r}),
                        Rational(BigInt(scheme.desired_columns(r).size()), BigInt(scheme.slots)));
  }

  const int workers = std::max(1, std::min(threads, trials));
  std::mutex lock;
  std::exception_ptr failure;
  auto work = [&](int first) {
    std::vector<int> local(static_cast<std::size_t>(scheme.users), 0);
    int full = 0;
    try {
      for (int i = first; i < trials; i += workers) {
        const auto d = run_trial(scheme, trial_seed(seed, static_cast<std::uint64_t>(i)), mode);
        for (const auto& r : d.receivers) {
          if (r.decodable) ++local[static_cast<std::size_t>(r.receiver - 1)];
        }
        if (d.all_decodable()) ++full;
      }
    } catch (...) {
      const std::lock_guard<std::mutex> g(lock);
      if (!failure) failure = std::current_exception();
      return;
    }
    const std::lock_guard<std::mutex> g(lock);
    for (std::size_t r = 0; r < local.size(); ++r) out.successes_per_receiver[r] += local[r];
    out.full_successes += full;
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  if (out.full_successes == trials) out.achieved_dof = out.nominal_dof;
  return out;
}

#define DOFLAB_INSTANTIATE(S)                                                                                  \
  template Channels<S> draw_channels_as<S>(const Scheme&, std::uint64_t);                                      \
  template PrecoderSet<S> make_precoders<S>(const Scheme&, const Channels<S>&, std::uint64_t);                 \
  template std::vector<S> expand_expr<S>(const Scheme&, const Expr&, const ObservationSet<S>&, int);           \
  template ObservationSet<S> expand<S>(const Scheme&, const Channels<S>&, const PrecoderSet<S>&);              \
  template S stream_gain<S>(const Channels<S>&, const PrecoderSet<S>&, int, std::size_t, int);                 \
  template bool decode_check<S>(const Matrix<S>&, const std::vector<std::size_t>&);                            \
  template std::size_t rank<S>(const Matrix<S>&);                                                              \
  template DecodeReport decode<S>(const Scheme&, const ObservationSet<S>&);

DOFLAB_INSTANTIATE(ModP)
DOFLAB_INSTANTIATE(Rational)
DOFLAB_INSTANTIATE(Complex)

#undef DOFLAB_INSTANTIATE

}  // namespace doflab
