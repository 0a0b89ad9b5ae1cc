#include "doflab/rates.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "doflab/error.hpp"

namespace doflab {
namespace {

// sum log2(1 + rho s_i^2) over singular values of the selected columns.
double log2det(const Matrix<Complex>& g, const std::vector<std::size_t>& cols, double rho) {
  if (cols.empty() || g.rows == 0) return 0.0;
  Eigen::MatrixXcd e(static_cast<Eigen::Index>(g.rows), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < g.rows; ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = g(i, cols[j]);
  }
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(e);
  double bits = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double s = svd.singularValues()(i);
    bits += std::log1p(rho * s * s) / std::log(2.0);
  }
  return bits;
}

}  // namespace

SnrPoint::SnrPoint(double power, int streams_per_slot) : power_(power), streams_(streams_per_slot) {
  if (!(power > 0) || !std::isfinite(power)) throw ParameterError("power must be positive and finite");
  if (streams_per_slot < 1) throw ParameterError("streams per slot must be at least 1");
}

SnrPoint SnrPoint::from_db(double db, int streams_per_slot) {
  return SnrPoint(std::pow(10.0, db / 10.0), streams_per_slot);
}

double mutual_info(const Matrix<Complex>& g, const std::vector<std::size_t>& desired, const SnrPoint& snr) {
  for (const auto& v : g.data) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericError("observation matrix has non-finite entries");
  }
  std::vector<bool> is_desired(g.cols, false);
  for (auto c : desired) {
    if (c >= g.cols) throw ParameterError("desired column " + std::to_string(c) + " out of range");
    is_desired[c] = true;
  }
  std::vector<std::size_t> all(g.cols);
  std::vector<std::size_t> other;
  for (std::size_t c = 0; c < g.cols; ++c) {
    all[c] = c;
    if (!is_desired[c]) other.push_back(c);
  }
  if (other.size() == g.cols) return 0.0;
  const double rho = snr.per_stream_power();
  const double v = log2det(g, all, rho) - log2det(g, other, rho);
  if (!std::isfinite(v)) throw NumericError("mutual information is not finite");
  return std::max(v, 0.0);
}

int max_streams_per_slot(const Scheme& scheme) {
  std::size_t m = 1;
  for (const auto& s : scheme.slot_streams) m = std::max(m, s.size());
  return static_cast<int>(m);
}

std::vector<ReceiverSlope> dof_slope(const Scheme& scheme, std::uint64_t seed, std::pair<double, double> snr_db) {
  auto [lo, hi] = snr_db;
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ParameterError("SNR values must be finite");
  if (lo == hi) throw ParameterError("SNR values must differ");
  if (lo < 40.0 || hi < 40.0) throw ParameterError("SNR values must be at least 40 dB");
  if (lo > hi) std::swap(lo, hi);

  const auto channels = draw_channels_as<Complex>(scheme, seed);
  const auto precoders = make_precoders(scheme, channels, precoder_seed(seed));
  const auto obs = expand(scheme, channels, precoders);
  const int streams = max_streams_per_slot(scheme);
  const SnrPoint p_lo = SnrPoint::from_db(lo, streams);
  const SnrPoint p_hi = SnrPoint::from_db(hi, streams);
  const double span = static_cast<double>(scheme.slots) * (hi - lo) / (10.0 * std::log10(2.0));

  std::vector<ReceiverSlope> out;
  for (int r = 1; r <= scheme.users; ++r) {
    const auto& g = obs.of(r);
    const auto desired = scheme.desired_columns(r);
    ReceiverSlope s;
    s.receiver = r;
    s.bits_low = mutual_info(g, desired, p_lo);
    s.bits_high = mutual_info(g, desired, p_hi);
    s.slope = (s.bits_high - s.bits_low) / span;
    s.rank_deficient = !decode_check(g, desired);
    out.push_back(s);
  }
  return out;
}

}  // namespace doflab
