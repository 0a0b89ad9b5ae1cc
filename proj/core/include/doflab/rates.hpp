#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "doflab/engine.hpp"
#include "doflab/scheme.hpp"

namespace doflab {

/// Total transmit power P (linear) split evenly over the streams of a slot.
class SnrPoint {
 public:
  /// Throws ParameterError unless power > 0 and streams_per_slot >= 1.
  SnrPoint(double power, int streams_per_slot = 1);
  static SnrPoint from_db(double db, int streams_per_slot = 1);

  double power() const noexcept { return power_; }
  int streams_per_slot() const noexcept { return streams_; }
  double per_stream_power() const noexcept { return power_ / streams_; }

 private:
  double power_;
  int streams_;
};

/// log2 det(I + rho G G^H) - log2 det(I + rho G_int G_int^H), rho the per-stream power and
/// G_int the non-desired columns. Throws NumericError on non-finite input.
double mutual_info(const Matrix<Complex>& g, const std::vector<std::size_t>& desired, const SnrPoint& snr);

struct ReceiverSlope {
  int receiver = 0;
  double bits_low = 0;   // mutual information at the lower SNR, bits per frame
  double bits_high = 0;  // at the higher SNR
  double slope = 0;      // DoF estimate
  bool rank_deficient = false;
};

/// Largest number of streams in any slot, at least 1.
int max_streams_per_slot(const Scheme& scheme);

/// Finite-difference pre-log per receiver on one float-mode realization:
/// (I(P2) - I(P1)) / (T (log2 P2 - log2 P1)). Both SNRs must be at least 40 dB and distinct.
std::vector<ReceiverSlope> dof_slope(const Scheme& scheme, std::uint64_t seed, std::pair<double, double> snr_db);

}  // namespace doflab
