#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gdoac/codebooks.hpp"
#include "gdoac/quantizer.hpp"

namespace gdoac {

// Real-valued post-equalization channel. With perfect downlink channel
// estimates the per-device fading factor cancels to exactly 1, so only the
// additive noise variance matters here.
struct ChannelParams {
  double sigma2 = 0.0;  // 0 is valid for noiseless tests
  std::uint64_t seed = 0;
};

// sigma2 = 10^(-snr_db/10) under unit expected sequence energy.
double snr_to_sigma2(double snr_db);

// Per-chunk histogram: counts[n] = number of devices that selected codeword
// n. The l1 norm equals the number of active devices.
Eigen::VectorXi build_equivalent_transmit(const std::vector<int>& indices,
                                          int n);

struct TransmitResult {
  Eigen::MatrixXd received;      // L x W_bar
  Eigen::MatrixXi truth_counts;  // N x W_bar, for evaluation only
  int pad_len = 0;
};

// y_wbar = P x_wbar + z_wbar with z i.i.d. N(0, sigma2). Noise is drawn from
// a per-chunk seed derived from (seed, round_index, chunk), so chunks are
// independent and the result does not depend on evaluation order. The truth
// counts ride along for metrics; the detector API never sees them.
TransmitResult transmit_round(const std::vector<QuantizedUpdate>& devices,
                              const UmaCodebook& p, const ChannelParams& ch,
                              std::uint64_t round_index = 0);

}  // namespace gdoac
