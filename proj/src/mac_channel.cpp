#include "gdoac/mac_channel.hpp"

#include <cmath>
#include <stdexcept>

#include "gdoac/rng.hpp"

namespace gdoac {

double snr_to_sigma2(double snr_db) {
  return std::pow(10.0, -snr_db / 10.0);
}

Eigen::VectorXi build_equivalent_transmit(const std::vector<int>& indices,
                                          int n) {
  if (indices.empty()) {
    throw std::invalid_argument("build_equivalent_transmit: no devices");
  }
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(n);
  for (int idx : indices) {
    if (idx < 0 || idx >= n) {
      throw std::out_of_range("build_equivalent_transmit: index out of range");
    }
    ++counts(idx);
  }
  return counts;
}

TransmitResult transmit_round(const std::vector<QuantizedUpdate>& devices,
                              const UmaCodebook& p, const ChannelParams& ch,
                              std::uint64_t round_index) {
  if (devices.empty()) {
    throw std::invalid_argument("transmit_round: no active devices");
  }
  const std::size_t w_bar = devices.front().indices.size();
  const int pad_len = devices.front().pad_len;
  for (const auto& d : devices) {
    if (d.indices.size() != w_bar || d.pad_len != pad_len) {
      throw std::invalid_argument("transmit_round: devices disagree on W_bar");
    }
  }
  const int n = p.n();
  const int l = p.l();

  TransmitResult out;
  out.received.resize(l, static_cast<Eigen::Index>(w_bar));
  out.truth_counts.resize(n, static_cast<Eigen::Index>(w_bar));
  out.pad_len = pad_len;

  std::vector<int> chunk_indices(devices.size());
  for (std::size_t w = 0; w < w_bar; ++w) {
    for (std::size_t k = 0; k < devices.size(); ++k) {
      chunk_indices[k] = devices[k].indices[w];
    }
    const Eigen::VectorXi x = build_equivalent_transmit(chunk_indices, n);
    out.truth_counts.col(static_cast<Eigen::Index>(w)) = x;

    Eigen::VectorXd y = p.entries * x.cast<double>();
    if (ch.sigma2 > 0.0) {
      Rng rng(derive_seed(ch.seed, Stream::ChannelNoise, round_index, w));
      const double sd = std::sqrt(ch.sigma2);
      for (int i = 0; i < l; ++i) y(i) += sd * rng.normal();
    }
    out.received.col(static_cast<Eigen::Index>(w)) = y;
  }
  return out;
}

}  // namespace gdoac
