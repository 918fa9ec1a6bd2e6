#include "gdoac/quantizer.hpp"

#include <stdexcept>

namespace gdoac {

ReshapedUpdate reshape_update(const Eigen::VectorXd& g, int q) {
  if (g.size() < 1 || q < 1) {
    throw std::invalid_argument("reshape_update: need W >= 1 and Q >= 1");
  }
  const Eigen::Index w = g.size();
  const Eigen::Index w_bar = (w + q - 1) / q;
  const int pad_len = static_cast<int>(w_bar * q - w);

  Eigen::MatrixXd columns = Eigen::MatrixXd::Zero(q, w_bar);
  Eigen::Map<Eigen::VectorXd>(columns.data(), w) = g;
  return ReshapedUpdate{std::move(columns), pad_len};
}

QuantizedUpdate quantize_update(const Eigen::VectorXd& g,
                                const QuantizationCodebook& u) {
  ReshapedUpdate reshaped = reshape_update(g, u.q());
  QuantizedUpdate out;
  out.pad_len = reshaped.pad_len;
  out.indices.resize(static_cast<std::size_t>(reshaped.columns.cols()));
  for (Eigen::Index c = 0; c < reshaped.columns.cols(); ++c) {
    out.indices[static_cast<std::size_t>(c)] =
        nearest_codeword(reshaped.columns.col(c), u);
  }
  return out;
}

Eigen::VectorXd dequantize(const QuantizedUpdate& q,
                           const QuantizationCodebook& u) {
  const int qq = u.q();
  const Eigen::Index w_bar = static_cast<Eigen::Index>(q.indices.size());
  if (q.pad_len < 0 || q.pad_len >= qq || w_bar * qq < q.pad_len) {
    throw std::invalid_argument("dequantize: pad_len out of range");
  }
  Eigen::VectorXd full(w_bar * qq);
  for (Eigen::Index c = 0; c < w_bar; ++c) {
    const int idx = q.indices[static_cast<std::size_t>(c)];
    if (idx < 0 || idx >= u.n()) {
      throw std::out_of_range("dequantize: codeword index out of range");
    }
    full.segment(c * qq, qq) = u.entries.col(idx);
  }
  return full.head(full.size() - q.pad_len);
}

}  // namespace gdoac
