#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gdoac/codebooks.hpp"

namespace gdoac {

// Quantized model update: one 0-based codeword index per length-Q chunk,
// plus the number of zero-padded tail scalars appended when Q does not
// divide the update length.
struct QuantizedUpdate {
  std::vector<int> indices;
  int pad_len = 0;
};

struct ReshapedUpdate {
  Eigen::MatrixXd columns;  // Q x W_bar, column-major fill
  int pad_len = 0;
};

// Reshapes g into Q-row columns (column-major fill order, fixed so that
// transmitter and receiver agree). The final column is zero-padded when
// needed.
ReshapedUpdate reshape_update(const Eigen::VectorXd& g, int q);

QuantizedUpdate quantize_update(const Eigen::VectorXd& g,
                                const QuantizationCodebook& u);

// Concatenates the indexed codewords and drops the pad_len trailing scalars.
Eigen::VectorXd dequantize(const QuantizedUpdate& q,
                           const QuantizationCodebook& u);

}  // namespace gdoac
