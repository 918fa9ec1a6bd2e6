#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace gdoac {

// Quantization codebook U: one codeword per column, Q rows. Codeword indices
// are 0-based throughout the codebase.
struct QuantizationCodebook {
  Eigen::MatrixXd entries;  // Q x N

  int q() const { return static_cast<int>(entries.rows()); }
  int n() const { return static_cast<int>(entries.cols()); }
};

// Transmit sequence codebook P: one length-L sequence per column, entries
// i.i.d. N(0, 1/L) so every sequence has unit expected energy.
struct UmaCodebook {
  Eigen::MatrixXd entries;  // L x N

  int l() const { return static_cast<int>(entries.rows()); }
  int n() const { return static_cast<int>(entries.cols()); }
};

struct KMeansParams {
  int max_iters = 50;
  double tol = 1e-6;  // relative distortion-change threshold
  std::uint64_t seed = 0;
};

struct KMeansResult {
  QuantizationCodebook codebook;
  int iterations = 0;
  double distortion = 0.0;
  // True when the samples contain fewer distinct columns than requested
  // centroids, so duplicate codewords are unavoidable.
  bool degenerate = false;
  std::vector<double> distortion_history;
};

UmaCodebook generate_uma_codebook(int n, int l, std::uint64_t seed);

// Lloyd iterations with distance-weighted (k-means++) seeding. Empty clusters
// are reseeded with the sample column farthest from its assigned centroid.
KMeansResult kmeans_codebook(const Eigen::MatrixXd& samples, int n,
                             const KMeansParams& params);

// Index of the codeword with minimum squared Euclidean distance; ties break
// to the smallest index.
int nearest_codeword(const Eigen::Ref<const Eigen::VectorXd>& column,
                     const QuantizationCodebook& u);

}  // namespace gdoac
