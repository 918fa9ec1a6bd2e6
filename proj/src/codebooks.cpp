#include "gdoac/codebooks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gdoac/rng.hpp"

namespace gdoac {

UmaCodebook generate_uma_codebook(int n, int l, std::uint64_t seed) {
  if (n < 2 || l < 1) {
    throw std::invalid_argument("generate_uma_codebook: need n >= 2 and l >= 1");
  }
  Rng rng(derive_seed(seed, Stream::UmaCodebook));
  const double scale = 1.0 / std::sqrt(static_cast<double>(l));
  Eigen::MatrixXd p(l, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < l; ++r) {
      p(r, c) = scale * rng.normal();
    }
  }
  return UmaCodebook{std::move(p)};
}

int nearest_codeword(const Eigen::Ref<const Eigen::VectorXd>& column,
                     const QuantizationCodebook& u) {
  if (column.size() != u.entries.rows()) {
    throw std::invalid_argument("nearest_codeword: column length != Q");
  }
  int best = 0;
  double best_d = (column - u.entries.col(0)).squaredNorm();
  for (int j = 1; j < u.n(); ++j) {
    const double d = (column - u.entries.col(j)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  return best;
}

namespace {

// Squared distances from every sample column to every centroid via the
// expansion ||s-c||^2 = ||s||^2 + ||c||^2 - 2 c^T s. Returns per-sample
// argmin (ties to smallest index) and the assigned squared distance.
void assign_clusters(const Eigen::MatrixXd& samples,
                     const Eigen::VectorXd& sample_sq,
                     const Eigen::MatrixXd& centroids,
                     std::vector<int>& assign, Eigen::VectorXd& dist) {
  const Eigen::Index m = samples.cols();
  const Eigen::VectorXd cent_sq = centroids.colwise().squaredNorm();
  // cross(j, i) = c_j^T s_i
  const Eigen::MatrixXd cross = centroids.transpose() * samples;
  for (Eigen::Index i = 0; i < m; ++i) {
    int best = 0;
    double best_d = cent_sq(0) - 2.0 * cross(0, i);
    for (Eigen::Index j = 1; j < centroids.cols(); ++j) {
      const double d = cent_sq(j) - 2.0 * cross(j, i);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    assign[static_cast<std::size_t>(i)] = best;
    dist(i) = std::max(0.0, best_d + sample_sq(i));
  }
}

Eigen::MatrixXd plusplus_seeding(const Eigen::MatrixXd& samples, int n,
                                 Rng& rng) {
  const Eigen::Index m = samples.cols();
  Eigen::MatrixXd centroids(samples.rows(), n);
  const auto first = rng.uniform_int(0, m - 1);
  centroids.col(0) = samples.col(first);

  Eigen::VectorXd d2(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    d2(i) = (samples.col(i) - centroids.col(0)).squaredNorm();
  }
  for (int j = 1; j < n; ++j) {
    const double total = d2.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      double acc = 0.0;
      pick = m - 1;
      for (Eigen::Index i = 0; i < m; ++i) {
        acc += d2(i);
        if (acc >= target) {
          pick = i;
          break;
        }
      }
    } else {
      // All remaining distances are zero (duplicated samples); fall back to
      // a uniform pick.
      pick = rng.uniform_int(0, m - 1);
    }
    centroids.col(j) = samples.col(pick);
    for (Eigen::Index i = 0; i < m; ++i) {
      d2(i) = std::min(d2(i), (samples.col(i) - centroids.col(j)).squaredNorm());
    }
  }
  return centroids;
}

}  // namespace

KMeansResult kmeans_codebook(const Eigen::MatrixXd& samples, int n,
                             const KMeansParams& params) {
  const Eigen::Index m = samples.cols();
  if (n < 1) throw std::invalid_argument("kmeans_codebook: n >= 1 required");
  if (m < n) {
    throw std::invalid_argument("kmeans_codebook: need at least n sample columns");
  }
  if (!samples.allFinite()) {
    throw std::invalid_argument("kmeans_codebook: non-finite samples");
  }
  if (params.max_iters < 1 || params.tol <= 0.0) {
    throw std::invalid_argument("kmeans_codebook: invalid params");
  }

  Rng rng(derive_seed(params.seed, Stream::KmeansInit));
  Eigen::MatrixXd centroids = plusplus_seeding(samples, n, rng);
  const Eigen::VectorXd sample_sq = samples.colwise().squaredNorm();

  std::vector<int> assign(static_cast<std::size_t>(m), 0);
  Eigen::VectorXd dist(m);
  std::vector<double> history;
  double prev_distortion = std::numeric_limits<double>::infinity();
  int iters = 0;

  assign_clusters(samples, sample_sq, centroids, assign, dist);
  for (int it = 0; it < params.max_iters; ++it) {
    iters = it + 1;

    // Mean update.
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(samples.rows(), n);
    std::vector<int> counts(static_cast<std::size_t>(n), 0);
    for (Eigen::Index i = 0; i < m; ++i) {
      const int j = assign[static_cast<std::size_t>(i)];
      sums.col(j) += samples.col(i);
      ++counts[static_cast<std::size_t>(j)];
    }
    std::vector<int> empties;
    for (int j = 0; j < n; ++j) {
      if (counts[static_cast<std::size_t>(j)] > 0) {
        centroids.col(j) = sums.col(j) / counts[static_cast<std::size_t>(j)];
      } else {
        empties.push_back(j);
      }
    }
    if (!empties.empty()) {
      // Reseed each empty cluster with the sample farthest from its assigned
      // centroid, using distinct samples when several clusters are empty.
      std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        if (dist(a) != dist(b)) return dist(a) > dist(b);
        return a < b;
      });
      std::size_t next = 0;
      for (int j : empties) {
        if (next < order.size()) {
          centroids.col(j) = samples.col(order[next]);
          ++next;
        }
      }
    }

    assign_clusters(samples, sample_sq, centroids, assign, dist);
    const double distortion = m > 0 ? dist.sum() / static_cast<double>(m) : 0.0;
    history.push_back(distortion);

    if (std::isfinite(prev_distortion)) {
      const double denom = std::max(prev_distortion, 1e-300);
      if (std::abs(prev_distortion - distortion) / denom < params.tol) {
        prev_distortion = distortion;
        break;
      }
    }
    prev_distortion = distortion;
  }

  bool degenerate = false;
  for (int a = 0; a < n && !degenerate; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (centroids.col(a) == centroids.col(b)) {
        degenerate = true;
        break;
      }
    }
  }

  KMeansResult result;
  result.codebook = QuantizationCodebook{std::move(centroids)};
  result.iterations = iters;
  result.distortion = prev_distortion;
  result.degenerate = degenerate;
  result.distortion_history = std::move(history);
  return result;
}

}  // namespace gdoac
