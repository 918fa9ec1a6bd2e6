#include "gdoac/amp_da.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

namespace gdoac {

namespace {

constexpr double kIndicatorClampLo = 1e-8;
constexpr double kIndicatorClampHi = 1.0 - 1e-8;

}  // namespace

Posterior denoise_posterior(double r, double phi, double a, int k_max) {
  const double inv_2phi = 0.5 / phi;
  const double log_zero = a < 1.0 ? std::log1p(-a) : -std::numeric_limits<double>::infinity();
  const double log_active =
      a > 0.0 ? std::log(a) - std::log(static_cast<double>(k_max))
              : -std::numeric_limits<double>::infinity();

  double lw_max = log_zero - r * r * inv_2phi;
  std::vector<double> lw(static_cast<std::size_t>(k_max) + 1);
  lw[0] = lw_max;
  for (int s = 1; s <= k_max; ++s) {
    const double d = r - static_cast<double>(s);
    lw[static_cast<std::size_t>(s)] = log_active - d * d * inv_2phi;
    lw_max = std::max(lw_max, lw[static_cast<std::size_t>(s)]);
  }

  double norm = 0.0, mean_acc = 0.0;
  for (int s = 0; s <= k_max; ++s) {
    const double w = std::exp(lw[static_cast<std::size_t>(s)] - lw_max);
    lw[static_cast<std::size_t>(s)] = w;  // reuse as linear weight
    norm += w;
    mean_acc += static_cast<double>(s) * w;
  }

  Posterior post;
  post.mean = mean_acc / norm;
  double var_acc = 0.0, nz_acc = 0.0;
  for (int s = 0; s <= k_max; ++s) {
    const double w = lw[static_cast<std::size_t>(s)];
    const double d = static_cast<double>(s) - post.mean;
    var_acc += w * d * d;
    if (s >= 1) nz_acc += w;
  }
  post.variance = var_acc / norm;
  post.p_nonzero = nz_acc / norm;
  return post;
}

AmpState amp_chunk_init(const Eigen::VectorXd& y, int n,
                        const AmpParams& params) {
  AmpState s;
  s.r = Eigen::VectorXd::Zero(n);
  s.phi = Eigen::VectorXd::Ones(n);
  s.big_v = Eigen::VectorXd::Ones(y.size());
  s.big_z = y;
  s.x_hat = Eigen::VectorXd::Zero(n);
  s.v_hat = Eigen::VectorXd::Ones(n);
  s.a = Eigen::VectorXd::Constant(n, params.a_init);
  s.iter = 0;
  return s;
}

bool amp_chunk_iterate(AmpState& state, const Eigen::VectorXd& y,
                       const Eigen::MatrixXd& p, const Eigen::MatrixXd& p_sq,
                       double sigma2, const AmpParams& params) {
  const double floor = params.variance_floor;
  const double tau = params.damping;

  const Eigen::VectorXd den_prev =
      (state.big_v.array() + sigma2).max(floor).matrix();

  Eigen::VectorXd v_fresh = p_sq * state.v_hat;
  Eigen::VectorXd z_fresh =
      p * state.x_hat -
      (v_fresh.array() * (y - state.big_z).array() / den_prev.array()).matrix();

  Eigen::VectorXd big_v = tau * state.big_v + (1.0 - tau) * v_fresh;
  Eigen::VectorXd big_z = tau * state.big_z + (1.0 - tau) * z_fresh;

  const Eigen::VectorXd den = (big_v.array() + sigma2).max(floor).matrix();
  const Eigen::VectorXd inv_den = den.cwiseInverse();

  Eigen::VectorXd phi =
      (p_sq.transpose() * inv_den).cwiseInverse().cwiseMax(floor);
  Eigen::VectorXd resid = ((y - big_z).array() * inv_den.array()).matrix();
  Eigen::VectorXd r = state.x_hat + phi.cwiseProduct(p.transpose() * resid);

  if (!big_v.allFinite() || !big_z.allFinite() || !phi.allFinite() ||
      !r.allFinite()) {
    return false;
  }

  Eigen::VectorXd x_hat(state.x_hat.size());
  Eigen::VectorXd v_hat(state.v_hat.size());
  Eigen::VectorXd a(state.a.size());
  for (Eigen::Index idx = 0; idx < r.size(); ++idx) {
    const Posterior post =
        denoise_posterior(r(idx), phi(idx), state.a(idx), params.k_max);
    x_hat(idx) = post.mean;
    v_hat(idx) = post.variance;
    a(idx) = std::clamp(post.p_nonzero, kIndicatorClampLo, kIndicatorClampHi);
  }
  if (!x_hat.allFinite() || !v_hat.allFinite()) return false;

  state.big_v = std::move(big_v);
  state.big_z = std::move(big_z);
  state.phi = std::move(phi);
  state.r = std::move(r);
  state.x_hat = std::move(x_hat);
  state.v_hat = std::move(v_hat);
  state.a = std::move(a);
  ++state.iter;
  return true;
}

namespace {

ChunkDetection detect_chunk_impl(const Eigen::VectorXd& y,
                                 const Eigen::MatrixXd& p,
                                 const Eigen::MatrixXd& p_sq, double sigma2,
                                 const AmpParams& params) {
  const int n = static_cast<int>(p.cols());
  AmpState state = amp_chunk_init(y, n, params);

  ChunkDetection out;
  Eigen::VectorXd x_prev = state.x_hat;
  // The reference iteration counter starts at 1 and runs to T0, so at most
  // T0 - 1 sweeps happen.
  for (int i = 2; i <= params.max_iters; ++i) {
    if (!amp_chunk_iterate(state, y, p, p_sq, sigma2, params)) {
      out.diverged = true;
      break;
    }
    const double prev_norm = x_prev.norm();
    const double change = (state.x_hat - x_prev).norm();
    x_prev = state.x_hat;
    if (prev_norm > 0.0) {
      out.final_rel_change = change / prev_norm;
      if (out.final_rel_change < params.epsilon) {
        out.converged = true;
        break;
      }
    }
  }
  out.x_hat = state.x_hat;
  out.iterations = state.iter;
  return out;
}

}  // namespace

ChunkDetection detect_chunk(const Eigen::VectorXd& y, const UmaCodebook& p,
                            double sigma2, const AmpParams& params) {
  if (y.size() != p.entries.rows()) {
    throw std::invalid_argument("detect_chunk: y length != L");
  }
  const Eigen::MatrixXd p_sq = p.entries.cwiseAbs2();
  return detect_chunk_impl(y, p.entries, p_sq, sigma2, params);
}

DetectionResult detect_all(const Eigen::MatrixXd& y, const UmaCodebook& p,
                           double sigma2, const AmpParams& params) {
  if (y.cols() < 1) throw std::invalid_argument("detect_all: W_bar >= 1 required");
  if (y.rows() != p.entries.rows()) {
    throw std::invalid_argument("detect_all: row count != L");
  }
  const int n = p.n();
  const Eigen::Index w_bar = y.cols();
  const Eigen::MatrixXd p_sq = p.entries.cwiseAbs2();

  DetectionResult result;
  result.x_hat.resize(n, w_bar);
  result.iterations.assign(static_cast<std::size_t>(w_bar), 0);
  result.converged.assign(static_cast<std::size_t>(w_bar), 0);
  result.diverged.assign(static_cast<std::size_t>(w_bar), 0);
  result.rel_change.assign(static_cast<std::size_t>(w_bar), 0.0);

  const auto run_range = [&](Eigen::Index begin, Eigen::Index end) {
    for (Eigen::Index w = begin; w < end; ++w) {
      ChunkDetection det =
          detect_chunk_impl(y.col(w), p.entries, p_sq, sigma2, params);
      result.x_hat.col(w) = det.x_hat;
      result.iterations[static_cast<std::size_t>(w)] = det.iterations;
      result.converged[static_cast<std::size_t>(w)] = det.converged ? 1 : 0;
      result.diverged[static_cast<std::size_t>(w)] = det.diverged ? 1 : 0;
      result.rel_change[static_cast<std::size_t>(w)] = det.final_rel_change;
    }
  };

  int threads = params.threads > 0
                    ? params.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(w_bar)));
  if (threads == 1) {
    run_range(0, w_bar);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    const Eigen::Index step = (w_bar + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const Eigen::Index begin = t * step;
      const Eigen::Index end = std::min<Eigen::Index>(begin + step, w_bar);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  double change_sum = 0.0;
  for (double c : result.rel_change) change_sum += c;
  result.mean_rel_change = change_sum / static_cast<double>(w_bar);
  return result;
}

int estimate_ka(const DetectionResult& result) {
  if (result.x_hat.cols() < 1) {
    throw std::invalid_argument("estimate_ka: no chunks");
  }
  std::map<long long, int> votes;
  for (Eigen::Index w = 0; w < result.x_hat.cols(); ++w) {
    const double sum = result.x_hat.col(w).sum();  // entries are nonnegative
    const long long rounded =
        static_cast<long long>(std::floor(sum + 0.5));
    ++votes[rounded];
  }
  long long best_value = 0;
  int best_count = -1;
  for (const auto& [value, count] : votes) {
    if (count > best_count) {  // std::map iterates in ascending key order,
      best_count = count;      // so ties keep the smallest value
      best_value = value;
    }
  }
  return static_cast<int>(std::max(1LL, best_value));
}

Eigen::VectorXd aggregate(const DetectionResult& result,
                          const QuantizationCodebook& u, int ka_hat,
                          int pad_len) {
  if (ka_hat < 1) throw std::invalid_argument("aggregate: ka_hat >= 1 required");
  if (u.n() != result.x_hat.rows()) {
    throw std::invalid_argument("aggregate: codebook/detection size mismatch");
  }
  if (pad_len < 0 || pad_len >= u.q()) {
    throw std::invalid_argument("aggregate: pad_len out of range");
  }
  const Eigen::MatrixXd chunks =
      (u.entries * result.x_hat) / static_cast<double>(ka_hat);  // Q x W_bar
  const Eigen::Index total = chunks.size();
  Eigen::VectorXd g(total);
  Eigen::Map<Eigen::VectorXd>(g.data(), total) =
      Eigen::Map<const Eigen::VectorXd>(chunks.data(), total);
  return g.head(total - pad_len);
}

}  // namespace gdoac
