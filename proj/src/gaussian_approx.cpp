#include "nsg/gaussian_approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "nsg/stats.hpp"

namespace nsg {

namespace {

constexpr std::uint32_t kStageModel = 11;
constexpr std::uint32_t kStageTrack = 12;
constexpr std::uint32_t kStageCovariance = 13;

}  // namespace

TrackSampler::TrackSampler(std::span<const double> track) {
  const std::size_t n = track.size();
  std::vector<std::size_t> neg, pos;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(track[i])) throw std::invalid_argument("TrackSampler: non-finite track value");
    (track[i] < 0.0 ? neg : pos).push_back(i);
  }
  std::stable_sort(neg.begin(), neg.end(), [&](std::size_t a, std::size_t b) { return track[a] > track[b]; });
  std::stable_sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) { return track[a] < track[b]; });
  negatives_ = neg.size();
  order_ = std::move(neg);
  order_.insert(order_.end(), pos.begin(), pos.end());
  sd_.resize(n);
  double prev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == negatives_) prev = 0.0;
    const double v = std::abs(track[order_[k]]);
    sd_[k] = std::sqrt(std::max(v - prev, 0.0));
    prev = v;
  }
}

void TrackSampler::sample(Rng& rng, std::span<double> out) const {
  if (out.size() != order_.size()) throw std::invalid_argument("TrackSampler: output length mismatch");
  std::normal_distribution<double> z;
  double w = 0.0;
  for (std::size_t k = 0; k < order_.size(); ++k) {
    if (k == negatives_) w = 0.0;
    w += sd_[k] * z(rng);
    out[order_[k]] = w;
  }
}

std::vector<double> TrackSampler::sample(Rng& rng) const {
  std::vector<double> out(order_.size());
  sample(rng, out);
  return out;
}

GaussianPathSample sample_bm_at(const VarianceTrack& track, std::uint64_t seed) {
  const auto& v = track.values;
  if (v.empty()) throw std::invalid_argument("sample_bm_at: empty track");
  if (v[0] < 0.0) throw std::invalid_argument("sample_bm_at: negative track value");
  for (std::size_t j = 1; j < v.size(); ++j) {
    if (v[j] < v[j - 1]) {
      throw std::invalid_argument("sample_bm_at: decreasing track at index " + std::to_string(j + 1) +
                                  "; use sample_two_sided_bm_at");
    }
  }
  Rng rng(seed);
  return {TrackSampler(v).sample(rng), PathSource::bm_at_track};
}

GaussianPathSample sample_two_sided_bm_at(const VarianceTrack& track, std::uint64_t seed) {
  Rng rng(seed);
  return {TrackSampler(track.values).sample(rng), PathSource::two_sided_bm_at_track};
}

namespace {

// In-place lower Cholesky of a; returns -1 on success or the 0-based index of
// the first nonpositive pivot.
Eigen::Index cholesky_lower(Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= a(j, k) * a(j, k);
    if (!(d > 0.0)) return j;
    const double ljj = std::sqrt(d);
    a(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= a(i, k) * a(j, k);
      a(i, j) = s / ljj;
    }
  }
  a.triangularView<Eigen::StrictlyUpper>().setZero();
  return -1;
}

}  // namespace

CovarianceSampler::CovarianceSampler(const CovarianceOracle& oracle) {
  const Eigen::MatrixXd& c = oracle.matrix();
  const Eigen::Index n = c.rows();
  // Rows with zero variance are identically zero; factor the rest.
  std::vector<Eigen::Index> live;
  Eigen::VectorXd sd(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sd(i) = std::sqrt(c(i, i));
    if (c(i, i) > 0.0) live.push_back(i);
  }
  const auto k = static_cast<Eigen::Index>(live.size());
  Eigen::MatrixXd corr(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      corr(a, b) = c(live[a], live[b]) / (sd(live[a]) * sd(live[b]));
    }
  }
  Eigen::MatrixXd l;
  Eigen::Index failed = -1;
  for (double eps : {1e-10, 1e-8}) {
    l = corr;
    l.diagonal().array() += eps;  // trace/n of a correlation matrix is 1
    failed = cholesky_lower(l);
    if (failed < 0) {
      ridge_ = eps;
      break;
    }
  }
  if (failed >= 0) {
    throw NumericalError("CovarianceSampler: factorization failed at leading minor " +
                         std::to_string(live[failed] + 1) + " of " + std::to_string(n));
  }
  factor_ = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b <= a; ++b) factor_(live[a], live[b]) = sd(live[a]) * l(a, b);
  }
}

void CovarianceSampler::sample(Rng& rng, std::span<double> out) const {
  const Eigen::Index n = factor_.rows();
  if (out.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("CovarianceSampler: output length mismatch");
  std::normal_distribution<double> dist;
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = dist(rng);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j <= i; ++j) s += factor_(i, j) * z(j);
    out[static_cast<std::size_t>(i)] = s;
  }
}

std::vector<double> CovarianceSampler::sample(Rng& rng) const {
  std::vector<double> out(size());
  sample(rng, out);
  return out;
}

std::vector<double> CovarianceSampler::partial_sum_variance() const {
  const Eigen::Index n = factor_.rows();
  std::vector<double> out(static_cast<std::size_t>(n));
  Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += factor_.row(i);
    out[static_cast<std::size_t>(i)] = acc.squaredNorm();
  }
  return out;
}

GaussianPathSample covariance_matching_sample(const CovarianceOracle& oracle, std::uint64_t seed) {
  Rng rng(seed);
  return {CovarianceSampler(oracle).sample(rng), PathSource::covariance_matching};
}

double max_partial_sum(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("max_partial_sum: empty series");
  double s = 0.0, best = -std::numeric_limits<double>::infinity();
  for (double v : x) {
    s += v;
    best = std::max(best, s);
  }
  return best;
}

double max_partial_sum(const TimeSeries& x) { return max_partial_sum(x.values()); }

std::vector<double> default_quantile_grid() {
  std::vector<double> g;
  for (int k = 1; k <= 19; ++k) g.push_back(0.05 * k);
  return g;
}

double qq_discrepancy(const MaxStatisticSample& a, const MaxStatisticSample& b, std::span<const double> q_grid) {
  if (q_grid.empty()) throw std::invalid_argument("qq_discrepancy: empty quantile grid");
  if (a.draws.size() < 100 || b.draws.size() < 100) {
    throw std::invalid_argument("qq_discrepancy: each sample needs at least 100 draws");
  }
  std::vector<double> sa = a.draws, sb = b.draws;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  double d = 0.0;
  for (double q : q_grid) {
    if (!(q >= 0.01 && q <= 0.99)) throw std::invalid_argument("qq_discrepancy: quantile level outside [0.01, 0.99]");
    d = std::max(d, std::abs(stats::quantile_sorted(sa, q) - stats::quantile_sorted(sb, q)));
  }
  return d;
}

MaxStatisticSample max_statistic_model(const SimulableModel& model, std::size_t reps, std::uint64_t seed) {
  MaxStatisticSample out;
  out.draws.resize(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    Rng rng(seed, stream_id(kStageModel, r));
    out.draws[r] = max_partial_sum(model.simulate(rng));
  }
  return out;
}

MaxStatisticSample max_statistic_track(const VarianceTrack& track, std::size_t reps, std::uint64_t seed) {
  const TrackSampler sampler(track.values);
  MaxStatisticSample out;
  out.draws.resize(reps);
  std::vector<double> path(track.size());
  for (std::size_t r = 0; r < reps; ++r) {
    Rng rng(seed, stream_id(kStageTrack, r));
    sampler.sample(rng, path);
    out.draws[r] = *std::max_element(path.begin(), path.end());
  }
  return out;
}

MaxStatisticSample max_statistic_covariance(const CovarianceOracle& oracle, std::size_t reps, std::uint64_t seed) {
  const CovarianceSampler sampler(oracle);
  MaxStatisticSample out;
  out.draws.resize(reps);
  std::vector<double> y(oracle.size());
  for (std::size_t r = 0; r < reps; ++r) {
    Rng rng(seed, stream_id(kStageCovariance, r));
    sampler.sample(rng, y);
    out.draws[r] = max_partial_sum(y);
  }
  return out;
}

}  // namespace nsg
