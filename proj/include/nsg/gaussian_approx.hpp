#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nsg/core.hpp"
#include "nsg/models.hpp"
#include "nsg/random.hpp"
#include "nsg/variance.hpp"

namespace nsg {

enum class PathSource { bm_at_track, two_sided_bm_at_track, covariance_matching };

struct GaussianPathSample {
  std::vector<double> values;
  PathSource source;
};

/// One max-type statistic per replication.
struct MaxStatisticSample {
  std::vector<double> draws;
};

/// Two-sided Brownian motion W(v) = B_1(v) 1{v >= 0} + B_2(-v) 1{v < 0}
/// evaluated jointly at a fixed set of points.
///
/// The points are sorted once; each draw then costs one normal per point.
/// Equal points receive equal values.
class TrackSampler {
 public:
  explicit TrackSampler(std::span<const double> track);

  [[nodiscard]] std::size_t size() const noexcept { return order_.size(); }
  void sample(Rng& rng, std::span<double> out) const;
  [[nodiscard]] std::vector<double> sample(Rng& rng) const;

 private:
  std::vector<std::size_t> order_;  // negative points by |v| ascending, then the rest ascending
  std::vector<double> sd_;          // standard deviation of the increment feeding order_[k]
  std::size_t negatives_ = 0;
};

/// B(track_j) for a nondecreasing, nonnegative track.
[[nodiscard]] GaussianPathSample sample_bm_at(const VarianceTrack& track, std::uint64_t seed);
/// W(track_j) for a track of arbitrary signs and order.
[[nodiscard]] GaussianPathSample sample_two_sided_bm_at(const VarianceTrack& track, std::uint64_t seed);

/// Gaussian vector with a prescribed covariance, built from a lower-triangular
/// factor of the correlation matrix rescaled by the standard deviations.
class CovarianceSampler {
 public:
  /// Throws NumericalError naming the first failing leading minor when the
  /// factorization fails even after the ridge retry.
  explicit CovarianceSampler(const CovarianceOracle& oracle);

  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(factor_.rows()); }
  [[nodiscard]] const Eigen::MatrixXd& factor() const noexcept { return factor_; }
  [[nodiscard]] double ridge() const noexcept { return ridge_; }

  void sample(Rng& rng, std::span<double> out) const;
  [[nodiscard]] std::vector<double> sample(Rng& rng) const;

  /// Var(Y_1 + ... + Y_i) implied by the factor, i = 1..n.
  [[nodiscard]] std::vector<double> partial_sum_variance() const;

 private:
  Eigen::MatrixXd factor_;
  double ridge_ = 0.0;
};

[[nodiscard]] GaussianPathSample covariance_matching_sample(const CovarianceOracle& oracle,
                                                            std::uint64_t seed);

/// max_j S_j (signed).
[[nodiscard]] double max_partial_sum(std::span<const double> x);
[[nodiscard]] double max_partial_sum(const TimeSeries& x);

/// 0.05, 0.10, ..., 0.95.
[[nodiscard]] std::vector<double> default_quantile_grid();

/// max over q_grid of |Q_a(q) - Q_b(q)|; both samples need at least 100 draws.
[[nodiscard]] double qq_discrepancy(const MaxStatisticSample& a, const MaxStatisticSample& b,
                                    std::span<const double> q_grid);

/// max partial sums of `reps` model paths.
[[nodiscard]] MaxStatisticSample max_statistic_model(const SimulableModel& model, std::size_t reps,
                                                     std::uint64_t seed);
/// max_j B(track_j) over `reps` draws (two-sided sampler, so any track is accepted).
[[nodiscard]] MaxStatisticSample max_statistic_track(const VarianceTrack& track, std::size_t reps,
                                                     std::uint64_t seed);
/// max partial sums of `reps` covariance-matching Gaussian paths.
[[nodiscard]] MaxStatisticSample max_statistic_covariance(const CovarianceOracle& oracle,
                                                          std::size_t reps, std::uint64_t seed);

}  // namespace nsg
