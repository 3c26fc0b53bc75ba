#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nsg/models.hpp"

namespace nsg {

/// Q_n = sum_{1 <= s <= t <= n} a_{s,t} X_s X_t with a_{s,t} = 0 for t - s > D
/// and |a_{s,t}| <= 1.
class BandedQuadratic {
 public:
  BandedQuadratic(std::size_t n, std::size_t bandwidth);

  /// a_{s,t} = value for every 0 <= t - s <= D.
  static BandedQuadratic constant(std::size_t n, std::size_t bandwidth, double value);
  /// The form of half the block running variance: a_{s,s} = 1/2, and 1 for
  /// s < t in the same or adjacent blocks of length m. Bandwidth 2m.
  static BandedQuadratic brv_form(std::size_t n, std::size_t m);

  /// 1-based, s <= t. Throws on a band violation or |a| > 1.
  void set(std::size_t s, std::size_t t, double a);
  [[nodiscard]] double operator()(std::size_t s, std::size_t t) const;

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t bandwidth() const noexcept { return d_; }
  /// ceil(n / D).
  [[nodiscard]] std::size_t block_count() const noexcept { return (n_ + d_ - 1) / d_; }

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> a_;  // a_[(t-1)(D+1) + (t-s)]
};

struct QuadraticBlocks {
  std::vector<double> v;  ///< V_k = sum_{t in block k} sum_{s <= t} a_{s,t} X_s X_t, blocks of length D
  double q = 0.0;         ///< Q_n = sum_k V_k
};

[[nodiscard]] QuadraticBlocks quadratic_blocks(std::span<const double> x, const BandedQuadratic& q);

/// max_k |sum_{j<=k} (V_j - mean_j)|.
[[nodiscard]] double centered_max_process(std::span<const double> x, const BandedQuadratic& q,
                                          std::span<const double> mean_oracle);

/// E V_k from exact second moments.
[[nodiscard]] std::vector<double> exact_block_means(const BandedQuadratic& q, const CovarianceOracle& oracle);

/// E V_k estimated from `reps` independent model paths.
[[nodiscard]] std::vector<double> monte_carlo_block_means(const SimulableModel& model, const BandedQuadratic& q,
                                                          std::size_t reps, std::uint64_t seed);

/// `reps` draws of max_k |R_k| centred by `means`.
[[nodiscard]] std::vector<double> max_deviation_draws(const SimulableModel& model, const BandedQuadratic& q,
                                                      std::span<const double> means, std::size_t reps,
                                                      std::uint64_t seed);

struct TailTable {
  std::vector<double> x;
  std::vector<double> tail;            ///< empirical P(max_k |R_k| >= x)
  std::vector<double> standard_error;  ///< sqrt(p (1 - p) / reps)
};

/// Empirical tail of max_k |R_k| on x_grid. The block means come from a
/// separate Monte Carlo pre-pass of the same size.
[[nodiscard]] TailTable tail_study(const SimulableModel& model, const BandedQuadratic& q,
                                   std::span<const double> x_grid, std::size_t reps, std::uint64_t seed);

/// Tail table from precomputed draws.
[[nodiscard]] TailTable tail_table(std::span<const double> draws, std::span<const double> x_grid);

/// Least-squares slope and intercept of log tail on log x over points
/// first..end with positive tail.
struct LogLogFit {
  double slope;
  double intercept;
  std::size_t points;
};
[[nodiscard]] LogLogFit log_tail_fit(const TailTable& table, std::size_t first = 0);

/// Intercept of log tail = c - (p/2) log x fitted with the slope held at -p/2.
[[nodiscard]] double fixed_slope_intercept(const TailTable& table, double p);

/// True when tail(x) <= tail(x_0) (x_0 / x)^{p/2} at every grid point, x_0 the
/// first grid point.
[[nodiscard]] bool below_anchored_envelope(const TailTable& table, double p);

}  // namespace nsg
