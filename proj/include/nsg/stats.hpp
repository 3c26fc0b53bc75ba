#pragma once

#include <span>
#include <vector>

namespace nsg::stats {

[[nodiscard]] double mean(std::span<const double> x);
/// Unbiased sample variance; zero for fewer than two points.
[[nodiscard]] double variance(std::span<const double> x);
[[nodiscard]] double median(std::span<const double> x);

/// Linearly interpolated sample quantile (Hyndman-Fan type 7) of an already
/// sorted sample.
[[nodiscard]] double quantile_sorted(std::span<const double> sorted, double q);
[[nodiscard]] double quantile(std::span<const double> x, double q);

/// inf{ r : #{x > r} / N <= alpha }, the ceil(N (1 - alpha))-th order statistic.
[[nodiscard]] double upper_critical_value(std::span<const double> x, double alpha);

/// Two-sample Kolmogorov-Smirnov distance sup |F_a - F_b|.
[[nodiscard]] double ks_two_sample(std::span<const double> a, std::span<const double> b);

/// One-sample Kolmogorov-Smirnov distance from the U(0,1) law.
[[nodiscard]] double ks_uniform(std::span<const double> x);

/// Standard error sqrt(p (1 - p) / N) of an empirical frequency.
[[nodiscard]] double rate_standard_error(double p, std::size_t trials);

struct LineFit {
  double intercept;
  double slope;
};

/// Ordinary least squares fit of y on x.
[[nodiscard]] LineFit least_squares_line(std::span<const double> x, std::span<const double> y);

}  // namespace nsg::stats
