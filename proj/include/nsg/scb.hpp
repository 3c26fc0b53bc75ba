#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nsg/core.hpp"

namespace nsg {

enum class KernelKind { epanechnikov, jackknife_corrected };

/// Symmetric kernel supported on [-omega, omega].
struct KernelSpec {
  KernelKind kind = KernelKind::epanechnikov;
  double omega = 1.0;

  /// K(x) = 0.75 (1 - x^2) on [-1, 1].
  static KernelSpec epanechnikov();
  /// K*(x) = 2 K(x) - K(x / sqrt 2) / sqrt 2 on [-sqrt 2, sqrt 2].
  static KernelSpec jackknife_corrected();

  [[nodiscard]] double operator()(double x) const noexcept;
};

/// S_j(t) = sum_i (t - t_i)^j K((t - t_i) / h).
[[nodiscard]] double kernel_moment_sum(std::span<const double> grid, double t, double h,
                                       const KernelSpec& kernel, int j);

/// Nonzero stretch of a weight vector: values for indices first..first+size-1 (0-based).
struct SparseWeights {
  std::size_t first = 0;
  std::vector<double> values;

  [[nodiscard]] double apply(std::span<const double> x) const noexcept;
};

/// Local-linear weights restricted to the kernel window around t.
/// Throws NumericalError naming t when S_2 S_0 - S_1^2 vanishes.
[[nodiscard]] SparseWeights local_linear_window(std::span<const double> grid, double t, double h,
                                                const KernelSpec& kernel);

/// w_h(t, i) = K((t - t_i)/h) (S_2 - (t - t_i) S_1) / (S_2 S_0 - S_1^2), as a dense vector.
[[nodiscard]] std::vector<double> local_linear_weights(std::span<const double> grid, double t, double h,
                                                       const KernelSpec& kernel);

/// Jackknife weights 2 w_h(t, .) - w_{h sqrt 2}(t, .).
[[nodiscard]] SparseWeights jackknife_window(std::span<const double> grid, double t, double h,
                                             const KernelSpec& kernel = KernelSpec::epanechnikov());

/// The local-linear weights as a weight family over `grid`.
[[nodiscard]] WeightFamily local_linear_family(std::vector<double> grid, double h, const KernelSpec& kernel);

/// mu_hat(t) = sum_i w_h(t, i) x_i on the series grid (i/n when none is attached).
[[nodiscard]] std::vector<double> local_linear_fit(const TimeSeries& x, double h, const KernelSpec& kernel,
                                                   std::span<const double> t_eval);

/// 2 mu_hat_h(t) - mu_hat_{h sqrt 2}(t).
[[nodiscard]] std::vector<double> jackknife_fit(const TimeSeries& x, double h, std::span<const double> t_eval);

/// n^{-3/4} <= h <= n^{-3/16}.
[[nodiscard]] bool bandwidth_in_guidance(std::size_t n, double h);

/// Window of grid points where the band is reported and over which the
/// bootstrap maximum is taken. The default is the whole grid; coverage is
/// usually assessed on a narrower window through band_contains.
struct ScbOptions {
  double lo = 0.0;
  double hi = 1.0;
};

struct BandResult {
  std::vector<double> t_eval;
  std::vector<double> mu_tilde;
  double half_width = 0.0;
  double trim_lo = 0.0;
  double trim_hi = 1.0;
  std::vector<double> residuals;  ///< x_i - mu_tilde(t_i) over the whole grid
  bool bandwidth_warning = false;
  std::optional<bool> contains_truth;
};

/// Jackknife local-linear fit with a bootstrap simultaneous band of constant
/// half width q_{1-alpha}: the (1-alpha) quantile over B draws of
/// max_{t in window} |sum_i w~(t, i) (W(T_i) - W(T_{i-1}))| with T = brv(residuals, m).
[[nodiscard]] BandResult scb_build(const TimeSeries& x, double h, std::size_t m, double alpha,
                                   std::size_t bootstrap, std::uint64_t seed, const ScbOptions& options = {});

/// |mu_tilde(t) - truth(t)| <= half_width for every evaluation point in [lo, hi].
[[nodiscard]] bool band_contains(const BandResult& band, const std::function<double(double)>& truth,
                                 double lo, double hi);

/// mu(t) = a_0 t + sum_k (a_k sin(2 pi t f_k) + b_k cos(2 pi t f_k)), f_k = period_k / range.
struct HarmonicFit {
  std::vector<double> coefficients;  ///< a_0, a_1, b_1, a_2, b_2, ...
  std::vector<double> frequencies;

  [[nodiscard]] double operator()(double t) const;
};

/// Least-squares fit on the series grid. Throws NumericalError for a
/// rank-deficient design.
[[nodiscard]] HarmonicFit fit_harmonic_trend(const TimeSeries& x, std::span<const double> periods,
                                             double range = 1.0);

}  // namespace nsg
