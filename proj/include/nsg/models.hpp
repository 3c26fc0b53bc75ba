#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nsg/core.hpp"
#include "nsg/random.hpp"

namespace nsg {

enum class InnovationKind { standard_normal, scaled_t, centered_chisq1 };

/// Law of the i.i.d. innovations driving a model.
struct InnovationSpec {
  InnovationKind kind = InnovationKind::standard_normal;
  int df = 0;           ///< degrees of freedom for scaled_t, > 2
  double scale = 1.0;   ///< multiplier applied to the t draw
  std::uint64_t seed_offset = 0;  ///< stream id used for the innovation draws

  static InnovationSpec normal();
  /// Student t with `df` degrees of freedom scaled to unit variance.
  static InnovationSpec unit_t(int df);
  /// chi^2_1 - 1: mean zero, variance two.
  static InnovationSpec centered_chisq1();

  [[nodiscard]] double variance() const;
  void validate() const;
};

void draw_innovations(const InnovationSpec& spec, Rng& rng, std::span<double> out);

/// Time-varying AR coefficients theta_1..theta_n, each |theta_t| < 1.
struct ThetaPath {
  std::vector<double> coefficients;

  explicit ThetaPath(std::vector<double> c);
  [[nodiscard]] std::size_t size() const noexcept { return coefficients.size(); }
};

enum class ThetaKind {
  constant,    ///< theta_t = theta
  split_sign,  ///< theta for t <= n/2, -theta afterwards
  piecewise4,  ///< theta * (0.75, -0.75, 0.75, -0.75) over quarters
  sine8pi,     ///< theta * sin(8 pi t / n)
};

[[nodiscard]] ThetaPath theta_path(ThetaKind kind, double theta, std::size_t n);

/// Exact second-order structure of a linear model.
class CovarianceOracle {
 public:
  /// Validates symmetry, a nonnegative diagonal and PSD-ness
  /// (smallest eigenvalue >= -1e-8 trace / n).
  explicit CovarianceOracle(Eigen::MatrixXd cov);

  [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(cov_.rows()); }
  [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return cov_; }
  /// 1-based access Cov(X_s, X_t).
  [[nodiscard]] double operator()(std::size_t s, std::size_t t) const {
    return cov_(static_cast<Eigen::Index>(s - 1), static_cast<Eigen::Index>(t - 1));
  }

 private:
  Eigen::MatrixXd cov_;
};

/// An innovation-driven data-generating process. `transform` maps the
/// innovation vector (presample entries first, then eps_1..eps_n) to X_1..X_n.
/// Coupling-based estimators perturb single innovations and replay `transform`.
struct SimulableModel {
  std::size_t n = 0;
  std::size_t presample = 0;
  InnovationSpec innovations;
  std::function<std::vector<double>(std::span<const double> eps)> transform;

  [[nodiscard]] std::vector<double> simulate(Rng& rng) const;
  [[nodiscard]] std::vector<double> simulate(std::uint64_t seed) const;
};

/// X_t = theta_t X_{t-1} + eps_t with X_0 = 0.
[[nodiscard]] std::vector<double> tvar_recursion(const ThetaPath& path, std::span<const double> eps);
[[nodiscard]] SimulableModel tvar_model(const ThetaPath& path, const InnovationSpec& innov);
/// sin of a time-varying AR path.
[[nodiscard]] SimulableModel sine_tvar_model(const ThetaPath& path, const InnovationSpec& innov);

[[nodiscard]] TimeSeries simulate_tvar(const ThetaPath& path, const InnovationSpec& innov,
                                       std::uint64_t seed);
[[nodiscard]] TimeSeries simulate_tvar(const ThetaPath& path, const InnovationSpec& innov, Rng& rng);

[[nodiscard]] TimeSeries sine_transform(const TimeSeries& x);

/// Cov(X_s, X_t) of the time-varying AR with X_0 = 0, via the MA representation.
[[nodiscard]] CovarianceOracle tvar_covariance(const ThetaPath& path, double innov_var);

/// Var(S_j), j = 1..n, of the time-varying AR in O(n), without forming the
/// covariance matrix.
[[nodiscard]] std::vector<double> tvar_partial_variance(const ThetaPath& path, double innov_var);

/// out_i = x_i + delta 1{i > tau}, 1 <= tau < n.
[[nodiscard]] TimeSeries add_mean_shift(const TimeSeries& x, double delta, std::size_t tau);

/// out_i = mu(grid_i) + noise_i with the grid attached.
[[nodiscard]] TimeSeries signal_plus_noise(const std::function<double(double)>& mu,
                                           const std::vector<double>& grid, const TimeSeries& noise);

/// 0.5 cos(2 pi t - 0.7) + 0.3 exp(-t), the trend used in the band simulations.
[[nodiscard]] double benchmark_trend(double t);

/// Independent X_i with P(X_i = +-(i+1)^{1/p}) = 1/(i+1) each and
/// P(X_i = +-1) = 1/2 - 1/(i+1) each.
[[nodiscard]] TimeSeries simulate_counterexample(std::size_t n, double p, std::uint64_t seed);

using VolterraKernel = std::function<double(std::size_t j1, std::size_t j2, double u)>;

/// Second-order Volterra model
/// X_t = sum_{0 <= j1 < j2 <= L} kernel(j1, j2, t/n) eps_{t-j1} eps_{t-j2}.
[[nodiscard]] SimulableModel volterra2_model(VolterraKernel kernel, std::size_t truncation,
                                             std::size_t n, const InnovationSpec& innov);
[[nodiscard]] TimeSeries simulate_volterra2(VolterraKernel kernel, std::size_t truncation,
                                            std::size_t n, const InnovationSpec& innov,
                                            std::uint64_t seed);

}  // namespace nsg
