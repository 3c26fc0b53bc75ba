#include "nsg/scb.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "nsg/gaussian_approx.hpp"
#include "nsg/stats.hpp"
#include "nsg/variance.hpp"

namespace nsg {

namespace {

constexpr std::uint32_t kStageBand = 31;

double epanechnikov_value(double x) noexcept { return std::abs(x) <= 1.0 ? 0.75 * (1.0 - x * x) : 0.0; }

void check_bandwidth(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("bandwidth must be positive");
}

// Grid indices [lo, hi) with |t - t_i| <= omega h.
std::pair<std::size_t, std::size_t> window_range(std::span<const double> grid, double t, double reach) {
  const auto lo = std::lower_bound(grid.begin(), grid.end(), t - reach);
  const auto hi = std::upper_bound(lo, grid.end(), t + reach);
  return {static_cast<std::size_t>(lo - grid.begin()), static_cast<std::size_t>(hi - grid.begin())};
}

}  // namespace

KernelSpec KernelSpec::epanechnikov() { return {KernelKind::epanechnikov, 1.0}; }

KernelSpec KernelSpec::jackknife_corrected() { return {KernelKind::jackknife_corrected, std::numbers::sqrt2}; }

double KernelSpec::operator()(double x) const noexcept {
  switch (kind) {
    case KernelKind::epanechnikov: return epanechnikov_value(x);
    case KernelKind::jackknife_corrected:
      return 2.0 * epanechnikov_value(x) - epanechnikov_value(x / std::numbers::sqrt2) / std::numbers::sqrt2;
  }
  return 0.0;
}

double kernel_moment_sum(std::span<const double> grid, double t, double h, const KernelSpec& kernel, int j) {
  check_bandwidth(h);
  if (j < 0 || j > 2) throw std::invalid_argument("kernel_moment_sum: order must be 0, 1 or 2");
  const auto [lo, hi] = window_range(grid, t, kernel.omega * h);
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double d = t - grid[i];
    s += std::pow(d, j) * kernel(d / h);
  }
  return s;
}

double SparseWeights::apply(std::span<const double> x) const noexcept {
  double s = 0.0;
  const double* xp = x.data() + first;
  for (std::size_t k = 0; k < values.size(); ++k) s += values[k] * xp[k];
  return s;
}

SparseWeights local_linear_window(std::span<const double> grid, double t, double h, const KernelSpec& kernel) {
  check_bandwidth(h);
  const auto [lo, hi] = window_range(grid, t, kernel.omega * h);
  // Moments in units of h; the weights are invariant to this rescaling.
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  SparseWeights w{lo, std::vector<double>(hi - lo)};
  for (std::size_t i = lo; i < hi; ++i) {
    const double u = (t - grid[i]) / h;
    const double k = kernel(u);
    w.values[i - lo] = k;
    s0 += k;
    s1 += u * k;
    s2 += u * u * k;
  }
  const double den = s2 * s0 - s1 * s1;
  if (!(den > 1e-12 * std::max(1.0, std::abs(s0 * s2)))) {
    throw NumericalError("local-linear weights singular at t = " + std::to_string(t) +
                         " (too few points in the kernel window)");
  }
  for (std::size_t i = lo; i < hi; ++i) {
    const double u = (t - grid[i]) / h;
    w.values[i - lo] *= (s2 - u * s1) / den;
  }
  return w;
}

std::vector<double> local_linear_weights(std::span<const double> grid, double t, double h, const KernelSpec& kernel) {
  const SparseWeights s = local_linear_window(grid, t, h, kernel);
  std::vector<double> w(grid.size(), 0.0);
  std::copy(s.values.begin(), s.values.end(), w.begin() + static_cast<std::ptrdiff_t>(s.first));
  return w;
}

SparseWeights jackknife_window(std::span<const double> grid, double t, double h, const KernelSpec& kernel) {
  const SparseWeights narrow = local_linear_window(grid, t, h, kernel);
  SparseWeights wide = local_linear_window(grid, t, h * std::numbers::sqrt2, kernel);
  for (double& v : wide.values) v = -v;
  // The wide window contains the narrow one.
  for (std::size_t k = 0; k < narrow.values.size(); ++k) {
    wide.values[narrow.first - wide.first + k] += 2.0 * narrow.values[k];
  }
  return wide;
}

WeightFamily local_linear_family(std::vector<double> grid, double h, const KernelSpec& kernel) {
  check_bandwidth(h);
  const std::size_t n = grid.size();
  const double lo = grid.front() + kernel.omega * h, hi = grid.back() - kernel.omega * h;
  auto shared = std::make_shared<const std::vector<double>>(std::move(grid));
  auto eval = [shared, h, kernel](double t, std::size_t i) {
    const SparseWeights w = local_linear_window(*shared, t, h, kernel);
    if (i - 1 < w.first || i - 1 >= w.first + w.values.size()) return 0.0;
    return w.values[i - 1 - w.first];
  };
  return {WeightKind::local_linear, n, eval, hi > lo ? interior_grid(lo, hi) : interior_grid(0.0, 1.0)};
}

std::vector<double> local_linear_fit(const TimeSeries& x, double h, const KernelSpec& kernel,
                                     std::span<const double> t_eval) {
  const std::vector<double> grid = x.grid_or_uniform();
  std::vector<double> out(t_eval.size());
  for (std::size_t k = 0; k < t_eval.size(); ++k) {
    out[k] = local_linear_window(grid, t_eval[k], h, kernel).apply(x.values());
  }
  return out;
}

std::vector<double> jackknife_fit(const TimeSeries& x, double h, std::span<const double> t_eval) {
  const std::vector<double> grid = x.grid_or_uniform();
  std::vector<double> out(t_eval.size());
  for (std::size_t k = 0; k < t_eval.size(); ++k) out[k] = jackknife_window(grid, t_eval[k], h).apply(x.values());
  return out;
}

bool bandwidth_in_guidance(std::size_t n, double h) {
  const double nd = static_cast<double>(n);
  return h >= std::pow(nd, -0.75) && h <= std::pow(nd, -3.0 / 16.0);
}

BandResult scb_build(const TimeSeries& x, double h, std::size_t m, double alpha, std::size_t bootstrap,
                     std::uint64_t seed, const ScbOptions& options) {
  check_bandwidth(h);
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("scb_build: alpha must lie in (0, 1)");
  if (bootstrap < 100) throw std::invalid_argument("scb_build: at least 100 bootstrap draws required");
  if (!(h < 0.5)) throw std::invalid_argument("scb_build: kernel half-width must be below 1/2");
  if (!(options.lo < options.hi)) throw std::invalid_argument("scb_build: empty evaluation window");
  const std::size_t n = x.size();
  const std::vector<double> grid = x.grid_or_uniform();
  const auto xv = x.values();

  BandResult band;
  band.trim_lo = options.lo;
  band.trim_hi = options.hi;
  band.bandwidth_warning = !bandwidth_in_guidance(n, h);

  // Residuals over the whole grid, written as sum_j w~_ij (x_i - x_j) so that a
  // constant shift of x cancels exactly.
  band.residuals.resize(n);
  std::vector<SparseWeights> eval_weights;
  for (std::size_t i = 0; i < n; ++i) {
    SparseWeights w = jackknife_window(grid, grid[i], h);
    double z = 0.0;
    for (std::size_t k = 0; k < w.values.size(); ++k) z += w.values[k] * (xv[i] - xv[w.first + k]);
    band.residuals[i] = z;
    if (grid[i] >= options.lo && grid[i] <= options.hi) {
      band.t_eval.push_back(grid[i]);
      band.mu_tilde.push_back(w.apply(xv));
      eval_weights.push_back(std::move(w));
    }
  }
  if (band.t_eval.empty()) throw std::invalid_argument("scb_build: no grid point inside the evaluation window");

  const VarianceTrack track = brv(band.residuals, m);
  if (std::all_of(track.values.begin(), track.values.end(), [](double v) { return v == 0.0; })) {
    band.half_width = 0.0;
    return band;
  }
  const TrackSampler sampler(track.values);
  std::vector<double> w(n), y(n), maxima(bootstrap);
  for (std::size_t b = 0; b < bootstrap; ++b) {
    Rng rng(seed, stream_id(kStageBand, b));
    sampler.sample(rng, w);
    y[0] = w[0];
    for (std::size_t i = 1; i < n; ++i) y[i] = w[i] - w[i - 1];
    double best = 0.0;
    for (const SparseWeights& ew : eval_weights) best = std::max(best, std::abs(ew.apply(y)));
    maxima[b] = best;
  }
  band.half_width = stats::upper_critical_value(maxima, alpha);
  return band;
}

bool band_contains(const BandResult& band, const std::function<double(double)>& truth, double lo, double hi) {
  if (lo < band.trim_lo || hi > band.trim_hi) {
    throw std::invalid_argument("band_contains: window exceeds the band's evaluation window");
  }
  for (std::size_t k = 0; k < band.t_eval.size(); ++k) {
    const double t = band.t_eval[k];
    if (t < lo || t > hi) continue;
    if (std::abs(band.mu_tilde[k] - truth(t)) > band.half_width) return false;
  }
  return true;
}

double HarmonicFit::operator()(double t) const {
  double v = coefficients[0] * t;
  for (std::size_t k = 0; k < frequencies.size(); ++k) {
    const double arg = 2.0 * std::numbers::pi * t * frequencies[k];
    v += coefficients[1 + 2 * k] * std::sin(arg) + coefficients[2 + 2 * k] * std::cos(arg);
  }
  return v;
}

HarmonicFit fit_harmonic_trend(const TimeSeries& x, std::span<const double> periods, double range) {
  if (!x.has_grid()) throw std::invalid_argument("fit_harmonic_trend: series needs an observation grid");
  if (!(range > 0.0)) throw std::invalid_argument("fit_harmonic_trend: range must be positive");
  HarmonicFit fit;
  for (double p : periods) {
    if (!(p > 0.0)) throw std::invalid_argument("fit_harmonic_trend: periods must be positive");
    fit.frequencies.push_back(p / range);
  }
  const auto& grid = *x.grid();
  const auto n = static_cast<Eigen::Index>(x.size());
  const auto cols = static_cast<Eigen::Index>(1 + 2 * periods.size());
  Eigen::MatrixXd design(n, cols);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = grid[static_cast<std::size_t>(i)];
    design(i, 0) = t;
    for (std::size_t k = 0; k < fit.frequencies.size(); ++k) {
      const double arg = 2.0 * std::numbers::pi * t * fit.frequencies[k];
      design(i, static_cast<Eigen::Index>(1 + 2 * k)) = std::sin(arg);
      design(i, static_cast<Eigen::Index>(2 + 2 * k)) = std::cos(arg);
    }
    y(i) = x[static_cast<std::size_t>(i)];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < cols) throw NumericalError("fit_harmonic_trend: rank-deficient design");
  const Eigen::VectorXd beta = qr.solve(y);
  fit.coefficients.assign(beta.data(), beta.data() + beta.size());
  return fit;
}

}  // namespace nsg
