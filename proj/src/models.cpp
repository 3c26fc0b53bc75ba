#include "nsg/models.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace nsg {

InnovationSpec InnovationSpec::normal() { return {}; }

InnovationSpec InnovationSpec::unit_t(int df) {
  if (df <= 2) throw std::invalid_argument("unit_t: degrees of freedom must exceed 2");
  InnovationSpec s;
  s.kind = InnovationKind::scaled_t;
  s.df = df;
  s.scale = std::sqrt(static_cast<double>(df - 2) / static_cast<double>(df));
  return s;
}

InnovationSpec InnovationSpec::centered_chisq1() {
  InnovationSpec s;
  s.kind = InnovationKind::centered_chisq1;
  return s;
}

double InnovationSpec::variance() const {
  switch (kind) {
    case InnovationKind::standard_normal: return 1.0;
    case InnovationKind::scaled_t:
      return scale * scale * static_cast<double>(df) / static_cast<double>(df - 2);
    case InnovationKind::centered_chisq1: return 2.0;
  }
  return 1.0;
}

void InnovationSpec::validate() const {
  if (kind == InnovationKind::scaled_t && df <= 2) {
    throw std::invalid_argument("InnovationSpec: scaled_t needs df > 2");
  }
  if (!std::isfinite(scale) || scale <= 0.0) throw std::invalid_argument("InnovationSpec: bad scale");
}

void draw_innovations(const InnovationSpec& spec, Rng& rng, std::span<double> out) {
  switch (spec.kind) {
    case InnovationKind::standard_normal: {
      std::normal_distribution<double> d;
      for (double& e : out) e = d(rng);
      break;
    }
    case InnovationKind::scaled_t: {
      std::student_t_distribution<double> d(spec.df);
      for (double& e : out) e = spec.scale * d(rng);
      break;
    }
    case InnovationKind::centered_chisq1: {
      std::normal_distribution<double> d;
      for (double& e : out) {
        const double z = d(rng);
        e = z * z - 1.0;
      }
      break;
    }
  }
}

ThetaPath::ThetaPath(std::vector<double> c) : coefficients(std::move(c)) {
  if (coefficients.empty()) throw std::invalid_argument("ThetaPath: empty path");
  for (double v : coefficients) {
    if (!(std::abs(v) < 1.0)) throw std::invalid_argument("ThetaPath: |theta_t| must be < 1");
  }
}

ThetaPath theta_path(ThetaKind kind, double theta, std::size_t n) {
  if (!(std::abs(theta) < 1.0)) throw std::invalid_argument("theta_path: |theta| must be < 1");
  if (n == 0) throw std::invalid_argument("theta_path: n must be positive");
  std::vector<double> c(n);
  const double nd = static_cast<double>(n);
  for (std::size_t t = 1; t <= n; ++t) {
    const double td = static_cast<double>(t);
    double v = theta;
    switch (kind) {
      case ThetaKind::constant: break;
      case ThetaKind::split_sign: v = (td <= nd / 2.0) ? theta : -theta; break;
      case ThetaKind::piecewise4: {
        // Quarter q = ceil(4t/n); odd quarters +0.75, even quarters -0.75.
        const auto q = static_cast<std::size_t>(std::ceil(4.0 * td / nd));
        v = theta * ((q % 2 == 1) ? 0.75 : -0.75);
        break;
      }
      case ThetaKind::sine8pi: v = theta * std::sin(8.0 * std::numbers::pi * td / nd); break;
    }
    c[t - 1] = v;
  }
  return ThetaPath(std::move(c));
}

CovarianceOracle::CovarianceOracle(Eigen::MatrixXd cov) : cov_(std::move(cov)) {
  const auto n = cov_.rows();
  if (n == 0 || cov_.cols() != n) throw std::invalid_argument("CovarianceOracle: matrix must be square");
  const double tol = 1e-10 * std::max(1.0, cov_.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i) {
    if (cov_(i, i) < 0.0) throw std::invalid_argument("CovarianceOracle: negative variance");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (std::abs(cov_(i, j) - cov_(j, i)) > tol) {
        throw std::invalid_argument("CovarianceOracle: matrix not symmetric");
      }
    }
  }
  const double trace = cov_.trace();
  if (trace > 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8 * trace / static_cast<double>(n)) {
      throw std::invalid_argument("CovarianceOracle: matrix not positive semi-definite");
    }
  }
}

std::vector<double> SimulableModel::simulate(Rng& rng) const {
  std::vector<double> eps(presample + n);
  draw_innovations(innovations, rng, eps);
  return transform(eps);
}

std::vector<double> SimulableModel::simulate(std::uint64_t seed) const {
  Rng rng(seed, innovations.seed_offset);
  return simulate(rng);
}

std::vector<double> tvar_recursion(const ThetaPath& path, std::span<const double> eps) {
  if (eps.size() != path.size()) throw std::invalid_argument("tvar_recursion: length mismatch");
  std::vector<double> x(eps.size());
  double prev = 0.0;
  for (std::size_t t = 0; t < eps.size(); ++t) {
    prev = path.coefficients[t] * prev + eps[t];
    x[t] = prev;
  }
  return x;
}

SimulableModel tvar_model(const ThetaPath& path, const InnovationSpec& innov) {
  innov.validate();
  return {path.size(), 0, innov, [path](std::span<const double> eps) { return tvar_recursion(path, eps); }};
}

SimulableModel sine_tvar_model(const ThetaPath& path, const InnovationSpec& innov) {
  innov.validate();
  return {path.size(), 0, innov, [path](std::span<const double> eps) {
            auto x = tvar_recursion(path, eps);
            for (double& v : x) v = std::sin(v);
            return x;
          }};
}

TimeSeries simulate_tvar(const ThetaPath& path, const InnovationSpec& innov, Rng& rng) {
  return TimeSeries(tvar_model(path, innov).simulate(rng));
}

TimeSeries simulate_tvar(const ThetaPath& path, const InnovationSpec& innov, std::uint64_t seed) {
  Rng rng(seed, innov.seed_offset);
  return simulate_tvar(path, innov, rng);
}

TimeSeries sine_transform(const TimeSeries& x) {
  std::vector<double> v(x.values().begin(), x.values().end());
  for (double& e : v) e = std::sin(e);
  return x.has_grid() ? TimeSeries(std::move(v), *x.grid()) : TimeSeries(std::move(v));
}

CovarianceOracle tvar_covariance(const ThetaPath& path, double innov_var) {
  if (!(innov_var >= 0.0)) throw std::invalid_argument("tvar_covariance: negative innovation variance");
  const auto n = static_cast<Eigen::Index>(path.size());
  Eigen::MatrixXd c(n, n);
  // Var(X_s) = theta_s^2 Var(X_{s-1}) + sigma^2 and Cov(X_s, X_t) = theta_t Cov(X_s, X_{t-1}).
  double var_prev = 0.0;
  for (Eigen::Index s = 0; s < n; ++s) {
    const double th = path.coefficients[static_cast<std::size_t>(s)];
    const double v = th * th * var_prev + innov_var;
    c(s, s) = v;
    var_prev = v;
    double cov = v;
    for (Eigen::Index t = s + 1; t < n; ++t) {
      cov *= path.coefficients[static_cast<std::size_t>(t)];
      c(s, t) = cov;
      c(t, s) = cov;
    }
  }
  return CovarianceOracle(std::move(c));
}

std::vector<double> tvar_partial_variance(const ThetaPath& path, double innov_var) {
  const std::size_t n = path.size();
  std::vector<double> out(n);
  // Track Var(X_j), Cov(S_{j-1}, X_j) and Var(S_j) forward in j.
  double var_x = 0.0, var_s = 0.0, cov_sx = 0.0;
  double s_prev_var = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double th = path.coefficients[j];
    // Cov(S_{j-1}, X_j) = theta_j (Cov(S_{j-2}, X_{j-1}) + Var(X_{j-1})).
    cov_sx = th * (cov_sx + var_x);
    var_x = th * th * var_x + innov_var;
    var_s = s_prev_var + var_x + 2.0 * cov_sx;
    out[j] = var_s;
    s_prev_var = var_s;
  }
  return out;
}

TimeSeries add_mean_shift(const TimeSeries& x, double delta, std::size_t tau) {
  const std::size_t n = x.size();
  if (tau < 1 || tau >= n) throw std::out_of_range("add_mean_shift: tau must satisfy 1 <= tau < n");
  std::vector<double> v(x.values().begin(), x.values().end());
  for (std::size_t i = tau; i < n; ++i) v[i] += delta;
  return x.has_grid() ? TimeSeries(std::move(v), *x.grid()) : TimeSeries(std::move(v));
}

TimeSeries signal_plus_noise(const std::function<double(double)>& mu, const std::vector<double>& grid,
                             const TimeSeries& noise) {
  if (grid.size() != noise.size()) throw std::invalid_argument("signal_plus_noise: length mismatch");
  std::vector<double> v(noise.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = mu(grid[i]) + noise[i];
  return TimeSeries(std::move(v), grid);
}

double benchmark_trend(double t) {
  return 0.5 * std::cos(2.0 * std::numbers::pi * t - 0.7) + 0.3 * std::exp(-t);
}

TimeSeries simulate_counterexample(std::size_t n, double p, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("simulate_counterexample: n must be >= 2");
  if (!(p > 2.0)) throw std::invalid_argument("simulate_counterexample: p must exceed 2");
  Rng rng(seed);
  std::vector<double> x(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double q = 1.0 / static_cast<double>(i + 1);
    const double big = std::pow(static_cast<double>(i + 1), 1.0 / p);
    const double u = rng.uniform();
    double v;
    if (u < q) v = big;
    else if (u < 2.0 * q) v = -big;
    else if (u < 0.5 + q) v = 1.0;
    else v = -1.0;
    x[i - 1] = v;
  }
  return TimeSeries(std::move(x));
}

SimulableModel volterra2_model(VolterraKernel kernel, std::size_t truncation, std::size_t n,
                               const InnovationSpec& innov) {
  if (truncation < 1) throw std::invalid_argument("volterra2_model: truncation must be >= 1");
  if (n == 0) throw std::invalid_argument("volterra2_model: n must be positive");
  innov.validate();
  auto transform = [kernel = std::move(kernel), truncation, n](std::span<const double> eps) {
    std::vector<double> x(n, 0.0);
    const double nd = static_cast<double>(n);
    for (std::size_t t = 1; t <= n; ++t) {
      // eps_{t-j} sits at offset truncation + t - 1 - j.
      const std::size_t base = truncation + t - 1;
      const double u = static_cast<double>(t) / nd;
      double s = 0.0;
      for (std::size_t j1 = 0; j1 < truncation; ++j1) {
        for (std::size_t j2 = j1 + 1; j2 <= truncation; ++j2) {
          const double a = kernel(j1, j2, u);
          if (a != 0.0) s += a * eps[base - j1] * eps[base - j2];
        }
      }
      x[t - 1] = s;
    }
    return x;
  };
  return {n, truncation, innov, std::move(transform)};
}

TimeSeries simulate_volterra2(VolterraKernel kernel, std::size_t truncation, std::size_t n,
                              const InnovationSpec& innov, std::uint64_t seed) {
  return TimeSeries(volterra2_model(std::move(kernel), truncation, n, innov).simulate(seed));
}

}  // namespace nsg
