#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "nsg/models.hpp"
#include "nsg/stats.hpp"
#include "nsg/variance.hpp"

using Catch::Approx;
using namespace nsg;

namespace {

// Block running variance straight from its definition with explicit block sums.
std::vector<double> brv_oracle(const std::vector<double>& x, std::size_t m, bool cross) {
  const std::size_t n = x.size();
  std::vector<double> out(n);
  for (std::size_t j = 1; j <= n; ++j) {
    const std::size_t k = j / m;
    std::vector<double> b(k + 1, 0.0);
    for (std::size_t a = 1; a <= k; ++a) {
      for (std::size_t i = (a - 1) * m; i < a * m; ++i) b[a] += x[i];
    }
    double r = 0.0;
    for (std::size_t i = k * m; i < j; ++i) r += x[i];
    double t = r * r;
    for (std::size_t a = 1; a <= k; ++a) t += b[a] * b[a];
    if (cross) {
      for (std::size_t a = 1; a < k; ++a) t += 2.0 * b[a] * b[a + 1];
      t += 2.0 * b[k] * r;
    }
    out[j - 1] = t;
  }
  return out;
}

std::vector<double> normal_vector(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  draw_innovations(InnovationSpec::normal(), rng, x);
  return x;
}

double normalized_error(double theta, std::size_t n, std::uint64_t seed) {
  const auto path = theta_path(ThetaKind::constant, theta, n);
  const auto x = simulate_tvar(path, InnovationSpec::normal(), seed);
  const VarianceTrack truth{tvar_partial_variance(path, 1.0), TrackKind::exact, 0};
  return estimation_error(brv(x, default_block_length(n)), truth) / static_cast<double>(n);
}

}  // namespace

TEST_CASE("brv examples", "[variance]") {
  CHECK(brv(std::vector<double>{1, 2, 3, 4}, 2).values == std::vector<double>{1, 9, 36, 100});
  for (double v : brv(std::vector<double>(10, 0.0), 3).values) CHECK(v == 0.0);
  // T_{2m} = (B_1 + B_2)^2.
  const std::vector<double> x{0.5, -1.25, 2.0, 0.75, 3.0, -2.5};
  const double b1 = 0.5 - 1.25 + 2.0, b2 = 0.75 + 3.0 - 2.5;
  CHECK(brv(x, 3).values[5] == Approx((b1 + b2) * (b1 + b2)).epsilon(1e-15));
}

TEST_CASE("brv agrees with the block definition", "[variance][property]") {
  const auto x = normal_vector(97, 3);
  for (std::size_t m : {1u, 2u, 5u, 10u, 97u}) {
    const auto fast = brv(x, m).values;
    const auto slow = brv_oracle(x, m, true);
    for (std::size_t j = 0; j < x.size(); ++j) CHECK(fast[j] == Approx(slow[j]).margin(1e-10));
    const auto fast_nc = brv_no_cross(x, m).values;
    const auto slow_nc = brv_oracle(x, m, false);
    for (std::size_t j = 0; j < x.size(); ++j) CHECK(fast_nc[j] == Approx(slow_nc[j]).margin(1e-10));
  }
}

TEST_CASE("brv is continuous at block boundaries and even in x", "[variance][property]") {
  auto x = normal_vector(60, 4);
  const std::size_t m = 4;
  const auto t = brv(x, m).values;
  for (std::size_t k = 1; k * m <= x.size(); ++k) {
    double tk = 0.0, prev = 0.0;
    for (std::size_t a = 1; a <= k; ++a) {
      double s = 0.0;
      for (std::size_t i = (a - 1) * m; i < a * m; ++i) s += x[i];
      tk += s * s + 2.0 * prev * s;
      prev = s;
    }
    CHECK(t[k * m - 1] == Approx(tk).margin(1e-12));
  }
  for (double& v : x) v = -v;
  CHECK(brv(x, m).values == t);
}

TEST_CASE("brv_no_cross examples", "[variance]") {
  CHECK(brv_no_cross(std::vector<double>{1, 2, 3, 4}, 2).values == std::vector<double>{1, 9, 18, 58});
  for (double v : brv_no_cross(normal_vector(50, 5), 7).values) CHECK(v >= 0.0);
}

TEST_CASE("overlapping variance examples", "[variance]") {
  CHECK(overlapping_variance(std::vector<double>{1, 1, 1, 1}, 2).values == std::vector<double>{0, 2, 4, 6});
  for (double v : overlapping_variance(std::vector<double>(8, 0.0), 3).values) CHECK(v == 0.0);
  const std::vector<double> x{1.0, -2.0, 0.5};
  const auto one = overlapping_variance(x, 1).values;
  CHECK(one == std::vector<double>{1.0, 5.0, 5.25});
}

TEST_CASE("block length validation", "[variance]") {
  CHECK_THROWS_AS(brv(std::vector<double>{1, 2}, 0), std::invalid_argument);
  CHECK_THROWS_AS(brv(std::vector<double>{1, 2}, 3), std::invalid_argument);
  CHECK(default_block_length(600) == 8);
  CHECK(default_block_length(1000) == 10);
  CHECK(default_block_length(999) == 9);
  CHECK(default_block_length(1) == 1);
}

TEST_CASE("exact partial variance", "[variance]") {
  const auto id = exact_partial_variance(CovarianceOracle(2.5 * Eigen::MatrixXd::Identity(20, 20)));
  for (std::size_t j = 1; j <= 20; ++j) CHECK(id.values[j - 1] == 2.5 * static_cast<double>(j));
  const auto ar = exact_partial_variance(tvar_covariance(theta_path(ThetaKind::constant, 0.5, 2), 1.0));
  CHECK(ar.values[0] == Approx(1.0));
  CHECK(ar.values[1] == Approx(3.25));
  // X_t = eps_t - eps_{t-1}: S_j = eps_j - eps_0.
  const std::size_t n = 30;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    c(i, i) = 2.0;
    if (i + 1 < static_cast<Eigen::Index>(n)) c(i, i + 1) = c(i + 1, i) = -1.0;
  }
  for (double v : exact_partial_variance(CovarianceOracle(c)).values) CHECK(v <= 2.0 + 1e-12);
}

TEST_CASE("estimation error", "[variance]") {
  const VarianceTrack a{{1, 2, 3}, TrackKind::exact, 0}, b{{1, 2.5, 2}, TrackKind::brv, 1};
  CHECK(estimation_error(a, a) == 0.0);
  CHECK(estimation_error(a, b) == 1.0);
  CHECK_THROWS_AS(estimation_error(a, VarianceTrack{{1.0}, TrackKind::exact, 0}), std::invalid_argument);
}

TEST_CASE("brv error shrinks with n for AR(1)", "[variance][property]") {
  const std::vector<std::size_t> ns{500, 1000, 2000, 4000};
  const std::size_t seeds = 50;
  std::size_t trending = 0, monotone = 0;
  std::vector<std::vector<double>> errs(ns.size());
  std::vector<double> log_n;
  for (std::size_t n : ns) log_n.push_back(std::log(static_cast<double>(n)));
  for (std::size_t s = 0; s < seeds; ++s) {
    std::vector<double> e, log_e;
    for (std::size_t k = 0; k < ns.size(); ++k) {
      e.push_back(normalized_error(0.5, ns[k], 1000 + s));
      log_e.push_back(std::log(e.back()));
      errs[k].push_back(e.back());
    }
    if (stats::least_squares_line(log_n, log_e).slope < 0.0) ++trending;
    if (e[0] > e[1] && e[1] > e[2] && e[2] > e[3]) ++monotone;
  }
  INFO("seeds with a decreasing log-log trend: " << trending << ", strictly monotone: " << monotone << " of " << seeds);
  CHECK(static_cast<double>(trending) / static_cast<double>(seeds) >= 0.8);
  for (std::size_t k = 0; k + 1 < ns.size(); ++k) CHECK(stats::median(errs[k + 1]) < stats::median(errs[k]));
}

TEST_CASE("cross products make brv more accurate than brv_no_cross", "[variance]") {
  const std::size_t n = 1000, m = default_block_length(n), reps = 200;
  const auto path = theta_path(ThetaKind::constant, 0.8, n);
  const VarianceTrack truth{tvar_partial_variance(path, 1.0), TrackKind::exact, 0};
  std::size_t wins = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const auto x = simulate_tvar(path, InnovationSpec::normal(), 5000 + r);
    if (estimation_error(brv(x, m), truth) <= estimation_error(brv_no_cross(x, m), truth)) ++wins;
  }
  CHECK(static_cast<double>(wins) / static_cast<double>(reps) >= 0.6);
}

TEST_CASE("cross-product diagnostic", "[variance]") {
  const auto id = cross_product_diagnostic(CovarianceOracle(Eigen::MatrixXd::Identity(40, 40)), 4);
  CHECK(id.adjacent_max == 0.0);
  CHECK(id.far_sum_max == 0.0);

  const auto cov = tvar_covariance(theta_path(ThetaKind::constant, 0.5, 512), 1.0);
  const double a8 = cross_product_diagnostic(cov, 8).adjacent_max;
  const double a64 = cross_product_diagnostic(cov, 64).adjacent_max;
  CHECK(a8 / a64 >= 0.5);
  CHECK(a8 / a64 <= 2.0);

  const std::size_t n = 40;
  Eigen::MatrixXd ma = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    ma(i, i) = 1.25;
    if (i + 1 < static_cast<Eigen::Index>(n)) ma(i, i + 1) = ma(i + 1, i) = 0.5;
  }
  for (std::size_t m : {2u, 5u, 10u}) CHECK(cross_product_diagnostic(CovarianceOracle(ma), m).far_sum_max == 0.0);
  CHECK(cross_product_diagnostic(CovarianceOracle(ma), 5).adjacent_max == Approx(0.5));
}
