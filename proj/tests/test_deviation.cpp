#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "nsg/deviation.hpp"
#include "nsg/models.hpp"
#include "nsg/stats.hpp"
#include "nsg/variance.hpp"

using Catch::Approx;
using namespace nsg;

namespace {

std::vector<double> normal_vector(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  draw_innovations(InnovationSpec::normal(), rng, x);
  return x;
}

double q_oracle(const std::vector<double>& x, const BandedQuadratic& q) {
  double s = 0.0;
  for (std::size_t t = 1; t <= x.size(); ++t) {
    for (std::size_t u = 1; u <= t; ++u) s += q(u, t) * x[u - 1] * x[t - 1];
  }
  return s;
}

SimulableModel ar1(double theta, std::size_t n) {
  return tvar_model(theta_path(ThetaKind::constant, theta, n), InnovationSpec::normal());
}

}  // namespace

TEST_CASE("diagonal form", "[deviation]") {
  const auto x = normal_vector(20, 1);
  BandedQuadratic q(20, 1);
  for (std::size_t s = 1; s <= 20; ++s) q.set(s, s, 1.0);
  const auto b = quadratic_blocks(x, q);
  REQUIRE(b.v.size() == 20);
  double total = 0.0;
  for (std::size_t k = 0; k < 20; ++k) {
    CHECK(b.v[k] == Approx(x[k] * x[k]).epsilon(1e-15));
    total += x[k] * x[k];
  }
  CHECK(b.q == Approx(total).epsilon(1e-14));
}

TEST_CASE("banded quadratic examples", "[deviation]") {
  const std::vector<double> x{1, 2, 3};
  const auto q = BandedQuadratic::constant(3, 1, 1.0);
  const auto b = quadratic_blocks(x, q);
  CHECK(b.q == 22.0);
  CHECK(b.v == std::vector<double>{1.0, 6.0, 15.0});
  std::vector<double> neg{-1, -2, -3};
  CHECK(quadratic_blocks(neg, q).q == 22.0);
}

TEST_CASE("block sums add up to the form", "[deviation][property]") {
  for (std::size_t d : {1u, 3u, 7u, 16u}) {
    const auto x = normal_vector(101, d);
    BandedQuadratic q(101, d);
    Rng rng(d + 100);
    for (std::size_t t = 1; t <= 101; ++t) {
      for (std::size_t s = t > d ? t - d : 1; s <= t; ++s) q.set(s, t, 2.0 * rng.uniform() - 1.0);
    }
    const auto b = quadratic_blocks(x, q);
    CHECK(b.v.size() == q.block_count());
    double sum = 0.0;
    for (double v : b.v) sum += v;
    CHECK(sum == Approx(b.q).epsilon(1e-12));
    CHECK(b.q == Approx(q_oracle(x, q)).epsilon(1e-12));
  }
}

TEST_CASE("band and magnitude are enforced", "[deviation]") {
  BandedQuadratic q(10, 2);
  CHECK_THROWS_AS(q.set(1, 4, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(q.set(2, 3, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(q.set(3, 2, 0.5), std::out_of_range);
  CHECK_THROWS_AS(q.set(1, 11, 0.5), std::out_of_range);
  CHECK(q(1, 9) == 0.0);
  CHECK_THROWS_AS(quadratic_blocks(normal_vector(9, 1), q), std::invalid_argument);
  CHECK_THROWS_AS(BandedQuadratic(10, 0), std::invalid_argument);
}

TEST_CASE("centred process with exact means of a deterministic input", "[deviation]") {
  const std::vector<double> x{0.5, -1.0, 2.0, 0.25, 1.5, -0.75, 3.0};
  const auto q = BandedQuadratic::constant(7, 2, 0.5);
  const auto b = quadratic_blocks(x, q);
  CHECK(centered_max_process(x, q, b.v) == 0.0);
  CHECK_THROWS_AS(centered_max_process(x, q, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("exact block means for a diagonal form", "[deviation]") {
  const auto cov = tvar_covariance(theta_path(ThetaKind::constant, 0.5, 12), 1.0);
  BandedQuadratic q(12, 3);
  for (std::size_t s = 1; s <= 12; ++s) q.set(s, s, 1.0);
  const auto means = exact_block_means(q, cov);
  REQUIRE(means.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    double e = 0.0;
    for (std::size_t i = 3 * k + 1; i <= 3 * k + 3; ++i) e += cov(i, i);
    CHECK(means[k] == Approx(e).epsilon(1e-14));
  }
}

TEST_CASE("the iid diagonal form is a centred chi-square random walk", "[deviation]") {
  std::vector<double> mean_max;
  for (std::size_t n : {500u, 2000u}) {
    BandedQuadratic q(n, 1);
    for (std::size_t s = 1; s <= n; ++s) q.set(s, s, 1.0);
    const std::vector<double> ones(n, 1.0);
    std::vector<double> m;
    for (std::uint64_t r = 0; r < 400; ++r) m.push_back(centered_max_process(normal_vector(n, mix_seed(n, r)), q, ones));
    mean_max.push_back(stats::mean(m));
  }
  const double ratio = mean_max[1] / mean_max[0];
  CHECK(ratio >= 1.4);
  CHECK(ratio <= 2.9);
}

TEST_CASE("the block running variance is twice a banded form", "[deviation][property]") {
  for (std::size_t n : {60u, 61u, 97u}) {
    const std::size_t m = 4;
    const auto x = normal_vector(n, n);
    const auto form = BandedQuadratic::brv_form(n, m);
    CHECK(form.bandwidth() == 2 * m);
    const auto t = brv(x, m).values;
    CHECK(2.0 * quadratic_blocks(x, form).q == Approx(t.back()).epsilon(1e-12));
  }
  // The stochastic error of T at multiples of 2m is twice the centred process.
  const std::size_t n = 96, m = 4;
  const auto cov = tvar_covariance(theta_path(ThetaKind::constant, 0.5, n), 1.0);
  const auto form = BandedQuadratic::brv_form(n, m);
  const auto means = exact_block_means(form, cov);
  const auto x = simulate_tvar(theta_path(ThetaKind::constant, 0.5, n), InnovationSpec::normal(), 3);
  const auto t = brv(x, m).values;
  double worst = 0.0;
  for (std::size_t k = 1; k * 2 * m <= n; ++k) {
    const std::size_t j = 2 * m * k;
    // E T_j = sum of covariances over pairs in the same or adjacent m-blocks.
    double et = 0.0;
    for (std::size_t s = 1; s <= j; ++s) {
      for (std::size_t u = 1; u <= j; ++u) {
        const std::size_t bs = (s - 1) / m, bu = (u - 1) / m;
        if ((bs > bu ? bs - bu : bu - bs) <= 1) et += cov(s, u);
      }
    }
    worst = std::max(worst, std::abs(t[j - 1] - et));
  }
  CHECK(2.0 * centered_max_process(x.values(), form, means) == Approx(worst).epsilon(1e-10));
}

TEST_CASE("tail tables", "[deviation]") {
  std::vector<double> draws;
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) draws.push_back(std::exp(rng.uniform() * 3.0));
  std::vector<double> grid;
  for (double x = 0.5; x < 25.0; x *= 1.3) grid.push_back(x);
  grid.push_back(21.0);
  const auto t = tail_table(draws, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(t.tail[i] >= 0.0);
    CHECK(t.tail[i] <= 1.0);
    if (i) CHECK(t.tail[i] <= t.tail[i - 1]);
    CHECK(t.standard_error[i] == Approx(std::sqrt(t.tail[i] * (1.0 - t.tail[i]) / 2000.0)));
  }
  CHECK(t.tail[0] == 1.0);
  CHECK(t.tail.back() == 0.0);
}

TEST_CASE("tail study on an AR(1) model", "[deviation]") {
  const std::size_t n = 500;
  const auto model = ar1(0.5, n);
  const auto q = BandedQuadratic::constant(n, 8, 1.0);
  const auto means = monte_carlo_block_means(model, q, 500, 1);
  const auto draws = max_deviation_draws(model, q, means, 500, 2);
  const double p01 = stats::quantile(draws, 0.01);
  std::vector<double> grid{0.5 * p01, p01 * 0.999};
  for (double x = p01; x < 4.0 * stats::quantile(draws, 0.99); x *= 1.25) grid.push_back(x);
  const auto table = tail_study(model, q, grid, 500, 3);
  CHECK(table.tail[0] >= 0.98);
  CHECK(table.tail[1] >= 0.96);
  for (std::size_t i = 1; i < table.tail.size(); ++i) CHECK(table.tail[i] <= table.tail[i - 1]);
  CHECK_THROWS_AS(tail_study(model, q, grid, 499, 3), std::invalid_argument);
  CHECK(tail_study(model, q, grid, 500, 3).tail == table.tail);
}

TEST_CASE("wider bands raise the tail intercept", "[deviation]") {
  const std::size_t n = 1000;
  const auto model = ar1(0.5, n);
  std::vector<double> icept;
  std::vector<double> grid;
  {
    const auto q = BandedQuadratic::constant(n, 8, 1.0);
    const auto draws = max_deviation_draws(model, q, monte_carlo_block_means(model, q, 500, 5), 500, 6);
    for (double x = stats::median(draws); x < 4.0 * stats::quantile(draws, 0.995); x *= 1.2) grid.push_back(x);
  }
  for (std::size_t d : {8u, 16u}) {
    const auto table = tail_study(model, BandedQuadratic::constant(n, d, 1.0), grid, 500, 7);
    icept.push_back(fixed_slope_intercept(table, 4.0));
  }
  CHECK(icept[1] > icept[0]);
}

TEST_CASE("log-log fits and envelopes on injected tables", "[deviation]") {
  TailTable t;
  for (double x = 1.0; x < 100.0; x *= 1.5) {
    t.x.push_back(x);
    t.tail.push_back(0.8 * std::pow(x, -2.0));
    t.standard_error.push_back(0.0);
  }
  const auto fit = log_tail_fit(t);
  CHECK(fit.slope == Approx(-2.0).margin(1e-12));
  CHECK(fit.intercept == Approx(std::log(0.8)).margin(1e-12));
  CHECK(fixed_slope_intercept(t, 4.0) == Approx(std::log(0.8)).margin(1e-12));
  CHECK(below_anchored_envelope(t, 4.0));

  TailTable fast = t, slow = t;
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    fast.tail[i] = 0.8 * std::pow(t.x[i], -3.0);
    slow.tail[i] = 0.8 * std::pow(t.x[i], -1.0);
  }
  CHECK(below_anchored_envelope(fast, 4.0));
  CHECK_FALSE(below_anchored_envelope(slow, 4.0));
  CHECK(log_tail_fit(fast, 3).slope == Approx(-3.0).margin(1e-12));

  TailTable zeros = t;
  std::fill(zeros.tail.begin(), zeros.tail.end(), 0.0);
  CHECK_THROWS_AS(log_tail_fit(zeros), std::invalid_argument);
}
