#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "nsg/changepoint.hpp"
#include "nsg/models.hpp"
#include "nsg/stats.hpp"
#include "nsg/variance.hpp"

using Catch::Approx;
using namespace nsg;

namespace {

// max_{i<n} |S_i - (i/n) S_n| / sqrt(n) with the partial sums recomputed from scratch.
double cusum_oracle(const std::vector<double>& x) {
  const std::size_t n = x.size();
  long double total = 0.0L;
  for (double v : x) total += v;
  long double best = 0.0L;
  for (std::size_t i = 1; i < n; ++i) {
    long double s = 0.0L;
    for (std::size_t j = 0; j < i; ++j) s += x[j];
    best = std::max(best, std::abs(s - static_cast<long double>(i) / n * total));
  }
  return static_cast<double>(best / std::sqrt(static_cast<long double>(n)));
}

std::vector<double> iid_normal(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  draw_innovations(InnovationSpec::normal(), rng, x);
  return x;
}

// Integers times 1/8, so sums and shifts are exact.
std::vector<double> dyadic_series(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = static_cast<double>(static_cast<int>(rng() % 64) - 32) / 8.0;
  return x;
}

void check_result_invariants(const ChangePointResult& r) {
  CHECK(r.p_value > 0.0);
  CHECK(r.p_value <= 1.0);
  CHECK(r.reject == (r.statistic > r.cutoff));
}

}  // namespace

TEST_CASE("cusum examples", "[changepoint]") {
  const auto c = cusum(std::vector<double>(10, 3.5));
  CHECK(c.statistic == 0.0);
  CHECK(c.tau_hat == 1);
  const auto s = cusum(std::vector<double>{1, 1, -1, -1});
  CHECK(s.statistic == Approx(1.0).margin(1e-15));
  CHECK(s.tau_hat == 2);
  CHECK_THROWS_AS(cusum(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("cusum agrees with the direct formula", "[changepoint]") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto x = iid_normal(257, seed);
    CHECK(cusum(x).statistic == Approx(cusum_oracle(x)).epsilon(1e-12));
  }
}

TEST_CASE("cusum is location invariant and scale equivariant", "[changepoint][property]") {
  const auto x = dyadic_series(300, 3);
  const auto base = cusum(x);
  for (double c : {1.0, -7.0, 1024.0}) {
    auto y = x;
    for (double& v : y) v += c;
    const auto r = cusum(y);
    CHECK(r.statistic == base.statistic);
    CHECK(r.tau_hat == base.tau_hat);
  }
  for (double c : {2.0, -0.5, 8.0}) {
    auto y = x;
    for (double& v : y) v *= c;
    CHECK(cusum(y).statistic == std::abs(c) * base.statistic);
  }
  const auto g = iid_normal(300, 4);
  auto h = g;
  for (double& v : h) v *= -3.3;
  CHECK(cusum(h).statistic == Approx(3.3 * cusum(g).statistic).epsilon(1e-12));
}

TEST_CASE("residualize", "[changepoint]") {
  std::vector<double> step(20, 0.0);
  for (std::size_t i = 10; i < 20; ++i) step[i] = 2.5;
  const auto flat = residualize(TimeSeries(step), 10);
  for (double v : flat.values()) CHECK(v == 0.0);

  const auto x = iid_normal(101, 5);
  for (std::size_t tau : {1u, 37u, 100u}) {
    const auto z = residualize(TimeSeries(x), tau);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < tau; ++i) s1 += z[i];
    for (std::size_t i = tau; i < 101; ++i) s2 += z[i];
    CHECK(std::abs(s1 / tau) <= 1e-12);
    CHECK(std::abs(s2 / (101 - tau)) <= 1e-12);
    if (tau == 1) CHECK(z[0] == 0.0);
  }
  CHECK_THROWS_AS(residualize(TimeSeries(x), 0), std::out_of_range);
  CHECK_THROWS_AS(residualize(TimeSeries(x), 101), std::out_of_range);
}

TEST_CASE("bootstrap cutoff", "[changepoint]") {
  const auto zero = bootstrap_cutoff(TimeSeries(std::vector<double>(50, 0.0)), 3, 0.05, 200, 1);
  CHECK(zero.cutoff == 0.0);
  CHECK(zero.degenerate);

  // For iid residuals the null law is the Kolmogorov distribution, 95% quantile 1.358.
  // Single cutoffs inherit the sampling noise of the block estimate, so the
  // average over seeds is compared.
  std::vector<double> cutoffs;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto x = iid_normal(300, 100 + seed);
    const auto z = residualize(TimeSeries(x), cusum(x).tau_hat);
    const auto cut = bootstrap_cutoff(z, 7, 0.05, 500, seed);
    CHECK(cut.draws.size() == 500);
    CHECK_FALSE(cut.degenerate);
    cutoffs.push_back(cut.cutoff);
  }
  INFO("cutoff range " << *std::min_element(cutoffs.begin(), cutoffs.end()) << " .. "
                       << *std::max_element(cutoffs.begin(), cutoffs.end()));
  CHECK(stats::mean(cutoffs) >= 1.2);
  CHECK(stats::mean(cutoffs) <= 1.6);
  CHECK_THROWS_AS(bootstrap_cutoff(TimeSeries(iid_normal(50, 1)), 3, 0.05, 99, 1), std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_cutoff(TimeSeries(iid_normal(50, 1)), 3, 1.0, 200, 1), std::invalid_argument);
}

TEST_CASE("null draws do not depend on evaluation order", "[changepoint][property]") {
  const VarianceTrack track{tvar_partial_variance(theta_path(ThetaKind::piecewise4, -0.8, 120), 1.0),
                            TrackKind::exact, 0};
  const auto all = null_draws(track, 300, 9);
  const auto head = null_draws(track, 100, 9);
  for (std::size_t b = 0; b < 100; ++b) CHECK(all[b] == head[b]);
  CHECK(null_draws(track, 300, 9) == all);
}

TEST_CASE("change-point test on a noiseless step", "[changepoint]") {
  std::vector<double> x(200, 0.0);
  for (std::size_t i = 100; i < 200; ++i) x[i] = 1.0;
  const auto r = changepoint_test(TimeSeries(x), 5, 0.05, 200, 1);
  CHECK(r.reject);
  CHECK(r.tau_hat == 100);
  CHECK(r.degenerate);
  check_result_invariants(r);
}

TEST_CASE("change-point test on a constant series", "[changepoint]") {
  const auto r = changepoint_test(TimeSeries(std::vector<double>(80, 4.0)), 4, 0.05, 200, 1);
  CHECK_FALSE(r.reject);
  CHECK(r.p_value == 1.0);
  CHECK(r.degenerate);
}

TEST_CASE("change-point test is location invariant given the seed", "[changepoint][property]") {
  const auto x = dyadic_series(240, 11);
  const auto a = changepoint_test(TimeSeries(x), 6, 0.05, 300, 42);
  auto y = x;
  for (double& v : y) v += 5.0;
  const auto b = changepoint_test(TimeSeries(y), 6, 0.05, 300, 42);
  CHECK(a.statistic == b.statistic);
  CHECK(a.tau_hat == b.tau_hat);
  CHECK(a.cutoff == b.cutoff);
  CHECK(a.p_value == b.p_value);
  CHECK(a.reject == b.reject);
  check_result_invariants(a);
}

TEST_CASE("p-values are close to uniform under the null", "[changepoint][property]") {
  std::vector<double> p;
  const std::size_t n = 2000;
  for (std::uint64_t r = 0; r < 500; ++r) {
    const auto res = changepoint_test(TimeSeries(iid_normal(n, 7000 + r)), default_block_length(n), 0.05, 200, r);
    check_result_invariants(res);
    p.push_back(res.p_value);
  }
  CHECK(stats::ks_uniform(p) <= 0.08);
}
