#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "nsg/random.hpp"
#include "nsg/stats.hpp"

using Catch::Approx;
using namespace nsg;

TEST_CASE("Philox4x32-10 known-answer vectors", "[random]") {
  // Published Random123 test vectors.
  CHECK(Rng::philox({0, 0, 0, 0}, {0, 0}) == Rng::Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Rng::philox({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        Rng::Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Rng::philox({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        Rng::Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("Rng streams are deterministic and distinct", "[random][property]") {
  Rng a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  std::vector<std::uint32_t> va, vb, vc, vd;
  for (int i = 0; i < 64; ++i) {
    va.push_back(a());
    vb.push_back(b());
    vc.push_back(c());
    vd.push_back(d());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
}

TEST_CASE("Rng uniform draws lie in [0,1) with the right moments", "[random]") {
  Rng rng(5);
  std::vector<double> u(100000);
  for (auto& v : u) {
    v = rng.uniform();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
  CHECK(stats::mean(u) == Approx(0.5).margin(4.0 * std::sqrt(1.0 / 12.0 / 1e5)));
  CHECK(stats::ks_uniform(u) < 0.01);
}

TEST_CASE("Rng works as a URBG for standard distributions", "[random]") {
  Rng rng(9);
  std::normal_distribution<double> normal;
  std::vector<double> z(50000);
  for (auto& v : z) v = normal(rng);
  CHECK(stats::mean(z) == Approx(0.0).margin(4.0 / std::sqrt(5e4)));
  CHECK(stats::variance(z) == Approx(1.0).margin(4.0 * std::sqrt(2.0 / 5e4)));
}

TEST_CASE("stream_id and mix_seed", "[random]") {
  std::set<std::uint64_t> ids;
  for (std::uint32_t s = 0; s < 8; ++s) {
    for (std::uint64_t i = 0; i < 100; ++i) ids.insert(stream_id(s, i));
  }
  CHECK(ids.size() == 800);
  CHECK(mix_seed(1, 2) == mix_seed(1, 2));
  CHECK(mix_seed(1, 2) != mix_seed(1, 3));
  CHECK(mix_seed(1, 2) != mix_seed(2, 2));
}

TEST_CASE("basic statistics", "[stats]") {
  const std::vector<double> x{3, 1, 4, 1, 5, 9, 2, 6};
  CHECK(stats::mean(x) == Approx(31.0 / 8.0));
  CHECK(stats::median(x) == Approx(3.5));
  // Unbiased variance computed by hand.
  double ss = 0.0;
  for (double v : x) ss += (v - 31.0 / 8.0) * (v - 31.0 / 8.0);
  CHECK(stats::variance(x) == Approx(ss / 7.0));
  CHECK(stats::variance(std::vector<double>{2.0}) == 0.0);
  CHECK(stats::quantile(x, 0.0) == 1.0);
  CHECK(stats::quantile(x, 1.0) == 9.0);
  // Type 7: h = (N-1) q = 1.75 on the sorted sample 1,1,2,3,4,5,6,9.
  CHECK(stats::quantile(x, 0.25) == Approx(1.0 + 0.75 * 1.0));
}

TEST_CASE("upper_critical_value is the ceil(N(1-alpha)) order statistic", "[stats]") {
  std::vector<double> x(100);
  for (std::size_t i = 0; i < 100; ++i) x[i] = static_cast<double>(100 - i);
  CHECK(stats::upper_critical_value(x, 0.05) == 95.0);
  CHECK(stats::upper_critical_value(x, 0.5) == 50.0);
  // The exceedance fraction never exceeds alpha.
  for (double alpha : {0.01, 0.05, 0.1, 0.33}) {
    const double c = stats::upper_critical_value(x, alpha);
    const auto above = std::count_if(x.begin(), x.end(), [&](double v) { return v > c; });
    CHECK(static_cast<double>(above) / 100.0 <= alpha + 1e-12);
  }
}

TEST_CASE("Kolmogorov-Smirnov distances", "[stats]") {
  const std::vector<double> a{1, 2, 3, 4}, b{1, 2, 3, 4}, c{5, 6, 7, 8};
  CHECK(stats::ks_two_sample(a, b) == 0.0);
  CHECK(stats::ks_two_sample(a, c) == 1.0);
  CHECK(stats::ks_uniform(std::vector<double>{0.5}) == Approx(0.5));
}

TEST_CASE("least squares line", "[stats]") {
  const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  const auto f = stats::least_squares_line(x, y);
  CHECK(f.intercept == Approx(1.0));
  CHECK(f.slope == Approx(2.0));
  CHECK_THROWS_AS(stats::least_squares_line(std::vector<double>{1, 1}, std::vector<double>{0, 1}),
                  std::invalid_argument);
  CHECK(stats::rate_standard_error(0.5, 100) == Approx(0.05));
}
