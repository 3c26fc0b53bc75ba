#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nsg/core.hpp"
#include "nsg/variance.hpp"

namespace nsg {

struct CusumResult {
  double statistic;     ///< U_n = max_{i<n} |S_i - (i/n) S_n| / sqrt(n)
  std::size_t tau_hat;  ///< smallest maximizing index, 1-based
};

[[nodiscard]] CusumResult cusum(std::span<const double> x);
[[nodiscard]] CusumResult cusum(const TimeSeries& x);

/// Subtracts the mean of x_1..x_tau from the first segment and the mean of
/// x_{tau+1}..x_n from the second.
[[nodiscard]] TimeSeries residualize(const TimeSeries& x, std::size_t tau);

/// B draws of V = max_i n^{-1/2} |W(track_i) - (i/n) W(track_n)|. Draw b uses
/// stream b of `seed`, so the draws do not depend on evaluation order.
[[nodiscard]] std::vector<double> null_draws(const VarianceTrack& track, std::size_t draws,
                                             std::uint64_t seed);

struct CutoffResult {
  double cutoff;
  bool degenerate;            ///< residuals were identically zero
  std::vector<double> draws;  ///< bootstrap draws of V (empty when degenerate)
};

/// (1 - alpha) critical value of V with the track estimated by brv(residuals, m).
[[nodiscard]] CutoffResult bootstrap_cutoff(const TimeSeries& residuals, std::size_t m, double alpha,
                                            std::size_t bootstrap, std::uint64_t seed);

/// The same critical value with a known variance track (the oracle test).
[[nodiscard]] double oracle_cutoff(const VarianceTrack& exact, double alpha, std::size_t draws,
                                   std::uint64_t seed);

struct ChangePointResult {
  double statistic = 0.0;
  std::size_t tau_hat = 1;
  double cutoff = 0.0;
  double p_value = 1.0;
  bool reject = false;
  std::size_t bootstrap_draws = 0;
  bool degenerate = false;
};

/// CUSUM test with bootstrap critical value: residualize at tau_hat, estimate
/// the variance track by BRV, simulate the null law with the two-sided
/// Brownian motion. p_value = (1 + #{V_b >= U_n}) / (B + 1).
[[nodiscard]] ChangePointResult changepoint_test(const TimeSeries& x, std::size_t m, double alpha,
                                                 std::size_t bootstrap, std::uint64_t seed);

}  // namespace nsg
