#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nsg/core.hpp"
#include "nsg/variance.hpp"

namespace nsg {

/// Level-j Haar filter: -2^{-j/2} on the first half, +2^{-j/2} on the second.
struct HaarLevel {
  unsigned j;
  std::vector<double> filter;  ///< h_{j,1}..h_{j,2^j}
};

[[nodiscard]] HaarLevel haar_level(unsigned j);

/// W_{j,t} = sum_{l=1}^{2^j} h_{j,l} X_{2^j t - l + 1}, t = 1..n/2^j.
/// Requires n to be a power of two and 1 <= j <= log2 n.
[[nodiscard]] std::vector<double> haar_coefficients(std::span<const double> x, unsigned j);
[[nodiscard]] std::vector<double> haar_coefficients(const TimeSeries& x, unsigned j);

/// Scaling coefficient (x_1 + ... + x_n) / sqrt(n) that completes the transform.
[[nodiscard]] double haar_scaling_coefficient(std::span<const double> x);

/// The level-j filter applied to the increments of a Brownian motion evaluated
/// at the track (two-sided, so estimated tracks are accepted).
[[nodiscard]] std::vector<double> haar_gaussian_analogue(const VarianceTrack& track, unsigned j,
                                                         std::uint64_t seed);

/// Smallest integer strictly exceeding (2 / ln 2)((1/p) ln n + (1/2) ln ln n).
[[nodiscard]] unsigned min_resolution(std::size_t n, double p);

}  // namespace nsg
