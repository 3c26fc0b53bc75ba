#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nsg/core.hpp"
#include "nsg/models.hpp"

namespace nsg {

enum class TrackKind { brv, brv_no_cross, overlapping, exact };

/// Var(S_j), j = 1..n, either exact or estimated. Estimated tracks may be
/// non-monotone or negative.
struct VarianceTrack {
  std::vector<double> values;
  TrackKind kind = TrackKind::exact;
  std::size_t m = 0;  ///< block length; 0 for exact tracks

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/// floor(n^{1/3}), at least 1.
[[nodiscard]] std::size_t default_block_length(std::size_t n);

/// Block-based running variance
///   T_j = T_{floor(j/m)} + R_j^2 + 2 B_{floor(j/m)} R_j,
///   T_k = sum_{a<=k} B_a^2 + 2 sum_{a<k} B_a B_{a+1}.
[[nodiscard]] VarianceTrack brv(std::span<const double> x, std::size_t m);
[[nodiscard]] VarianceTrack brv(const TimeSeries& x, std::size_t m);

/// sum_{a <= floor(i/m)} B_a^2 + R_i^2.
[[nodiscard]] VarianceTrack brv_no_cross(std::span<const double> x, std::size_t m);
[[nodiscard]] VarianceTrack brv_no_cross(const TimeSeries& x, std::size_t m);

/// sum_{t=m}^{i} (1/m) (X_{t-m+1} + ... + X_t)^2; zero for i < m.
[[nodiscard]] VarianceTrack overlapping_variance(std::span<const double> x, std::size_t m);
[[nodiscard]] VarianceTrack overlapping_variance(const TimeSeries& x, std::size_t m);

/// out[j] = sum_{s,t <= j} cov(s, t).
[[nodiscard]] VarianceTrack exact_partial_variance(const CovarianceOracle& oracle);

/// max_i |track_i - truth_i|.
[[nodiscard]] double estimation_error(const VarianceTrack& track, const VarianceTrack& truth);

struct CrossProductDiagnostic {
  double adjacent_max;  ///< max_k |E B_k B_{k+1}|
  double far_sum_max;   ///< max_k sum_{|i-k|>=2} |E B_i B_k|
};

[[nodiscard]] CrossProductDiagnostic cross_product_diagnostic(const CovarianceOracle& oracle,
                                                              std::size_t m);

}  // namespace nsg
