#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "nsg/series_file.hpp"

namespace nsg {

struct AnalyzeOptions {
  std::size_t m = 0;  ///< block length; 0 means floor(n^{1/3})
  double h = 0.1;
  double alpha = 0.05;
  std::size_t bootstrap = 500;
  std::uint64_t seed = 1;
  std::vector<double> periods;  ///< harmonic periods in file time units; empty skips the trend fit
};

/// Change-point test followed by a simultaneous band for the trend.
///
/// The report holds `changepoint` (statistic, tau_hat, tau_time, cutoff,
/// p_value, reject), `band` (t, time, mu_tilde, lower, upper, half_width),
/// `residuals`, an optional `harmonic` block with the band-containment
/// verdict, and `warnings`. Throws DataError for n < 50 or n h < 5.
[[nodiscard]] nlohmann::json analyze_series(const SeriesFile& file, const AnalyzeOptions& options);

}  // namespace nsg
