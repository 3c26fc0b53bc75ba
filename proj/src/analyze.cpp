#include "nsg/analyze.hpp"

#include <algorithm>
#include <cmath>

#include "nsg/changepoint.hpp"
#include "nsg/config.hpp"
#include "nsg/scb.hpp"
#include "nsg/variance.hpp"

namespace nsg {

nlohmann::json analyze_series(const SeriesFile& file, const AnalyzeOptions& opts) {
  const std::size_t n = file.size();
  if (n < 50) throw DataError("analyze: need at least 50 observations, got " + std::to_string(n));
  if (!(opts.h > 0.0 && opts.h < 0.5)) throw DataError("analyze: h must lie in (0, 0.5)");
  if (static_cast<double>(n) * opts.h < 5.0) throw DataError("analyze: n h < 5, bandwidth too small for the sample");
  if (!(opts.alpha > 0.0 && opts.alpha < 1.0)) throw DataError("analyze: alpha must lie in (0, 1)");
  if (opts.bootstrap == 0) throw DataError("analyze: bootstrap must be positive");
  const std::size_t m = opts.m ? opts.m : default_block_length(n);
  if (m > n) throw DataError("analyze: m exceeds the series length");

  const TimeSeries x = to_time_series(file);
  nlohmann::json report;
  nlohmann::json warnings = nlohmann::json::array();

  const ChangePointResult cp = changepoint_test(x, m, opts.alpha, opts.bootstrap, mix_seed(opts.seed, 1));
  report["changepoint"] = {{"statistic", cp.statistic},
                           {"tau_hat", cp.tau_hat},
                           {"tau_time", file.time[cp.tau_hat - 1]},
                           {"cutoff", cp.cutoff},
                           {"p_value", cp.p_value},
                           {"reject", cp.reject}};

  const BandResult band = scb_build(x, opts.h, m, opts.alpha, opts.bootstrap, mix_seed(opts.seed, 2));
  std::vector<double> time, lower, upper;
  for (std::size_t i = 0; i < band.t_eval.size(); ++i) {
    time.push_back(file.to_file_time(band.t_eval[i]));
    lower.push_back(band.mu_tilde[i] - band.half_width);
    upper.push_back(band.mu_tilde[i] + band.half_width);
  }
  report["band"] = {{"t", band.t_eval}, {"time", time},       {"mu_tilde", band.mu_tilde},
                    {"lower", lower},   {"upper", upper},     {"half_width", band.half_width},
                    {"alpha", opts.alpha}, {"h", opts.h},     {"m", m}};
  report["residuals"] = band.residuals;

  if (band.bandwidth_warning) warnings.push_back("bandwidth outside the range n^{-3/4} <= h <= n^{-3/16}");
  const bool zero_residuals =
      std::all_of(band.residuals.begin(), band.residuals.end(), [](double r) { return r == 0.0; });
  if (cp.degenerate || zero_residuals) warnings.push_back("residuals are identically zero; the band has zero width");

  if (!opts.periods.empty()) {
    const HarmonicFit fit = fit_harmonic_trend(x, opts.periods, file.time_span());
    std::vector<double> fitted;
    for (double t : band.t_eval) fitted.push_back(fit(t));
    const bool contained = band_contains(band, fit, band.trim_lo, band.trim_hi);
    report["harmonic"] = {{"periods", opts.periods},
                          {"frequencies", fit.frequencies},
                          {"coefficients", fit.coefficients},
                          {"fitted", fitted},
                          {"contained", contained},
                          {"rejected", !contained}};
  }
  report["n"] = n;
  report["warnings"] = warnings;
  return report;
}

}  // namespace nsg
