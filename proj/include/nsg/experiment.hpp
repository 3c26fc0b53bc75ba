#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nsg/config.hpp"
#include "nsg/deviation.hpp"
#include "nsg/models.hpp"

namespace nsg {

[[nodiscard]] SimulableModel make_model(const ModelSpec& spec, std::size_t n);

/// Sample covariance (1/N) sum x x^T of `reps` paths of a mean-zero model.
[[nodiscard]] CovarianceOracle monte_carlo_covariance(const SimulableModel& model, std::size_t reps,
                                                      std::uint64_t seed);

/// Exact covariance for the linear family; a 10^5-path Monte Carlo estimate otherwise.
[[nodiscard]] CovarianceOracle model_covariance(const ModelSpec& spec, std::size_t n, std::uint64_t seed);

struct CoverageResult {
  double coverage = 0.0;
  double standard_error = 0.0;
  double mean_half_width = 0.0;
  std::size_t reps = 0;
};

/// Fraction of `reps` bands for mu(t) + Z_t, Z from `spec`, that contain the
/// benchmark trend on [0.05, 0.95].
[[nodiscard]] CoverageResult scb_coverage_study(const ModelSpec& spec, std::size_t n, double h, std::size_t m,
                                                double alpha, std::size_t reps, std::size_t bootstrap,
                                                std::uint64_t seed, unsigned threads = 1);

struct PowerRow {
  double delta = 0.0;
  double rate = 0.0;
  double standard_error = 0.0;
  double mean_cutoff = 0.0;
};

struct PowerStudy {
  std::vector<PowerRow> rows;
  std::optional<double> oracle_cutoff;
};

/// Rejection frequency of the CUSUM test for X_t = delta 1{t > n/2} + Z_t.
/// Every delta reuses the same noise paths and bootstrap streams.
[[nodiscard]] PowerStudy changepoint_power_study(const ModelSpec& spec, std::size_t n, std::size_t m, double alpha,
                                                 std::size_t reps, std::size_t bootstrap,
                                                 const std::vector<double>& deltas, std::uint64_t seed,
                                                 unsigned threads = 1, bool oracle = false,
                                                 std::size_t oracle_draws = 10000);

/// Quantiles of U_X = max S_i, U_1 = max B(E S_i^2) and U_2 = max of the
/// covariance-matching partial sums.
struct QqStudy {
  std::vector<double> q, ux, u1, u2;
  double d1 = 0.0;  ///< qq discrepancy of U_1 against U_X
  double d2 = 0.0;  ///< qq discrepancy of U_2 against U_X
};

[[nodiscard]] QqStudy qq_theoretical_study(const ModelSpec& spec, std::size_t n, std::size_t reps, std::uint64_t seed);

/// U_X against bootstrap maxima of W at the three running-variance estimates
/// computed from a single observed path.
struct QqBootstrapStudy {
  std::vector<double> q, ux, brv, no_cross, overlapping;
  double d_brv = 0.0, d_no_cross = 0.0, d_overlapping = 0.0;
};

[[nodiscard]] QqBootstrapStudy qq_bootstrap_study(const ModelSpec& spec, std::size_t n, std::size_t m,
                                                  std::size_t reps, std::uint64_t seed);

struct DeviationStudy {
  TailTable table;
  LogLogFit upper_fit;  ///< fit on the upper half of the grid
  double fixed_intercept = 0.0;
  bool below_envelope = false;
};

/// Tail of max_k |R_k| for the constant band form a = 1 within D. The grid
/// holds 16 log-spaced points between the pilot median and the pilot 99.5%
/// quantile of an independent pilot run.
[[nodiscard]] DeviationStudy deviation_tail_study(const ModelSpec& spec, std::size_t n, std::size_t bandwidth,
                                                  double p, std::size_t reps, std::uint64_t seed);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void write_csv(std::ostream& out) const;
};

/// Runs the configured study and returns its result table.
[[nodiscard]] ResultTable run_experiment(const ExperimentConfig& config, unsigned threads = 1);

struct RunOutputs {
  std::string csv_path;
  std::string manifest_path;
};

/// Runs, then writes `<out_dir>/<output>.csv` and `<out_dir>/<output>.manifest.json`.
/// Nothing is written when the study fails.
RunOutputs run_and_write(const ExperimentConfig& config, const std::string& out_dir, unsigned threads = 1);

/// Library version recorded in manifests.
[[nodiscard]] std::string library_version();

}  // namespace nsg
