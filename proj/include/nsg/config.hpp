#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsg/models.hpp"

namespace nsg {

/// Invalid configuration; `what()` names the line or field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or malformed input data.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { qq_theoretical, qq_bootstrap, scb_coverage, changepoint_power, deviation_tail, data_analysis };

enum class ModelFamily { tvar, sine_tvar };

struct ModelSpec {
  ModelFamily family = ModelFamily::tvar;
  ThetaKind theta_kind = ThetaKind::piecewise4;
  double theta = 0.0;
  InnovationKind innovation = InnovationKind::standard_normal;
  int df = 0;

  [[nodiscard]] InnovationSpec innovation_spec() const;
  bool operator==(const ModelSpec&) const = default;
};

/// One Monte Carlo study. Parsed from flat `key = value` text; see README for the keys.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::scb_coverage;
  ModelSpec model;
  std::size_t n = 600;
  std::optional<std::size_t> m;  ///< nullopt means floor(n^{1/3})
  std::vector<double> h{0.13};
  double alpha = 0.05;
  std::size_t reps = 1000;
  std::size_t bootstrap = 500;
  std::uint64_t seed = 1;
  std::string output = "results";
  std::vector<double> delta{0.0};
  bool oracle_cutoff = false;        ///< changepoint_power: exact-track cutoff instead of bootstrap
  std::size_t oracle_draws = 10000;  ///< Monte Carlo draws for the oracle cutoff
  std::size_t bandwidth = 16;        ///< deviation_tail: band D
  double p = 4.0;                    ///< deviation_tail: moment order of the envelope
  std::string input;                 ///< data_analysis: CSV path
  std::vector<double> periods;       ///< data_analysis: harmonic periods

  [[nodiscard]] std::size_t block_length() const;
  bool operator==(const ExperimentConfig&) const = default;
};

[[nodiscard]] ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

/// Canonical key/value form; parse_config(to_config_text(c)) == c.
[[nodiscard]] std::map<std::string, std::string> config_fields(const ExperimentConfig& c);
[[nodiscard]] std::string to_config_text(const ExperimentConfig& c);
[[nodiscard]] ExperimentConfig config_from_fields(const std::map<std::string, std::string>& fields);

[[nodiscard]] std::string experiment_name(ExperimentKind k);

}  // namespace nsg
