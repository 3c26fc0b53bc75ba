#pragma once

#include <istream>
#include <string>
#include <vector>

#include "nsg/core.hpp"

namespace nsg {

/// Two-column CSV with header `time,value` (strictly increasing times) or
/// `index,value` (consecutive integers).
struct SeriesFile {
  std::vector<double> time;
  std::vector<double> values;
  bool index_column = false;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  /// Length of time one unit of the rescaled grid represents: range + spacing.
  [[nodiscard]] double time_span() const;
  /// Maps grid time t in (0, 1] back to the file's time units.
  [[nodiscard]] double to_file_time(double t) const;
};

/// Throws DataError with the offending line number.
[[nodiscard]] SeriesFile parse_series_csv(std::istream& in, const std::string& source = "<csv>");
[[nodiscard]] SeriesFile read_series_csv(const std::string& path);

/// Series with grid t_i = (time_i - time_1 + d) / (range + d), d = range / (n - 1),
/// so equispaced times give t_i = i/n.
[[nodiscard]] TimeSeries to_time_series(const SeriesFile& f);

}  // namespace nsg
