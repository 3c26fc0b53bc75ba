#include "nsg/series_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "nsg/config.hpp"

namespace nsg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw DataError(where + ": not a finite number: '" + s + "'");
}

}  // namespace

double SeriesFile::time_span() const {
  if (time.size() < 2) return 1.0;
  const double range = time.back() - time.front();
  return range + range / static_cast<double>(time.size() - 1);
}

double SeriesFile::to_file_time(double t) const {
  const double span = time_span();
  return time.front() + t * span - (span - (time.back() - time.front()));
}

SeriesFile parse_series_csv(std::istream& in, const std::string& source) {
  SeriesFile f;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw DataError(where + ": expected exactly two comma-separated columns");
    }
    const std::string a = trim(line.substr(0, comma)), b = trim(line.substr(comma + 1));
    if (!header) {
      if (b != "value" || (a != "time" && a != "index")) {
        throw DataError(where + ": header must be 'time,value' or 'index,value'");
      }
      f.index_column = a == "index";
      header = true;
      continue;
    }
    const double t = parse_number(a, where);
    const double v = parse_number(b, where);
    if (!f.time.empty()) {
      if (f.index_column && t != f.time.back() + 1.0) throw DataError(where + ": index column has a gap");
      if (!(t > f.time.back())) throw DataError(where + ": time column not strictly increasing");
    }
    f.time.push_back(t);
    f.values.push_back(v);
  }
  if (!header) throw DataError(source + ": empty file");
  if (f.values.size() < 2) throw DataError(source + ": need at least two observations");
  return f;
}

SeriesFile read_series_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file '" + path + "'");
  return parse_series_csv(in, path);
}

TimeSeries to_time_series(const SeriesFile& f) {
  const std::size_t n = f.size();
  if (n < 2) throw DataError("to_time_series: need at least two observations");
  const double range = f.time.back() - f.time.front();
  const double d = range / static_cast<double>(n - 1);
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = (f.time[i] - f.time.front() + d) / (range + d);
  grid.back() = 1.0;
  return TimeSeries(f.values, std::move(grid));
}

}  // namespace nsg
