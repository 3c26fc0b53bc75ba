#include "nsg/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nsg/variance.hpp"

namespace nsg {

InnovationSpec ModelSpec::innovation_spec() const {
  switch (innovation) {
    case InnovationKind::standard_normal: return InnovationSpec::normal();
    case InnovationKind::scaled_t: return InnovationSpec::unit_t(df);
    case InnovationKind::centered_chisq1: return InnovationSpec::centered_chisq1();
  }
  return InnovationSpec::normal();
}

std::size_t ExperimentConfig::block_length() const { return m ? *m : default_block_length(n); }

namespace {

template <typename E>
struct Names {
  E value;
  const char* name;
};

constexpr Names<ExperimentKind> kExperiments[] = {
    {ExperimentKind::qq_theoretical, "qq_theoretical"},   {ExperimentKind::qq_bootstrap, "qq_bootstrap"},
    {ExperimentKind::scb_coverage, "scb_coverage"},       {ExperimentKind::changepoint_power, "changepoint_power"},
    {ExperimentKind::deviation_tail, "deviation_tail"},   {ExperimentKind::data_analysis, "data_analysis"},
};
constexpr Names<ModelFamily> kFamilies[] = {{ModelFamily::tvar, "tvar"}, {ModelFamily::sine_tvar, "sine_tvar"}};
constexpr Names<ThetaKind> kPaths[] = {{ThetaKind::constant, "constant"},
                                       {ThetaKind::split_sign, "split_sign"},
                                       {ThetaKind::piecewise4, "piecewise4"},
                                       {ThetaKind::sine8pi, "sine8pi"}};
constexpr Names<InnovationKind> kInnovations[] = {{InnovationKind::standard_normal, "normal"},
                                                  {InnovationKind::scaled_t, "t"},
                                                  {InnovationKind::centered_chisq1, "chisq1"}};

template <typename E, std::size_t N>
const char* name_of(const Names<E> (&table)[N], E v) {
  for (const auto& e : table) {
    if (e.value == v) return e.name;
  }
  return "?";
}

template <typename E, std::size_t N>
E value_of(const Names<E> (&table)[N], const std::string& s, const std::string& where) {
  for (const auto& e : table) {
    if (s == e.name) return e.value;
  }
  std::string allowed;
  for (const auto& e : table) allowed += (allowed.empty() ? "" : ", ") + std::string(e.name);
  throw ConfigError(where + ": unknown value '" + s + "' (expected one of: " + allowed + ")");
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ",") + fmt_double(x);
  return s;
}

double to_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got '" + s + "'");
  }
}

std::uint64_t to_uint(const std::string& s, const std::string& where) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw ConfigError(where + ": expected a nonnegative integer, got '" + s + "'");
  }
  return v;
}

std::vector<double> to_list(const std::string& s, const std::string& where) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), where));
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

void apply(ExperimentConfig& c, const std::string& key, const std::string& value, const std::string& where) {
  if (key == "experiment") c.experiment = value_of(kExperiments, value, where);
  else if (key == "model") c.model.family = value_of(kFamilies, value, where);
  else if (key == "theta_path") c.model.theta_kind = value_of(kPaths, value, where);
  else if (key == "theta") c.model.theta = to_double(value, where);
  else if (key == "innovation") c.model.innovation = value_of(kInnovations, value, where);
  else if (key == "df") c.model.df = static_cast<int>(to_uint(value, where));
  else if (key == "n") c.n = to_uint(value, where);
  else if (key == "m") c.m = value == "auto" ? std::nullopt : std::optional<std::size_t>(to_uint(value, where));
  else if (key == "h") c.h = to_list(value, where);
  else if (key == "alpha") c.alpha = to_double(value, where);
  else if (key == "reps") c.reps = to_uint(value, where);
  else if (key == "bootstrap") c.bootstrap = to_uint(value, where);
  else if (key == "seed") c.seed = to_uint(value, where);
  else if (key == "output") c.output = value;
  else if (key == "delta") c.delta = to_list(value, where);
  else if (key == "cutoff") {
    if (value == "oracle") c.oracle_cutoff = true;
    else if (value == "bootstrap") c.oracle_cutoff = false;
    else throw ConfigError(where + ": cutoff must be 'bootstrap' or 'oracle'");
  } else if (key == "oracle_draws") c.oracle_draws = to_uint(value, where);
  else if (key == "bandwidth") c.bandwidth = to_uint(value, where);
  else if (key == "p") c.p = to_double(value, where);
  else if (key == "input") c.input = value;
  else if (key == "periods") c.periods = value.empty() ? std::vector<double>{} : to_list(value, where);
  else throw ConfigError(where + ": unknown key '" + key + "'");
}

void validate(const ExperimentConfig& c, const std::string& source) {
  auto fail = [&](const std::string& field, const std::string& msg) {
    throw ConfigError(source + ": field '" + field + "': " + msg);
  };
  if (c.n < 2) fail("n", "must be at least 2");
  if (c.m && (*c.m == 0 || *c.m > c.n)) fail("m", "must be in [1, n]");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) fail("alpha", "must lie in (0, 1)");
  if (c.reps == 0) fail("reps", "must be positive");
  if (c.bootstrap == 0) fail("bootstrap", "must be positive");
  if (!(std::abs(c.model.theta) < 1.0)) fail("theta", "|theta| must be below 1");
  if (c.model.innovation == InnovationKind::scaled_t && c.model.df <= 2) fail("df", "t innovations need df > 2");
  for (double h : c.h) {
    if (!(h > 0.0 && h < 0.5)) fail("h", "bandwidths must lie in (0, 0.5)");
  }
  if (c.bandwidth == 0) fail("bandwidth", "must be positive");
  if (c.oracle_draws == 0) fail("oracle_draws", "must be positive");
  if (c.output.empty()) fail("output", "must not be empty");
  if (c.experiment == ExperimentKind::data_analysis && c.input.empty()) fail("input", "required for data_analysis");
}

}  // namespace

std::string experiment_name(ExperimentKind k) { return name_of(kExperiments, k); }

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  ExperimentConfig c;
  std::string line;
  std::size_t lineno = 0;
  bool saw_experiment = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": missing key");
    apply(c, key, value, where);
    saw_experiment = saw_experiment || key == "experiment";
  }
  if (!saw_experiment) throw ConfigError(source + ": missing required key 'experiment'");
  validate(c, source);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(f, path);
}

std::map<std::string, std::string> config_fields(const ExperimentConfig& c) {
  std::map<std::string, std::string> f;
  f["experiment"] = name_of(kExperiments, c.experiment);
  f["model"] = name_of(kFamilies, c.model.family);
  f["theta_path"] = name_of(kPaths, c.model.theta_kind);
  f["theta"] = fmt_double(c.model.theta);
  f["innovation"] = name_of(kInnovations, c.model.innovation);
  f["df"] = std::to_string(c.model.df);
  f["n"] = std::to_string(c.n);
  f["m"] = c.m ? std::to_string(*c.m) : "auto";
  f["h"] = fmt_list(c.h);
  f["alpha"] = fmt_double(c.alpha);
  f["reps"] = std::to_string(c.reps);
  f["bootstrap"] = std::to_string(c.bootstrap);
  f["seed"] = std::to_string(c.seed);
  f["output"] = c.output;
  f["delta"] = fmt_list(c.delta);
  f["cutoff"] = c.oracle_cutoff ? "oracle" : "bootstrap";
  f["oracle_draws"] = std::to_string(c.oracle_draws);
  f["bandwidth"] = std::to_string(c.bandwidth);
  f["p"] = fmt_double(c.p);
  f["input"] = c.input;
  f["periods"] = fmt_list(c.periods);
  return f;
}

std::string to_config_text(const ExperimentConfig& c) {
  std::string s;
  for (const auto& [k, v] : config_fields(c)) s += k + " = " + v + "\n";
  return s;
}

ExperimentConfig config_from_fields(const std::map<std::string, std::string>& fields) {
  std::string text;
  for (const auto& [k, v] : fields) text += k + " = " + v + "\n";
  std::istringstream in(text);
  return parse_config(in, "<manifest>");
}

}  // namespace nsg
