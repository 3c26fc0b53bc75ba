#include "nsg/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "nsg/analyze.hpp"
#include "nsg/changepoint.hpp"
#include "nsg/gaussian_approx.hpp"
#include "nsg/scb.hpp"
#include "nsg/series_file.hpp"
#include "nsg/stats.hpp"
#include "nsg/variance.hpp"

namespace nsg {

namespace {

constexpr std::uint32_t kStageNoise = 51;
constexpr std::size_t kCovarianceReps = 100000;

// Sub-seed labels.
enum : std::uint64_t {
  kLabelNoise = 1,
  kLabelBootstrap,
  kLabelOracle,
  kLabelCovariance,
  kLabelUx,
  kLabelU1,
  kLabelU2,
  kLabelObserved,
  kLabelBrv,
  kLabelNoCross,
  kLabelOverlap,
  kLabelPilot,
  kLabelTail,
};

// f(i) for i in [0, count) on up to `threads` workers. Results must be
// written to per-index slots so the outcome does not depend on scheduling.
template <typename F>
void parallel_for(std::size_t count, unsigned threads, F&& f) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(count);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<double> uniform_grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i + 1) / static_cast<double>(n);
  return g;
}

std::vector<double> noise_path(const SimulableModel& model, std::uint64_t seed, std::size_t r) {
  Rng rng(mix_seed(seed, kLabelNoise), stream_id(kStageNoise, r));
  return model.simulate(rng);
}

VarianceTrack model_track(const ModelSpec& spec, std::size_t n, std::uint64_t seed) {
  if (spec.family == ModelFamily::tvar) {
    return VarianceTrack{tvar_partial_variance(theta_path(spec.theta_kind, spec.theta, n), spec.innovation_spec().variance()),
                         TrackKind::exact, 0};
  }
  return exact_partial_variance(model_covariance(spec, n, seed));
}

std::vector<double> quantiles(std::vector<double> draws, const std::vector<double>& q) {
  std::sort(draws.begin(), draws.end());
  std::vector<double> out;
  out.reserve(q.size());
  for (double p : q) out.push_back(stats::quantile_sorted(draws, p));
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

SimulableModel make_model(const ModelSpec& spec, std::size_t n) {
  const ThetaPath path = theta_path(spec.theta_kind, spec.theta, n);
  const InnovationSpec innov = spec.innovation_spec();
  return spec.family == ModelFamily::tvar ? tvar_model(path, innov) : sine_tvar_model(path, innov);
}

CovarianceOracle monte_carlo_covariance(const SimulableModel& model, std::size_t reps, std::uint64_t seed) {
  if (reps < 2) throw std::invalid_argument("monte_carlo_covariance: need at least two paths");
  const auto n = static_cast<Eigen::Index>(model.n);
  constexpr std::size_t kBatch = 512;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd batch(static_cast<Eigen::Index>(kBatch), n);
  for (std::size_t start = 0; start < reps; start += kBatch) {
    const std::size_t rows = std::min(kBatch, reps - start);
    for (std::size_t r = 0; r < rows; ++r) {
      Rng rng(seed, stream_id(kStageNoise, start + r));
      const auto x = model.simulate(rng);
      for (Eigen::Index t = 0; t < n; ++t) batch(static_cast<Eigen::Index>(r), t) = x[static_cast<std::size_t>(t)];
    }
    const auto b = batch.topRows(static_cast<Eigen::Index>(rows));
    acc.selfadjointView<Eigen::Lower>().rankUpdate(b.transpose());
  }
  Eigen::MatrixXd cov = acc.selfadjointView<Eigen::Lower>();
  cov /= static_cast<double>(reps);
  return CovarianceOracle(std::move(cov));
}

CovarianceOracle model_covariance(const ModelSpec& spec, std::size_t n, std::uint64_t seed) {
  if (spec.family == ModelFamily::tvar) {
    return tvar_covariance(theta_path(spec.theta_kind, spec.theta, n), spec.innovation_spec().variance());
  }
  return monte_carlo_covariance(make_model(spec, n), kCovarianceReps, mix_seed(seed, kLabelCovariance));
}

CoverageResult scb_coverage_study(const ModelSpec& spec, std::size_t n, double h, std::size_t m, double alpha,
                                  std::size_t reps, std::size_t bootstrap, std::uint64_t seed, unsigned threads) {
  if (reps == 0) throw std::invalid_argument("scb_coverage_study: reps must be positive");
  const SimulableModel model = make_model(spec, n);
  const std::vector<double> grid = uniform_grid(n);
  std::vector<char> covered(reps, 0);
  std::vector<double> widths(reps, 0.0);
  parallel_for(reps, threads, [&](std::size_t r) {
    const TimeSeries x = signal_plus_noise(benchmark_trend, grid, TimeSeries(noise_path(model, seed, r)));
    const BandResult band = scb_build(x, h, m, alpha, bootstrap, mix_seed(mix_seed(seed, kLabelBootstrap), r));
    covered[r] = band_contains(band, benchmark_trend, 0.05, 0.95) ? 1 : 0;
    widths[r] = band.half_width;
  });
  CoverageResult out;
  out.reps = reps;
  out.coverage = static_cast<double>(std::count(covered.begin(), covered.end(), 1)) / static_cast<double>(reps);
  out.standard_error = stats::rate_standard_error(out.coverage, reps);
  out.mean_half_width = stats::mean(widths);
  return out;
}

PowerStudy changepoint_power_study(const ModelSpec& spec, std::size_t n, std::size_t m, double alpha, std::size_t reps,
                                   std::size_t bootstrap, const std::vector<double>& deltas, std::uint64_t seed,
                                   unsigned threads, bool oracle, std::size_t oracle_draws) {
  if (reps == 0) throw std::invalid_argument("changepoint_power_study: reps must be positive");
  if (deltas.empty()) throw std::invalid_argument("changepoint_power_study: empty delta grid");
  const SimulableModel model = make_model(spec, n);
  PowerStudy study;
  if (oracle) {
    study.oracle_cutoff = oracle_cutoff(model_track(spec, n, seed), alpha, oracle_draws, mix_seed(seed, kLabelOracle));
  }
  const std::size_t tau = n / 2;
  const std::size_t k = deltas.size();
  std::vector<char> reject(reps * k, 0);
  std::vector<double> cutoffs(reps * k, 0.0);
  parallel_for(reps, threads, [&](std::size_t r) {
    const TimeSeries noise(noise_path(model, seed, r));
    const std::uint64_t boot_seed = mix_seed(mix_seed(seed, kLabelBootstrap), r);
    for (std::size_t d = 0; d < k; ++d) {
      const TimeSeries x = add_mean_shift(noise, deltas[d], tau);
      if (study.oracle_cutoff) {
        reject[r * k + d] = cusum(x).statistic > *study.oracle_cutoff ? 1 : 0;
        cutoffs[r * k + d] = *study.oracle_cutoff;
      } else {
        const ChangePointResult res = changepoint_test(x, m, alpha, bootstrap, boot_seed);
        reject[r * k + d] = res.reject ? 1 : 0;
        cutoffs[r * k + d] = res.cutoff;
      }
    }
  });
  for (std::size_t d = 0; d < k; ++d) {
    std::size_t hits = 0;
    double cut = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      hits += static_cast<std::size_t>(reject[r * k + d]);
      cut += cutoffs[r * k + d];
    }
    PowerRow row;
    row.delta = deltas[d];
    row.rate = static_cast<double>(hits) / static_cast<double>(reps);
    row.standard_error = stats::rate_standard_error(row.rate, reps);
    row.mean_cutoff = cut / static_cast<double>(reps);
    study.rows.push_back(row);
  }
  return study;
}

QqStudy qq_theoretical_study(const ModelSpec& spec, std::size_t n, std::size_t reps, std::uint64_t seed) {
  const SimulableModel model = make_model(spec, n);
  const CovarianceOracle cov = model_covariance(spec, n, seed);
  const VarianceTrack track = spec.family == ModelFamily::tvar ? model_track(spec, n, seed) : exact_partial_variance(cov);
  const MaxStatisticSample ux = max_statistic_model(model, reps, mix_seed(seed, kLabelUx));
  const MaxStatisticSample u1 = max_statistic_track(track, reps, mix_seed(seed, kLabelU1));
  const MaxStatisticSample u2 = max_statistic_covariance(cov, reps, mix_seed(seed, kLabelU2));
  QqStudy out;
  out.q = default_quantile_grid();
  out.ux = quantiles(ux.draws, out.q);
  out.u1 = quantiles(u1.draws, out.q);
  out.u2 = quantiles(u2.draws, out.q);
  out.d1 = qq_discrepancy(ux, u1, out.q);
  out.d2 = qq_discrepancy(ux, u2, out.q);
  return out;
}

QqBootstrapStudy qq_bootstrap_study(const ModelSpec& spec, std::size_t n, std::size_t m, std::size_t reps,
                                    std::uint64_t seed) {
  const SimulableModel model = make_model(spec, n);
  const MaxStatisticSample ux = max_statistic_model(model, reps, mix_seed(seed, kLabelUx));
  const std::vector<double> x = model.simulate(mix_seed(seed, kLabelObserved));
  const MaxStatisticSample a = max_statistic_track(brv(x, m), reps, mix_seed(seed, kLabelBrv));
  const MaxStatisticSample b = max_statistic_track(brv_no_cross(x, m), reps, mix_seed(seed, kLabelNoCross));
  const MaxStatisticSample c = max_statistic_track(overlapping_variance(x, m), reps, mix_seed(seed, kLabelOverlap));
  QqBootstrapStudy out;
  out.q = default_quantile_grid();
  out.ux = quantiles(ux.draws, out.q);
  out.brv = quantiles(a.draws, out.q);
  out.no_cross = quantiles(b.draws, out.q);
  out.overlapping = quantiles(c.draws, out.q);
  out.d_brv = qq_discrepancy(ux, a, out.q);
  out.d_no_cross = qq_discrepancy(ux, b, out.q);
  out.d_overlapping = qq_discrepancy(ux, c, out.q);
  return out;
}

DeviationStudy deviation_tail_study(const ModelSpec& spec, std::size_t n, std::size_t bandwidth, double p,
                                    std::size_t reps, std::uint64_t seed) {
  const SimulableModel model = make_model(spec, n);
  const BandedQuadratic q = BandedQuadratic::constant(n, bandwidth, 1.0);
  const std::uint64_t pilot_seed = mix_seed(seed, kLabelPilot);
  const auto pilot_means = monte_carlo_block_means(model, q, reps, pilot_seed);
  auto pilot = max_deviation_draws(model, q, pilot_means, reps, pilot_seed);
  std::sort(pilot.begin(), pilot.end());
  const double lo = stats::quantile_sorted(pilot, 0.5);
  const double hi = stats::quantile_sorted(pilot, 0.995);
  if (!(lo > 0.0 && hi > lo)) throw NumericalError("deviation_tail_study: degenerate pilot distribution");
  constexpr std::size_t kPoints = 16;
  std::vector<double> grid(kPoints);
  for (std::size_t i = 0; i < kPoints; ++i) {
    grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(kPoints - 1));
  }
  DeviationStudy out;
  out.table = tail_study(model, q, grid, reps, mix_seed(seed, kLabelTail));
  out.upper_fit = log_tail_fit(out.table, kPoints / 2);
  out.fixed_intercept = fixed_slope_intercept(out.table, p);
  out.below_envelope = below_anchored_envelope(out.table, p);
  return out;
}

void ResultTable::write_csv(std::ostream& out) const {
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_double(row[c]);
    out << '\n';
  }
}

ResultTable run_experiment(const ExperimentConfig& c, unsigned threads) {
  ResultTable t;
  const std::size_t m = c.block_length();
  switch (c.experiment) {
    case ExperimentKind::scb_coverage: {
      t.columns = {"n", "h", "coverage", "coverage_se", "mean_half_width"};
      for (std::size_t i = 0; i < c.h.size(); ++i) {
        const auto r = scb_coverage_study(c.model, c.n, c.h[i], m, c.alpha, c.reps, c.bootstrap, mix_seed(c.seed, i),
                                          threads);
        t.rows.push_back({static_cast<double>(c.n), c.h[i], r.coverage, r.standard_error, r.mean_half_width});
      }
      break;
    }
    case ExperimentKind::changepoint_power: {
      const auto s = changepoint_power_study(c.model, c.n, m, c.alpha, c.reps, c.bootstrap, c.delta, c.seed, threads,
                                             c.oracle_cutoff, c.oracle_draws);
      t.columns = {"delta", "rejection_rate", "rejection_rate_se", "mean_cutoff"};
      for (const auto& r : s.rows) t.rows.push_back({r.delta, r.rate, r.standard_error, r.mean_cutoff});
      break;
    }
    case ExperimentKind::qq_theoretical: {
      const auto s = qq_theoretical_study(c.model, c.n, c.reps, c.seed);
      t.columns = {"q", "U_X", "U_1", "U_2"};
      for (std::size_t i = 0; i < s.q.size(); ++i) t.rows.push_back({s.q[i], s.ux[i], s.u1[i], s.u2[i]});
      break;
    }
    case ExperimentKind::qq_bootstrap: {
      const auto s = qq_bootstrap_study(c.model, c.n, m, c.reps, c.seed);
      t.columns = {"q", "U_X", "brv", "brv_no_cross", "overlapping"};
      for (std::size_t i = 0; i < s.q.size(); ++i) {
        t.rows.push_back({s.q[i], s.ux[i], s.brv[i], s.no_cross[i], s.overlapping[i]});
      }
      break;
    }
    case ExperimentKind::deviation_tail: {
      const auto s = deviation_tail_study(c.model, c.n, c.bandwidth, c.p, c.reps, c.seed);
      t.columns = {"x", "tail", "tail_se"};
      for (std::size_t i = 0; i < s.table.x.size(); ++i) {
        t.rows.push_back({s.table.x[i], s.table.tail[i], s.table.standard_error[i]});
      }
      break;
    }
    case ExperimentKind::data_analysis: {
      const SeriesFile f = read_series_csv(c.input);
      AnalyzeOptions opts;
      opts.m = c.m.value_or(0);
      opts.h = c.h.front();
      opts.alpha = c.alpha;
      opts.bootstrap = c.bootstrap;
      opts.seed = c.seed;
      opts.periods = c.periods;
      const nlohmann::json report = analyze_series(f, opts);
      const auto& band = report.at("band");
      t.columns = {"t", "time", "mu_tilde", "lower", "upper"};
      for (std::size_t i = 0; i < band.at("t").size(); ++i) {
        t.rows.push_back({band["t"][i].get<double>(), band["time"][i].get<double>(), band["mu_tilde"][i].get<double>(),
                          band["lower"][i].get<double>(), band["upper"][i].get<double>()});
      }
      break;
    }
  }
  return t;
}

std::string library_version() { return "1.0.0"; }

RunOutputs run_and_write(const ExperimentConfig& config, const std::string& out_dir, unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  const ResultTable table = run_experiment(config, threads);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const fs::path csv = dir / (config.output + ".csv");
  const fs::path manifest = dir / (config.output + ".manifest.json");

  std::ostringstream csv_text;
  table.write_csv(csv_text);
  nlohmann::json m;
  m["config"] = config_fields(config);
  m["seed"] = config.seed;
  m["version"] = library_version();
  m["wall_time_seconds"] = wall;
  m["threads"] = threads;
  m["results"] = csv.filename().string();

  auto write_atomically = [](const fs::path& path, const std::string& text) {
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream f(tmp, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write '" + tmp.string() + "'");
      f << text;
      if (!f) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
  };
  write_atomically(csv, csv_text.str());
  write_atomically(manifest, m.dump(2) + "\n");
  return {csv.string(), manifest.string()};
}

}  // namespace nsg
