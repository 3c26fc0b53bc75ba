#include "nsg/deviation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nsg/stats.hpp"

namespace nsg {

namespace {

constexpr std::uint32_t kStageMeans = 41;
constexpr std::uint32_t kStageTail = 42;

}  // namespace

BandedQuadratic::BandedQuadratic(std::size_t n, std::size_t bandwidth) : n_(n), d_(bandwidth) {
  if (n == 0) throw std::invalid_argument("BandedQuadratic: n must be positive");
  if (bandwidth == 0) throw std::invalid_argument("BandedQuadratic: bandwidth must be positive");
  a_.assign(n * (bandwidth + 1), 0.0);
}

BandedQuadratic BandedQuadratic::constant(std::size_t n, std::size_t bandwidth, double value) {
  BandedQuadratic q(n, bandwidth);
  for (std::size_t t = 1; t <= n; ++t) {
    for (std::size_t s = t > bandwidth ? t - bandwidth : 1; s <= t; ++s) q.set(s, t, value);
  }
  return q;
}

BandedQuadratic BandedQuadratic::brv_form(std::size_t n, std::size_t m) {
  if (m == 0 || m > n) throw std::invalid_argument("brv_form: block length must be in [1, n]");
  BandedQuadratic q(n, 2 * m);
  for (std::size_t t = 1; t <= n; ++t) {
    const std::size_t bt = (t - 1) / m;
    for (std::size_t s = t > 2 * m ? t - 2 * m : 1; s <= t; ++s) {
      const std::size_t bs = (s - 1) / m;
      if (s == t) q.set(s, t, 0.5);
      else if (bt - bs <= 1) q.set(s, t, 1.0);
    }
  }
  return q;
}

void BandedQuadratic::set(std::size_t s, std::size_t t, double a) {
  if (s < 1 || t > n_ || s > t) throw std::out_of_range("BandedQuadratic: need 1 <= s <= t <= n");
  if (t - s > d_) throw std::invalid_argument("BandedQuadratic: coefficient outside the band");
  if (!(std::abs(a) <= 1.0)) throw std::invalid_argument("BandedQuadratic: |a| must not exceed 1");
  a_[(t - 1) * (d_ + 1) + (t - s)] = a;
}

double BandedQuadratic::operator()(std::size_t s, std::size_t t) const {
  if (s > t) std::swap(s, t);
  if (s < 1 || t > n_) throw std::out_of_range("BandedQuadratic: index out of range");
  if (t - s > d_) return 0.0;
  return a_[(t - 1) * (d_ + 1) + (t - s)];
}

QuadraticBlocks quadratic_blocks(std::span<const double> x, const BandedQuadratic& q) {
  const std::size_t n = q.n(), d = q.bandwidth();
  if (x.size() != n) throw std::invalid_argument("quadratic_blocks: length differs from the form");
  QuadraticBlocks out{std::vector<double>(q.block_count(), 0.0), 0.0};
  for (std::size_t t = 1; t <= n; ++t) {
    double row = 0.0;
    for (std::size_t s = t > d ? t - d : 1; s <= t; ++s) row += q(s, t) * x[s - 1];
    out.v[(t - 1) / d] += row * x[t - 1];
  }
  for (double v : out.v) out.q += v;
  return out;
}

double centered_max_process(std::span<const double> x, const BandedQuadratic& q, std::span<const double> mean_oracle) {
  if (mean_oracle.size() != q.block_count()) {
    throw std::invalid_argument("centered_max_process: mean oracle length differs from the block count");
  }
  const QuadraticBlocks b = quadratic_blocks(x, q);
  double r = 0.0, best = 0.0;
  for (std::size_t k = 0; k < b.v.size(); ++k) {
    r += b.v[k] - mean_oracle[k];
    best = std::max(best, std::abs(r));
  }
  return best;
}

std::vector<double> exact_block_means(const BandedQuadratic& q, const CovarianceOracle& oracle) {
  if (oracle.size() != q.n()) throw std::invalid_argument("exact_block_means: size mismatch");
  const std::size_t n = q.n(), d = q.bandwidth();
  std::vector<double> mean(q.block_count(), 0.0);
  for (std::size_t t = 1; t <= n; ++t) {
    for (std::size_t s = t > d ? t - d : 1; s <= t; ++s) mean[(t - 1) / d] += q(s, t) * oracle(s, t);
  }
  return mean;
}

std::vector<double> monte_carlo_block_means(const SimulableModel& model, const BandedQuadratic& q, std::size_t reps,
                                            std::uint64_t seed) {
  if (reps == 0) throw std::invalid_argument("monte_carlo_block_means: reps must be positive");
  std::vector<double> mean(q.block_count(), 0.0);
  for (std::size_t r = 0; r < reps; ++r) {
    Rng rng(seed, stream_id(kStageMeans, r));
    const QuadraticBlocks b = quadratic_blocks(model.simulate(rng), q);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += b.v[k];
  }
  for (double& m : mean) m /= static_cast<double>(reps);
  return mean;
}

std::vector<double> max_deviation_draws(const SimulableModel& model, const BandedQuadratic& q,
                                        std::span<const double> means, std::size_t reps, std::uint64_t seed) {
  std::vector<double> out(reps);
  for (std::size_t r = 0; r < reps; ++r) {
    Rng rng(seed, stream_id(kStageTail, r));
    out[r] = centered_max_process(model.simulate(rng), q, means);
  }
  return out;
}

TailTable tail_table(std::span<const double> draws, std::span<const double> x_grid) {
  if (draws.empty()) throw std::invalid_argument("tail_table: no draws");
  TailTable t;
  const auto reps = static_cast<double>(draws.size());
  for (double x : x_grid) {
    const auto hits = std::count_if(draws.begin(), draws.end(), [x](double d) { return d >= x; });
    const double p = static_cast<double>(hits) / reps;
    t.x.push_back(x);
    t.tail.push_back(p);
    t.standard_error.push_back(stats::rate_standard_error(p, draws.size()));
  }
  return t;
}

TailTable tail_study(const SimulableModel& model, const BandedQuadratic& q, std::span<const double> x_grid,
                     std::size_t reps, std::uint64_t seed) {
  if (reps < 500) throw std::invalid_argument("tail_study: at least 500 replications required");
  const auto means = monte_carlo_block_means(model, q, reps, seed);
  const auto draws = max_deviation_draws(model, q, means, reps, seed);
  return tail_table(draws, x_grid);
}

LogLogFit log_tail_fit(const TailTable& table, std::size_t first) {
  std::vector<double> lx, ly;
  for (std::size_t k = first; k < table.x.size(); ++k) {
    if (table.tail[k] > 0.0 && table.x[k] > 0.0) {
      lx.push_back(std::log(table.x[k]));
      ly.push_back(std::log(table.tail[k]));
    }
  }
  if (lx.size() < 2) throw std::invalid_argument("log_tail_fit: fewer than two positive tail points");
  const auto fit = stats::least_squares_line(lx, ly);
  return {fit.slope, fit.intercept, lx.size()};
}

double fixed_slope_intercept(const TailTable& table, double p) {
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < table.x.size(); ++k) {
    if (table.tail[k] > 0.0 && table.x[k] > 0.0) {
      acc += std::log(table.tail[k]) + 0.5 * p * std::log(table.x[k]);
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("fixed_slope_intercept: no positive tail points");
  return acc / static_cast<double>(count);
}

bool below_anchored_envelope(const TailTable& table, double p) {
  if (table.x.empty()) throw std::invalid_argument("below_anchored_envelope: empty table");
  const double x0 = table.x.front(), c = table.tail.front() * std::pow(x0, 0.5 * p);
  for (std::size_t k = 0; k < table.x.size(); ++k) {
    if (table.tail[k] > c * std::pow(table.x[k], -0.5 * p) * (1.0 + 1e-12)) return false;
  }
  return true;
}

}  // namespace nsg
