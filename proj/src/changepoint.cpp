#include "nsg/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nsg/gaussian_approx.hpp"
#include "nsg/stats.hpp"

namespace nsg {

namespace {

constexpr std::uint32_t kStageNull = 21;

void check_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

}  // namespace

CusumResult cusum(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("cusum: need at least two observations");
  // D_i = n S_i - i S_n is the scaled deviation; shifting x by c adds n i c - i n c = 0.
  double total = 0.0;
  for (double v : x) total += v;
  const double nd = static_cast<double>(n);
  double s = 0.0, best = -1.0;
  std::size_t arg = 1;
  for (std::size_t i = 1; i < n; ++i) {
    s += x[i - 1];
    const double d = std::abs(nd * s - static_cast<double>(i) * total);
    if (d > best) {
      best = d;
      arg = i;
    }
  }
  return {best / (nd * std::sqrt(nd)), arg};
}

CusumResult cusum(const TimeSeries& x) { return cusum(x.values()); }

TimeSeries residualize(const TimeSeries& x, std::size_t tau) {
  const std::size_t n = x.size();
  if (tau < 1 || tau >= n) throw std::out_of_range("residualize: tau must satisfy 1 <= tau < n");
  const auto v = x.values();
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < tau; ++i) s1 += v[i];
  for (std::size_t i = tau; i < n; ++i) s2 += v[i];
  const double n1 = static_cast<double>(tau), n2 = static_cast<double>(n - tau);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < tau; ++i) out[i] = (n1 * v[i] - s1) / n1;
  for (std::size_t i = tau; i < n; ++i) out[i] = (n2 * v[i] - s2) / n2;
  return x.has_grid() ? TimeSeries(std::move(out), *x.grid()) : TimeSeries(std::move(out));
}

std::vector<double> null_draws(const VarianceTrack& track, std::size_t draws, std::uint64_t seed) {
  const std::size_t n = track.size();
  if (n < 2) throw std::invalid_argument("null_draws: track too short");
  const TrackSampler sampler(track.values);
  const double nd = static_cast<double>(n);
  const double scale = 1.0 / std::sqrt(nd);
  std::vector<double> out(draws);
  std::vector<double> w(n);
  for (std::size_t b = 0; b < draws; ++b) {
    Rng rng(seed, stream_id(kStageNull, b));
    sampler.sample(rng, w);
    const double wn = w[n - 1];
    double best = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      best = std::max(best, std::abs(w[i - 1] - static_cast<double>(i) / nd * wn));
    }
    out[b] = best * scale;
  }
  return out;
}

CutoffResult bootstrap_cutoff(const TimeSeries& residuals, std::size_t m, double alpha, std::size_t bootstrap,
                              std::uint64_t seed) {
  check_level(alpha);
  if (bootstrap < 100) throw std::invalid_argument("bootstrap_cutoff: at least 100 bootstrap draws required");
  const auto v = residuals.values();
  if (std::all_of(v.begin(), v.end(), [](double e) { return e == 0.0; })) {
    return {0.0, true, {}};
  }
  const VarianceTrack track = brv(residuals, m);
  CutoffResult out{0.0, false, null_draws(track, bootstrap, seed)};
  out.cutoff = stats::upper_critical_value(out.draws, alpha);
  return out;
}

double oracle_cutoff(const VarianceTrack& exact, double alpha, std::size_t draws, std::uint64_t seed) {
  check_level(alpha);
  if (draws < 100) throw std::invalid_argument("oracle_cutoff: at least 100 draws required");
  return stats::upper_critical_value(null_draws(exact, draws, seed), alpha);
}

ChangePointResult changepoint_test(const TimeSeries& x, std::size_t m, double alpha, std::size_t bootstrap,
                                   std::uint64_t seed) {
  const CusumResult c = cusum(x);
  const TimeSeries z = residualize(x, c.tau_hat);
  const CutoffResult cut = bootstrap_cutoff(z, m, alpha, bootstrap, seed);
  ChangePointResult r;
  r.statistic = c.statistic;
  r.tau_hat = c.tau_hat;
  r.cutoff = cut.cutoff;
  r.bootstrap_draws = bootstrap;
  r.degenerate = cut.degenerate;
  // A degenerate null has V identically zero.
  std::size_t exceed = 0;
  if (cut.degenerate) {
    exceed = c.statistic <= 0.0 ? bootstrap : 0;
  } else {
    for (double d : cut.draws) exceed += d >= c.statistic ? 1 : 0;
  }
  r.p_value = static_cast<double>(1 + exceed) / static_cast<double>(bootstrap + 1);
  r.reject = r.statistic > r.cutoff;
  return r;
}

}  // namespace nsg
