#include "nsg/dependence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nsg/stats.hpp"

namespace nsg {

DependenceProfile DependenceProfile::from_deltas(double p, std::vector<double> deltas) {
  DependenceProfile prof;
  prof.p = p;
  prof.deltas = std::move(deltas);
  prof.thetas.assign(prof.deltas.size(), 0.0);
  double tail = 0.0;
  for (std::size_t k = prof.deltas.size(); k-- > 0;) {
    if (prof.deltas[k] < 0.0) throw std::invalid_argument("DependenceProfile: negative delta");
    tail += prof.deltas[k];
    prof.thetas[k] = tail;
  }
  // Re-derive the deltas from the sums so consecutive differences match bit for bit.
  for (std::size_t k = 0; k < prof.deltas.size(); ++k) {
    const double next = k + 1 < prof.thetas.size() ? prof.thetas[k + 1] : 0.0;
    prof.deltas[k] = prof.thetas[k] - next;
  }
  return prof;
}

DependenceProfile DependenceProfile::from_thetas(double p, std::vector<double> thetas) {
  DependenceProfile prof;
  prof.p = p;
  prof.thetas = std::move(thetas);
  prof.deltas.resize(prof.thetas.size());
  for (std::size_t k = 0; k < prof.thetas.size(); ++k) {
    const double next = k + 1 < prof.thetas.size() ? prof.thetas[k + 1] : 0.0;
    prof.deltas[k] = prof.thetas[k] - next;
  }
  return prof;
}

std::vector<std::size_t> default_index_grid(std::size_t n, std::size_t k) {
  if (k + 1 > n) throw std::invalid_argument("default_index_grid: lag leaves no admissible index");
  const std::size_t lo = k + 1;
  const std::size_t span = n - lo;
  std::vector<std::size_t> g;
  for (std::size_t r = 0; r < 8; ++r) {
    const std::size_t i = lo + (span * r) / 7;
    if (g.empty() || g.back() != i) g.push_back(i);
  }
  return g;
}

double estimate_fdm(const SimulableModel& model, std::size_t k, double p, std::size_t reps,
                    const std::vector<std::size_t>& i_grid, std::uint64_t seed) {
  if (!(p > 0.0)) throw std::invalid_argument("estimate_fdm: p must be positive");
  if (reps < 100) throw std::invalid_argument("estimate_fdm: at least 100 replications required");
  const std::size_t len = model.presample + model.n;
  double best = 0.0;
  bool any = false;
  for (std::size_t gi = 0; gi < i_grid.size(); ++gi) {
    const std::size_t i = i_grid[gi];
    if (i < 1 || i > model.n) throw std::out_of_range("estimate_fdm: index outside 1..n");
    // Innovation eps_{i-k} sits at offset presample + i - k - 1.
    if (i + model.presample < k + 1) continue;
    const std::size_t pos = model.presample + i - k - 1;
    any = true;
    Rng rng(seed, stream_id(static_cast<std::uint32_t>(gi), k));
    std::vector<double> eps(len);
    double fresh = 0.0;
    double acc = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      draw_innovations(model.innovations, rng, eps);
      draw_innovations(model.innovations, rng, std::span<double>(&fresh, 1));
      const double xi = model.transform(eps)[i - 1];
      eps[pos] = fresh;
      const double xc = model.transform(eps)[i - 1];
      acc += std::pow(std::abs(xi - xc), p);
    }
    best = std::max(best, std::pow(acc / static_cast<double>(reps), 1.0 / p));
  }
  if (!any) throw std::invalid_argument("estimate_fdm: every index in the grid was skipped");
  return best;
}

DependenceProfile dependence_profile(const SimulableModel& model, std::size_t max_lag, double p,
                                     std::size_t reps, std::uint64_t seed) {
  if (max_lag + 1 > model.n) throw std::invalid_argument("dependence_profile: max_lag too large for n");
  const auto grid = default_index_grid(model.n, max_lag);
  std::vector<double> deltas(max_lag + 1);
  for (std::size_t k = 0; k <= max_lag; ++k) deltas[k] = estimate_fdm(model, k, p, reps, grid, seed);
  return DependenceProfile::from_deltas(p, std::move(deltas));
}

DecayFit decay_fit(const DependenceProfile& profile) {
  const auto& th = profile.thetas;
  if (th.size() < 4) throw std::invalid_argument("decay_fit: need at least 4 tail sums");
  std::vector<double> lx(th.size()), ly(th.size());
  for (std::size_t i = 0; i < th.size(); ++i) {
    if (!(th[i] > 0.0)) throw std::invalid_argument("decay_fit: nonpositive tail sum");
    lx[i] = std::log(static_cast<double>(i + 1));
    ly[i] = -std::log(th[i]);
  }
  const double a = stats::least_squares_line(lx, ly).slope;
  double mu = 0.0;
  for (std::size_t i = 0; i < th.size(); ++i) mu = std::max(mu, std::pow(static_cast<double>(i + 1), a) * th[i]);
  return {a, mu};
}

}  // namespace nsg
