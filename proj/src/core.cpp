#include "nsg/core.hpp"

#include <cmath>
#include <stdexcept>

namespace nsg {

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("TimeSeries: empty series");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("TimeSeries: non-finite value");
  }
}

TimeSeries::TimeSeries(std::vector<double> values, std::vector<double> grid)
    : TimeSeries(std::move(values)) {
  if (grid.size() != values_.size()) {
    throw std::invalid_argument("TimeSeries: grid length differs from value length");
  }
  if (!(grid.front() > 0.0) || grid.back() > 1.0) {
    throw std::invalid_argument("TimeSeries: grid must lie in (0, 1]");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("TimeSeries: grid not strictly increasing");
    }
  }
  grid_ = std::move(grid);
}

std::vector<double> TimeSeries::uniform_grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i + 1) / static_cast<double>(n);
  return g;
}

std::vector<double> TimeSeries::grid_or_uniform() const {
  return grid_ ? *grid_ : uniform_grid(values_.size());
}

BlockScheme::BlockScheme(std::size_t n, std::size_t m) : n_(n), m_(m) {
  if (n == 0) throw std::invalid_argument("BlockScheme: n must be positive");
  if (m == 0 || m > n) throw std::invalid_argument("BlockScheme: block length must be in [1, n]");
}

std::vector<double> partial_sums(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("partial_sums: empty series");
  std::vector<double> out(x.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    s += x[i];
    out[i] = s;
  }
  return out;
}

std::vector<double> block_sums(std::span<const double> x, const BlockScheme& scheme) {
  if (x.size() != scheme.n()) throw std::invalid_argument("block_sums: length differs from scheme");
  std::vector<double> out(scheme.block_count(), 0.0);
  for (std::size_t a = 1; a <= out.size(); ++a) {
    double s = 0.0;
    for (std::size_t i = scheme.block_first(a); i < scheme.block_last(a); ++i) s += x[i];
    out[a - 1] = s;
  }
  return out;
}

double remainder_sum(std::span<const double> x, const BlockScheme& scheme, std::size_t j) {
  if (x.size() != scheme.n()) throw std::invalid_argument("remainder_sum: length differs from scheme");
  if (j < 1 || j > scheme.n()) throw std::out_of_range("remainder_sum: j out of range");
  const std::size_t m = scheme.m();
  double s = 0.0;
  for (std::size_t i = (j / m) * m; i < j; ++i) s += x[i];
  return s;
}

WeightFamily cusum_weights(std::size_t n) {
  if (n < 2) throw std::invalid_argument("cusum_weights: n must be at least 2");
  const double nd = static_cast<double>(n);
  const double scale = 1.0 / std::sqrt(nd);
  auto eval = [nd, scale](double t, std::size_t i) {
    const double cut = std::floor(nd * t);
    return (static_cast<double>(i) <= cut ? (1.0 - 1.0 / nd) : -1.0 / nd) * scale;
  };
  return {WeightKind::cusum, n, eval, interior_grid(0.0, 1.0)};
}

WeightFamily haar_weights(std::size_t n, unsigned j) {
  if (j == 0) throw std::invalid_argument("haar_weights: level must be >= 1");
  const std::size_t len = std::size_t{1} << j;
  if (len > n) throw std::invalid_argument("haar_weights: filter longer than series");
  const std::size_t translates = n / len;
  const double amp = std::pow(2.0, -0.5 * j);
  auto eval = [=](double t, std::size_t i) {
    auto tr = static_cast<std::size_t>(std::ceil(t * static_cast<double>(translates)));
    if (tr < 1) tr = 1;
    if (tr > translates) tr = translates;
    // W_{j,tr} = sum_l h_{j,l} X_{2^j tr - l + 1}; index i corresponds to l = 2^j tr - i + 1.
    const std::size_t hi = len * tr;
    if (i + len <= hi || i > hi) return 0.0;
    const std::size_t l = hi - i + 1;
    return l <= len / 2 ? -amp : amp;
  };
  return {WeightKind::haar, n, eval, interior_grid(0.0, 1.0)};
}

WeightFamily constant_weights(std::size_t n, double c) {
  if (n == 0) throw std::invalid_argument("constant_weights: n must be positive");
  return {WeightKind::constant, n, [c](double, std::size_t) { return c; }, interior_grid(0.0, 1.0)};
}

std::vector<double> interior_grid(double lo, double hi, std::size_t count) {
  if (count == 0 || !(hi > lo)) throw std::invalid_argument("interior_grid: empty range");
  std::vector<double> g(count);
  const double step = (hi - lo) / static_cast<double>(count + 1);
  for (std::size_t k = 0; k < count; ++k) g[k] = lo + step * static_cast<double>(k + 1);
  return g;
}

double weight_total_variation(const WeightFamily& w, std::span<const double> t_grid) {
  if (t_grid.empty()) throw std::invalid_argument("weight_total_variation: empty grid");
  double sup = 0.0;
  for (double t : t_grid) {
    double prev = w.evaluator(t, 1);
    double tv = std::abs(prev);
    for (std::size_t i = 2; i <= w.n; ++i) {
      const double cur = w.evaluator(t, i);
      tv += std::abs(cur - prev);
      prev = cur;
    }
    sup = std::max(sup, tv);
  }
  return sup;
}

double weight_total_variation(const WeightFamily& w) {
  return weight_total_variation(w, w.default_grid);
}

}  // namespace nsg
