#include "nsg/wavelet.hpp"

#include <cmath>
#include <stdexcept>

#include "nsg/gaussian_approx.hpp"

namespace nsg {

HaarLevel haar_level(unsigned j) {
  if (j == 0 || j > 62) throw std::invalid_argument("haar_level: level must be in [1, 62]");
  const std::size_t len = std::size_t{1} << j;
  const double amp = std::pow(2.0, -0.5 * j);
  HaarLevel h{j, std::vector<double>(len)};
  for (std::size_t l = 0; l < len; ++l) h.filter[l] = l < len / 2 ? -amp : amp;
  return h;
}

std::vector<double> haar_coefficients(std::span<const double> x, unsigned j) {
  const std::size_t n = x.size();
  if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("haar_coefficients: n must be a power of two");
  const HaarLevel h = haar_level(j);
  const std::size_t len = h.filter.size();
  if (len > n) throw std::invalid_argument("haar_coefficients: level exceeds log2(n)");
  std::vector<double> w(n / len);
  for (std::size_t t = 1; t <= w.size(); ++t) {
    double s = 0.0;
    // X_{2^j t - l + 1} for l = 1..2^j, i.e. 0-based index len*t - l.
    for (std::size_t l = 1; l <= len; ++l) s += h.filter[l - 1] * x[len * t - l];
    w[t - 1] = s;
  }
  return w;
}

std::vector<double> haar_coefficients(const TimeSeries& x, unsigned j) { return haar_coefficients(x.values(), j); }

double haar_scaling_coefficient(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("haar_scaling_coefficient: empty series");
  double s = 0.0;
  for (double v : x) s += v;
  return s / std::sqrt(static_cast<double>(x.size()));
}

std::vector<double> haar_gaussian_analogue(const VarianceTrack& track, unsigned j, std::uint64_t seed) {
  const GaussianPathSample w = sample_two_sided_bm_at(track, seed);
  std::vector<double> inc(w.values.size());
  double prev = 0.0;
  for (std::size_t i = 0; i < inc.size(); ++i) {
    inc[i] = w.values[i] - prev;
    prev = w.values[i];
  }
  return haar_coefficients(inc, j);
}

unsigned min_resolution(std::size_t n, double p) {
  if (n < 4) throw std::invalid_argument("min_resolution: n must be at least 4");
  if (!(p > 2.0)) throw std::invalid_argument("min_resolution: p must exceed 2");
  const double ln = std::log(static_cast<double>(n));
  const double threshold = (2.0 / std::log(2.0)) * (ln / p + 0.5 * std::log(ln));
  return static_cast<unsigned>(std::floor(threshold)) + 1;
}

}  // namespace nsg
