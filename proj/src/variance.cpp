#include "nsg/variance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nsg {

std::size_t default_block_length(std::size_t n) {
  if (n == 0) throw std::invalid_argument("default_block_length: n must be positive");
  auto m = static_cast<std::size_t>(std::cbrt(static_cast<double>(n)));
  while ((m + 1) * (m + 1) * (m + 1) <= n) ++m;
  while (m > 1 && m * m * m > n) --m;
  return std::max<std::size_t>(m, 1);
}

namespace {

void check_block_length(std::size_t n, std::size_t m, const char* who) {
  if (n == 0) throw std::invalid_argument(std::string(who) + ": empty series");
  if (m == 0 || m > n) throw std::invalid_argument(std::string(who) + ": block length must be in [1, n]");
}

}  // namespace

VarianceTrack brv(std::span<const double> x, std::size_t m) {
  check_block_length(x.size(), m, "brv");
  const std::size_t n = x.size();
  VarianceTrack out{std::vector<double>(n), TrackKind::brv, m};
  double t_full = 0.0;   // T_k over completed blocks
  double b_last = 0.0;   // B_k of the last completed block
  double r = 0.0;        // running remainder R_j
  for (std::size_t j = 1; j <= n; ++j) {
    r += x[j - 1];
    if (j % m == 0) {
      t_full += r * r + 2.0 * b_last * r;
      b_last = r;
      r = 0.0;
      out.values[j - 1] = t_full;
    } else {
      out.values[j - 1] = t_full + r * r + 2.0 * b_last * r;
    }
  }
  return out;
}

VarianceTrack brv(const TimeSeries& x, std::size_t m) { return brv(x.values(), m); }

VarianceTrack brv_no_cross(std::span<const double> x, std::size_t m) {
  check_block_length(x.size(), m, "brv_no_cross");
  const std::size_t n = x.size();
  VarianceTrack out{std::vector<double>(n), TrackKind::brv_no_cross, m};
  double t_full = 0.0, r = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    r += x[j - 1];
    if (j % m == 0) {
      t_full += r * r;
      r = 0.0;
      out.values[j - 1] = t_full;
    } else {
      out.values[j - 1] = t_full + r * r;
    }
  }
  return out;
}

VarianceTrack brv_no_cross(const TimeSeries& x, std::size_t m) { return brv_no_cross(x.values(), m); }

VarianceTrack overlapping_variance(std::span<const double> x, std::size_t m) {
  check_block_length(x.size(), m, "overlapping_variance");
  const std::size_t n = x.size();
  VarianceTrack out{std::vector<double>(n, 0.0), TrackKind::overlapping, m};
  const double md = static_cast<double>(m);
  double acc = 0.0;
  for (std::size_t t = m; t <= n; ++t) {
    double w = 0.0;
    for (std::size_t s = t - m; s < t; ++s) w += x[s];
    acc += w * w / md;
    out.values[t - 1] = acc;
  }
  return out;
}

VarianceTrack overlapping_variance(const TimeSeries& x, std::size_t m) {
  return overlapping_variance(x.values(), m);
}

VarianceTrack exact_partial_variance(const CovarianceOracle& oracle) {
  const auto& c = oracle.matrix();
  const auto n = c.rows();
  VarianceTrack out{std::vector<double>(static_cast<std::size_t>(n)), TrackKind::exact, 0};
  // Var(S_j) = Var(S_{j-1}) + c_jj + 2 sum_{s<j} c_sj.
  double v = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    double cross = 0.0;
    for (Eigen::Index s = 0; s < j; ++s) cross += c(s, j);
    v += c(j, j) + 2.0 * cross;
    out.values[static_cast<std::size_t>(j)] = std::max(v, 0.0);
  }
  return out;
}

double estimation_error(const VarianceTrack& track, const VarianceTrack& truth) {
  if (track.size() != truth.size()) throw std::invalid_argument("estimation_error: length mismatch");
  double e = 0.0;
  for (std::size_t i = 0; i < track.size(); ++i) e = std::max(e, std::abs(track.values[i] - truth.values[i]));
  return e;
}

CrossProductDiagnostic cross_product_diagnostic(const CovarianceOracle& oracle, std::size_t m) {
  const std::size_t n = oracle.size();
  const BlockScheme scheme(n, m);
  const std::size_t k = scheme.block_count();
  const auto& c = oracle.matrix();
  // Row-wise block sums first, then column-wise: E(B_a B_b) = sum_{s in a, t in b} c_st.
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), c.cols());
  for (std::size_t a = 1; a <= k; ++a) {
    for (std::size_t s = scheme.block_first(a); s < scheme.block_last(a); ++s) {
      rows.row(static_cast<Eigen::Index>(a - 1)) += c.row(static_cast<Eigen::Index>(s));
    }
  }
  Eigen::MatrixXd bb = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t b = 1; b <= k; ++b) {
    for (std::size_t t = scheme.block_first(b); t < scheme.block_last(b); ++t) {
      bb.col(static_cast<Eigen::Index>(b - 1)) += rows.col(static_cast<Eigen::Index>(t));
    }
  }
  CrossProductDiagnostic d{0.0, 0.0};
  const auto ki = static_cast<Eigen::Index>(k);
  for (Eigen::Index a = 0; a < ki; ++a) {
    if (a + 1 < ki) d.adjacent_max = std::max(d.adjacent_max, std::abs(bb(a, a + 1)));
    double far = 0.0;
    for (Eigen::Index b = 0; b < ki; ++b) {
      if (std::abs(a - b) >= 2) far += std::abs(bb(a, b));
    }
    d.far_sum_max = std::max(d.far_sum_max, far);
  }
  return d;
}

}  // namespace nsg
