#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsg {

/// Raised when a numerical procedure (factorization, fit) cannot proceed.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A finite real-valued series with an optional observation grid on (0, 1].
///
/// Values must be finite. When a grid is attached it has the same length as
/// the values, is strictly increasing and satisfies 0 < grid[0], grid[n-1] <= 1.
class TimeSeries {
 public:
  explicit TimeSeries(std::vector<double> values);
  TimeSeries(std::vector<double> values, std::vector<double> grid);

  /// Equispaced grid t_i = i/n, i = 1..n.
  static std::vector<double> uniform_grid(std::size_t n);

  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] bool has_grid() const noexcept { return grid_.has_value(); }
  [[nodiscard]] const std::optional<std::vector<double>>& grid() const noexcept { return grid_; }

  /// Attached grid, or the uniform grid i/n when none is attached.
  [[nodiscard]] std::vector<double> grid_or_uniform() const;

  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
  std::optional<std::vector<double>> grid_;
};

/// Non-overlapping blocks of length m over 1..n; the last block may be short.
/// Block a (1-based) covers (a-1)m+1 .. min(am, n).
class BlockScheme {
 public:
  BlockScheme(std::size_t n, std::size_t m);

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t m() const noexcept { return m_; }
  [[nodiscard]] std::size_t block_count() const noexcept { return (n_ + m_ - 1) / m_; }
  /// 0-based half-open index range [first, last) of 1-based block a.
  [[nodiscard]] std::size_t block_first(std::size_t a) const noexcept { return (a - 1) * m_; }
  [[nodiscard]] std::size_t block_last(std::size_t a) const noexcept {
    return a * m_ < n_ ? a * m_ : n_;
  }

 private:
  std::size_t n_;
  std::size_t m_;
};

/// S_j = x_1 + ... + x_j for j = 1..n.
[[nodiscard]] std::vector<double> partial_sums(std::span<const double> x);

/// B_a = sum of x over block a, for a = 1..ceil(n/m).
[[nodiscard]] std::vector<double> block_sums(std::span<const double> x, const BlockScheme& scheme);

/// R_j: sum of x over the incomplete trailing block up to index j (1-based);
/// zero when m divides j.
[[nodiscard]] double remainder_sum(std::span<const double> x, const BlockScheme& scheme,
                                   std::size_t j);

enum class WeightKind { cusum, local_linear, haar, constant };

/// A family of weight functions w_i(t), i = 1..n, t in (0,1).
struct WeightFamily {
  WeightKind kind;
  std::size_t n;
  /// Evaluates w_i(t) for 1-based i.
  std::function<double(double t, std::size_t i)> evaluator;
  /// Default grid over which the supremum in the total variation is taken.
  std::vector<double> default_grid;
};

/// Weights of the centred CUSUM functional,
/// w_i(t) = ((1 - 1/n) 1{i <= nt} - (1/n) 1{i > nt}) / sqrt(n).
[[nodiscard]] WeightFamily cusum_weights(std::size_t n);

/// Level-j Haar filter weights; t selects the translate ceil(t n / 2^j).
[[nodiscard]] WeightFamily haar_weights(std::size_t n, unsigned j);

/// w_i(t) = c for every i and t.
[[nodiscard]] WeightFamily constant_weights(std::size_t n, double c);

/// `count` equispaced points strictly inside (lo, hi).
[[nodiscard]] std::vector<double> interior_grid(double lo, double hi, std::size_t count = 512);

/// sup over t_grid of |w_1(t)| + sum_{i>=2} |w_i(t) - w_{i-1}(t)|.
[[nodiscard]] double weight_total_variation(const WeightFamily& w, std::span<const double> t_grid);
[[nodiscard]] double weight_total_variation(const WeightFamily& w);

}  // namespace nsg
