#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nsg/models.hpp"

namespace nsg {

/// Estimated functional dependence measures delta_p(k), k = 0..K, and their
/// tail sums Theta_i = sum_{k=i}^{K} delta_p(k).
struct DependenceProfile {
  double p = 2.0;
  std::vector<double> deltas;
  std::vector<double> thetas;

  /// Builds the tail sums from `deltas`.
  static DependenceProfile from_deltas(double p, std::vector<double> deltas);
  /// Profile with prescribed tail sums; deltas are recovered as differences.
  static DependenceProfile from_thetas(double p, std::vector<double> thetas);
};

/// Eight indices spread evenly over [k+1, n].
[[nodiscard]] std::vector<std::size_t> default_index_grid(std::size_t n, std::size_t k);

/// Coupling estimate of delta_p(k) = sup_i (E|X_i - X_{i,{i-k}}|^p)^{1/p}.
///
/// For each i in `i_grid` (1-based) the model is simulated `reps` times; each
/// draw is replayed with the innovation at time i-k replaced by an independent
/// copy. Indices whose coupled innovation falls outside the model's innovation
/// window are skipped; an error is raised if all are skipped.
[[nodiscard]] double estimate_fdm(const SimulableModel& model, std::size_t k, double p, std::size_t reps,
                                  const std::vector<std::size_t>& i_grid, std::uint64_t seed);

/// delta_p(k) for k = 0..max_lag on a shared index grid.
[[nodiscard]] DependenceProfile dependence_profile(const SimulableModel& model, std::size_t max_lag,
                                                   double p, std::size_t reps, std::uint64_t seed);

struct DecayFit {
  double a_hat;   ///< least-squares slope of -log Theta_i on log(i+1)
  double mu_hat;  ///< max_i (i+1)^{a_hat} Theta_i
};

[[nodiscard]] DecayFit decay_fit(const DependenceProfile& profile);

}  // namespace nsg
