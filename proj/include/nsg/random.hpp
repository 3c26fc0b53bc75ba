#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace nsg {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// The 64-bit seed is the Philox key. The 128-bit counter is split into a
/// 64-bit block index (low words) and a 64-bit stream id (high words), so
/// `Rng(seed, s)` and `Rng(seed, s')` are independent streams and any
/// replication can be regenerated without replaying the others.
///
/// Satisfies UniformRandomBitGenerator, so it plugs into <random> distributions.
class Rng {
 public:
  using result_type = std::uint32_t;
  using Block = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit Rng(std::uint64_t seed = 0, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream() const noexcept { return stream_; }

  /// The raw ten-round bijection, exposed for known-answer tests.
  static Block philox(Block counter, Key key) noexcept;

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  Block buffer_{};
  unsigned pos_ = 4;
};

/// Stream id for replication `index` of pipeline stage `stage`.
/// Distinct (stage, index) pairs map to distinct ids for index < 2^48.
[[nodiscard]] constexpr std::uint64_t stream_id(std::uint32_t stage, std::uint64_t index) noexcept {
  return (static_cast<std::uint64_t>(stage & 0xFFFFu) << 48) ^ (index & 0xFFFFFFFFFFFFull);
}

/// SplitMix64 finaliser; used to turn (seed, label) pairs into child seeds.
[[nodiscard]] constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t label) noexcept {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (label + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace nsg
