#pragma once

#include <array>
#include <cstdint>

namespace gaze {

/// Portable pseudo-random source: xoshiro256** whose 256-bit state is
/// expanded from a 64-bit seed with SplitMix64. Output is bit-identical on
/// every platform; the standard library engines and distributions are never
/// used by the engine because their distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, bound) via Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) noexcept;

  /// Standard normal via the Box-Muller transform; values are produced in
  /// pairs and the second one is cached.
  double gaussian() noexcept;
  double gaussian(double sigma) noexcept { return sigma * gaussian(); }

 private:
  std::array<std::uint64_t, 4> state_{};
  double cached_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Derives an independent stream seed from a base seed and a stream index.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace gaze
