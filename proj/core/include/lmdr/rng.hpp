#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace lmdr {

/// SplitMix64 finalizer. Used to turn (seed, stream id...) tuples into
/// statistically independent engine seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Derives the seed of a named substream. The same (base, path) always yields
/// the same seed; distinct paths yield unrelated seeds.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept;

/// Thin wrapper over mt19937_64 with platform-independent draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);

  /// Samples an index with probability proportional to `probs`.
  std::size_t categorical(std::span<const double> probs);

  /// Standard exponential variate (for Dirichlet sampling).
  double exponential();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lmdr
