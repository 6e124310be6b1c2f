#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace semiloc {

/// xoshiro256** seeded through splitmix64.
///
/// `Rng::derive(seed, index)` builds the generator for substream `index` as a
/// pure function of both arguments, so Monte Carlo trial t can reconstruct its
/// stream without touching any other trial's state.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  static Rng derive(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// Uniform on the open interval (0, 1): 53-bit lattice shifted by half a step.
double sample_uniform(Rng& rng) noexcept;

/// Standard normal via the Marsaglia polar method (second variate discarded).
double sample_normal(Rng& rng) noexcept;

/// Gamma(shape, 1) via Marsaglia-Tsang squeeze/rejection; shapes below one use
/// Gamma(shape + 1) * U^(1/shape).
double sample_gamma(Rng& rng, double shape);

}  // namespace semiloc
