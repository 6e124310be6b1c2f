#include "semiloc/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace semiloc {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) {
    sm += kGolden;
    word = mix64(sm);
  }
}

Rng Rng::derive(std::uint64_t seed, std::uint64_t index) {
  // Two rounds of mixing so that neighbouring (seed, index) pairs land far
  // apart in the splitmix sequence.
  const std::uint64_t key = mix64(mix64(seed) ^ mix64(index * kGolden + 0x632BE59BD9B4E019ULL));
  return Rng(key);
}

Rng::result_type Rng::operator()() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double sample_uniform(Rng& rng) noexcept {
  constexpr double kStep = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(rng() >> 11) + 0.5) * kStep;
}

double sample_normal(Rng& rng) noexcept {
  for (;;) {
    const double u = 2.0 * sample_uniform(rng) - 1.0;
    const double v = 2.0 * sample_uniform(rng) - 1.0;
    const double r2 = u * u + v * v;
    if (r2 > 0.0 && r2 < 1.0) {
      return u * std::sqrt(-2.0 * std::log(r2) / r2);
    }
  }
}

double sample_gamma(Rng& rng, double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::invalid_argument("sample_gamma: shape must be positive and finite");
  }
  if (shape < 1.0) {
    const double boosted = sample_gamma(rng, shape + 1.0);
    return boosted * std::pow(sample_uniform(rng), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = sample_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = sample_uniform(rng);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace semiloc
