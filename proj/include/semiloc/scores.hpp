#pragma once

#include <string>
#include <variant>
#include <vector>

#include "semiloc/distributions.hpp"
#include "semiloc/numerics.hpp"

namespace semiloc {

struct GaussianScore {};

struct FromDensity {
  SymmetricDensity f;
};

/// Rank score K_f = phi_f o F_+^-1 on (0, 1).
class RankScoreFunction {
 public:
  using Kind = std::variant<GaussianScore, FromDensity>;

  static RankScoreFunction gaussian() { return RankScoreFunction(GaussianScore{}); }
  static RankScoreFunction from_density(SymmetricDensity f) {
    return RankScoreFunction(FromDensity{std::move(f)});
  }

  const Kind& kind() const noexcept { return kind_; }
  std::string label() const;

  double eval(double q) const;

  /// K(i / (n + 1)) for i = 1..n, the only arguments a sample of size n needs.
  std::vector<double> table(std::size_t n) const;

 private:
  explicit RankScoreFunction(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Lookup of K(i / (n + 1)) for a fixed n; index with the 1-based rank.
class ScoreTable {
 public:
  ScoreTable(const RankScoreFunction& score, std::size_t n) : values_(score.table(n)) {}

  std::size_t n() const noexcept { return values_.size(); }
  double at_rank(std::size_t rank) const { return values_[rank - 1]; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// Lower cut-off used by the (0, 1) integrals of rank scores.
inline constexpr double kScoreEndpointCut = 1e-10;

/// nu(f, l) = int_0^1 K_f K_l. Integrated on [cut, 1 - cut]; the two cut-off
/// slivers are added back with a midpoint estimate.
double cross_information(const RankScoreFunction& f, const RankScoreFunction& l,
                         const QuadratureSpec& spec = {});

/// Riemann sum n^-1 sum_i K(i/(n+1))^2.
double riemann_score_energy(const RankScoreFunction& score, std::size_t n);

}  // namespace semiloc
