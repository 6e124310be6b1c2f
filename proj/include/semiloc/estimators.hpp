#pragma once

#include <span>
#include <string>
#include <variant>

#include "semiloc/distributions.hpp"
#include "semiloc/scores.hpp"

namespace semiloc {

/// Secant slope of the rank central sequence over theta* -> theta* + h / sqrt(n).
struct ConsistentPsi {
  double h = 1.0;
};

/// n^-1 sum K(r_i / (n + 1))^2; consistent only when nu(f, g0) = nu(f, f).
struct RobustPsi {};

using PsiVariant = std::variant<ConsistentPsi, RobustPsi>;

struct MedianPreliminary {};
struct FixedPreliminary {
  double theta_star;
};
using Preliminary = std::variant<MedianPreliminary, FixedPreliminary>;

struct OsConfig {
  RankScoreFunction score = RankScoreFunction::gaussian();
  PsiVariant psi = ConsistentPsi{};
  Preliminary preliminary = MedianPreliminary{};
};

std::string psi_label(const PsiVariant& psi);

struct EstimatorResult {
  double theta_hat = 0.0;
  double theta_star = 0.0;
  double delta_tilde = 0.0;
  double psi_hat = 0.0;
  std::string variant;
};

double sample_mean(std::span<const double> x);
/// Middle order statistic, or the midpoint of the two middle ones for even n.
double sample_median(std::span<const double> x);

/// n^-1/2 sum_i u_i K(r_i / (n + 1)) with ranks and signs taken about theta.
double rank_central_sequence(std::span<const double> x, double theta, const RankScoreFunction& score);
double rank_central_sequence(std::span<const double> x, double theta, const ScoreTable& table);

/// n^-1/2 sum_i phi_g0(x_i - theta).
double parametric_central_sequence(std::span<const double> x, double theta, const SymmetricDensity& g0);

double psi_consistent(std::span<const double> x, double theta_star, const RankScoreFunction& score, double h);
double psi_consistent(std::span<const double> x, double theta_star, const ScoreTable& table, double h);

/// Uses the permutation-free form n^-1 sum_i K(i/(n+1))^2; the sample enters
/// only through its size.
double psi_robust(std::span<const double> x, double theta_star, const RankScoreFunction& score);
double psi_robust(const ScoreTable& table);
/// Literal form n^-1 sum_i K(r_i*/(n+1))^2 with the ranks about theta_star.
double psi_robust_ranked(std::span<const double> x, double theta_star, const ScoreTable& table);

EstimatorResult one_step_estimate(std::span<const double> x, const OsConfig& cfg);
/// Same, reusing a precomputed table; `table.n()` must equal `x.size()`.
EstimatorResult one_step_estimate(std::span<const double> x, const OsConfig& cfg, const ScoreTable& table);

}  // namespace semiloc
