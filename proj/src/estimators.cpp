#include "semiloc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "semiloc/numerics.hpp"
#include "semiloc/ranks.hpp"

namespace semiloc {
namespace {

void require_nonempty(std::span<const double> x, const char* who) {
  if (x.empty()) throw std::invalid_argument(std::string(who) + ": sample must be non-empty");
}

void require_table_size(std::span<const double> x, const ScoreTable& table, const char* who) {
  if (table.n() != x.size()) {
    throw std::invalid_argument(std::string(who) + ": score table size does not match sample size");
  }
}

}  // namespace

std::string psi_label(const PsiVariant& psi) {
  if (const auto* c = std::get_if<ConsistentPsi>(&psi)) {
    std::ostringstream os;
    os << "consistent(h=" << c->h << ")";
    return os.str();
  }
  return "robust";
}

double sample_mean(std::span<const double> x) {
  require_nonempty(x, "sample_mean");
  double sum = 0.0;
  for (double v : x) sum += v;
  return sum / static_cast<double>(x.size());
}

double sample_median(std::span<const double> x) {
  require_nonempty(x, "sample_median");
  std::vector<double> work(x.begin(), x.end());
  const std::size_t n = work.size();
  const std::size_t mid = n / 2;
  std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(mid), work.end());
  const double upper = work[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double rank_central_sequence(std::span<const double> x, double theta, const ScoreTable& table) {
  require_nonempty(x, "rank_central_sequence");
  require_table_size(x, table, "rank_central_sequence");
  const std::size_t n = x.size();
  std::vector<std::size_t> order;
  std::vector<double> deviations;
  std::vector<std::size_t> ranks(n);
  std::vector<int> signs(n);
  ranks_and_signs(x, theta, order, deviations, ranks, signs);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (signs[i] != 0) sum += signs[i] * table.at_rank(ranks[i]);
  }
  return sum / std::sqrt(static_cast<double>(n));
}

double rank_central_sequence(std::span<const double> x, double theta, const RankScoreFunction& score) {
  require_nonempty(x, "rank_central_sequence");
  return rank_central_sequence(x, theta, ScoreTable(score, x.size()));
}

double parametric_central_sequence(std::span<const double> x, double theta, const SymmetricDensity& g0) {
  require_nonempty(x, "parametric_central_sequence");
  double sum = 0.0;
  for (double v : x) sum += g0.score_phi(v - theta);
  return sum / std::sqrt(static_cast<double>(x.size()));
}

double psi_consistent(std::span<const double> x, double theta_star, const ScoreTable& table, double h) {
  require_nonempty(x, "psi_consistent");
  if (h == 0.0 || !std::isfinite(h)) throw std::invalid_argument("psi_consistent: h must be finite and non-zero");
  const double step = h / std::sqrt(static_cast<double>(x.size()));
  const double shifted = rank_central_sequence(x, theta_star + step, table);
  const double base = rank_central_sequence(x, theta_star, table);
  const double psi = std::abs(shifted - base) / std::abs(h);
  if (psi == 0.0) {
    throw NumericalError("psi_consistent: zero slope estimate (h too small or degenerate sample)");
  }
  return psi;
}

double psi_consistent(std::span<const double> x, double theta_star, const RankScoreFunction& score, double h) {
  require_nonempty(x, "psi_consistent");
  return psi_consistent(x, theta_star, ScoreTable(score, x.size()), h);
}

double psi_robust(const ScoreTable& table) {
  if (table.n() == 0) throw std::invalid_argument("psi_robust: sample must be non-empty");
  double sum = 0.0;
  for (double k : table.values()) sum += k * k;
  return sum / static_cast<double>(table.n());
}

double psi_robust(std::span<const double> x, double /*theta_star*/, const RankScoreFunction& score) {
  require_nonempty(x, "psi_robust");
  return psi_robust(ScoreTable(score, x.size()));
}

double psi_robust_ranked(std::span<const double> x, double theta_star, const ScoreTable& table) {
  require_nonempty(x, "psi_robust_ranked");
  require_table_size(x, table, "psi_robust_ranked");
  const auto dec = decompose(x, theta_star);
  double sum = 0.0;
  for (std::size_t r : dec.ranks) {
    const double k = table.at_rank(r);
    sum += k * k;
  }
  return sum / static_cast<double>(x.size());
}

EstimatorResult one_step_estimate(std::span<const double> x, const OsConfig& cfg, const ScoreTable& table) {
  require_nonempty(x, "one_step_estimate");
  require_table_size(x, table, "one_step_estimate");
  EstimatorResult r;
  r.variant = psi_label(cfg.psi);
  r.theta_star = std::holds_alternative<FixedPreliminary>(cfg.preliminary)
                     ? std::get<FixedPreliminary>(cfg.preliminary).theta_star
                     : sample_median(x);
  r.delta_tilde = rank_central_sequence(x, r.theta_star, table);
  if (const auto* c = std::get_if<ConsistentPsi>(&cfg.psi)) {
    r.psi_hat = psi_consistent(x, r.theta_star, table, c->h);
  } else {
    r.psi_hat = psi_robust(table);
  }
  if (r.psi_hat == 0.0 || !std::isfinite(r.psi_hat)) {
    throw NumericalError("one_step_estimate: degenerate psi estimate for variant " + r.variant);
  }
  r.theta_hat = r.theta_star + r.delta_tilde / (std::sqrt(static_cast<double>(x.size())) * r.psi_hat);
  return r;
}

EstimatorResult one_step_estimate(std::span<const double> x, const OsConfig& cfg) {
  require_nonempty(x, "one_step_estimate");
  return one_step_estimate(x, cfg, ScoreTable(cfg.score, x.size()));
}

}  // namespace semiloc
