#include "semiloc/scores.hpp"

#include <stdexcept>

namespace semiloc {

std::string RankScoreFunction::label() const {
  if (std::holds_alternative<GaussianScore>(kind_)) return "gaussian";
  return "density:" + std::get<FromDensity>(kind_).f.label();
}

double RankScoreFunction::eval(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("eval_score: q must lie in (0, 1)");
  if (std::holds_alternative<GaussianScore>(kind_)) {
    // Phi^-1((1+q)/2); the upper half uses the exact complement 1 - q.
    return q < 0.5 ? std_normal_quantile(0.5 * (1.0 + q)) : -std_normal_quantile(0.5 * (1.0 - q));
  }
  const auto& f = std::get<FromDensity>(kind_).f;
  return f.score_phi(f.folded_quantile(q));
}

std::vector<double> RankScoreFunction::table(std::size_t n) const {
  std::vector<double> out(n);
  const double denom = static_cast<double>(n) + 1.0;
  for (std::size_t i = 0; i < n; ++i) out[i] = eval(static_cast<double>(i + 1) / denom);
  return out;
}

double cross_information(const RankScoreFunction& f, const RankScoreFunction& l,
                         const QuadratureSpec& spec) {
  const auto integrand = [&](double q) { return f.eval(q) * l.eval(q); };
  constexpr double cut = kScoreEndpointCut;
  const double body = integrate(integrand, cut, 1.0 - cut, spec);
  const double slivers = cut * (integrand(0.5 * cut) + integrand(1.0 - 0.5 * cut));
  return body + slivers;
}

double riemann_score_energy(const RankScoreFunction& score, std::size_t n) {
  if (n == 0) throw std::invalid_argument("riemann_score_energy: n must be >= 1");
  double sum = 0.0;
  for (double k : score.table(n)) sum += k * k;
  return sum / static_cast<double>(n);
}

}  // namespace semiloc
