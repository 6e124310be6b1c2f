#include "semiloc/theory_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace semiloc {

double parametric_score(const SymmetricDensity& g0, double theta, double x) {
  return g0.score_phi(x - theta);
}

double project_nuisance_tangent(const RealFunction& h, double theta0, double x) {
  return 0.5 * (h(x) + h(2.0 * theta0 - x));
}

double efficient_score_residual(const SymmetricDensity& g0, double theta0, double x) {
  const RealFunction score = [&](double v) { return parametric_score(g0, theta0, v); };
  return score(x) - project_nuisance_tangent(score, theta0, x);
}

ProjectionCheckReport adaptivity_check(const SymmetricDensity& g0, double theta0, const AdaptivityGrid& grid) {
  if (grid.points < 2) throw std::invalid_argument("adaptivity_check: grid needs at least two points");
  ProjectionCheckReport report;
  const double half_width = grid.half_width_scales * g0.scale_hint();
  report.grid.resize(grid.points);
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(grid.points - 1);
    const double x = theta0 - half_width + 2.0 * half_width * t;
    report.grid[i] = x;
    const double gap = std::abs(efficient_score_residual(g0, theta0, x) - parametric_score(g0, theta0, x));
    report.max_residual_error = std::max(report.max_residual_error, gap);
  }

  const auto integrand = [&](double y) {
    const double r = efficient_score_residual(g0, theta0, theta0 + y);
    return r * r * g0.pdf(y);
  };
  const double inf = std::numeric_limits<double>::infinity();
  report.efi = integrate(integrand, -inf, inf);
  report.fi = g0.fisher_information();
  return report;
}

}  // namespace semiloc
