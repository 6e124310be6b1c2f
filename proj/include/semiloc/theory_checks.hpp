#pragma once

#include <vector>

#include "semiloc/distributions.hpp"
#include "semiloc/numerics.hpp"

namespace semiloc {

/// Location score s(x) = phi_g0(x - theta).
double parametric_score(const SymmetricDensity& g0, double theta, double x);

/// Projection onto functions of |x - theta0|: (h(x) + h(2 theta0 - x)) / 2.
double project_nuisance_tangent(const RealFunction& h, double theta0, double x);

/// s(x) minus its projection onto the nuisance tangent space.
double efficient_score_residual(const SymmetricDensity& g0, double theta0, double x);

struct ProjectionCheckReport {
  std::vector<double> grid;
  double max_residual_error = 0.0;  // max over the grid of |residual - s|
  double efi = 0.0;
  double fi = 0.0;
};

struct AdaptivityGrid {
  std::size_t points = 401;
  double half_width_scales = 8.0;
};

ProjectionCheckReport adaptivity_check(const SymmetricDensity& g0, double theta0 = 0.0,
                                       const AdaptivityGrid& grid = {});

}  // namespace semiloc
