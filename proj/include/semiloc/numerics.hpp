#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace semiloc {

/// Raised when a numerical routine cannot deliver a result at the requested
/// accuracy (quadrature non-convergence, degenerate slope estimates, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double estimate, double error_bound)
      : NumericalError(what), estimate_(estimate), error_bound_(error_bound) {}

  double estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double estimate_;
  double error_bound_;
};

struct QuadratureSpec {
  double abs_tol = 1e-10;
  int max_depth = 60;
};

using RealFunction = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
///
/// Either bound may be infinite. Infinite ranges are folded onto finite ones:
/// [a, inf) uses x = a + t/(1-t) for t in [0, 1), (-inf, b] the mirror image,
/// and (-inf, inf) is split at 0 into two half-lines. The rule never evaluates
/// f at the interval ends, so integrable endpoint singularities are allowed;
/// they are resolved by bisection down to max_depth levels.
///
/// The achievable accuracy is floored at a few ulps of the integral of |f|.
double integrate(const RealFunction& f, double a, double b, const QuadratureSpec& spec = {});

/// Brent's method on a sign-changing bracket. Every step either interpolates
/// inside the current bracket or bisects it, so convergence is guaranteed.
double find_root(const RealFunction& f, double lo, double hi, double tol);

double ln_gamma(double x);

/// Regularized lower and upper incomplete gamma functions P(a, x), Q(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

double std_normal_cdf(double x);
double std_normal_quantile(double q);

}  // namespace semiloc
