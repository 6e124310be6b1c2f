#include "semiloc/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <vector>

namespace semiloc {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

// Kronrod abscissae; odd indices are shared with the 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double result;
  double error;
  double abs_result;
  int depth;

  bool operator<(const Segment& other) const { return error < other.error; }
};

double checked(double v) {
  if (!std::isfinite(v)) {
    throw NumericalError("integrate: integrand is not finite at a quadrature node");
  }
  return v;
}

Segment kronrod15(const RealFunction& g, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = checked(g(center));
  double res_gauss = fc * kWg[3];
  double res_kronrod = fc * kWgk[7];
  double res_abs = std::abs(fc) * kWgk[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = checked(g(center - dx));
    const double f2 = checked(g(center + dx));
    res_kronrod += kWgk[j] * (f1 + f2);
    res_abs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) res_gauss += kWg[j / 2] * (f1 + f2);
  }
  return {a, b, res_kronrod * half, std::abs((res_kronrod - res_gauss) * half),
          res_abs * std::abs(half), depth};
}

double adaptive_finite(const RealFunction& g, double a, double b, double abs_tol, int max_depth) {
  constexpr std::size_t kMaxSegments = 1u << 15;

  std::priority_queue<Segment> active;
  std::vector<Segment> frozen;
  const Segment first = kronrod15(g, a, b, 0);
  active.push(first);
  double total = first.result;
  double total_err = first.error;
  double total_abs = first.abs_result;
  std::size_t count = 1;

  auto tolerance = [&] { return std::max(abs_tol, 50.0 * kEps * total_abs); };

  while (total_err > tolerance()) {
    if (active.empty() || count >= kMaxSegments) {
      throw QuadratureError("integrate: no convergence within max_depth", total, total_err);
    }
    const Segment worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.depth >= max_depth || mid <= worst.a || mid >= worst.b) {
      frozen.push_back(worst);
      continue;
    }
    const Segment left = kronrod15(g, worst.a, mid, worst.depth + 1);
    const Segment right = kronrod15(g, mid, worst.b, worst.depth + 1);
    total += left.result + right.result - worst.result;
    total_err += left.error + right.error - worst.error;
    total_abs += left.abs_result + right.abs_result - worst.abs_result;
    active.push(left);
    active.push(right);
    ++count;
  }

  // Re-add from the pieces to shed the drift of the running sums.
  double sum = 0.0;
  for (const auto& s : frozen) sum += s.result;
  while (!active.empty()) {
    sum += active.top().result;
    active.pop();
  }
  return sum;
}

// [a, inf) folded onto [0, 1) by x = a + t / (1 - t).
double integrate_upper_half_line(const RealFunction& f, double a, double abs_tol, int max_depth) {
  const RealFunction mapped = [&f, a](double t) {
    const double one_minus = 1.0 - t;
    const double x = a + t / one_minus;
    return f(x) / (one_minus * one_minus);
  };
  return adaptive_finite(mapped, 0.0, 1.0, abs_tol, max_depth);
}

double integrate_lower_half_line(const RealFunction& f, double b, double abs_tol, int max_depth) {
  const RealFunction reflected = [&f, b](double x) { return f(2.0 * b - x); };
  return integrate_upper_half_line(reflected, b, abs_tol, max_depth);
}

}  // namespace

double integrate(const RealFunction& f, double a, double b, const QuadratureSpec& spec) {
  if (!(spec.abs_tol > 0.0) || spec.max_depth < 1) {
    throw std::invalid_argument("integrate: abs_tol must be > 0 and max_depth >= 1");
  }
  if (std::isnan(a) || std::isnan(b) || !(a < b)) {
    throw std::invalid_argument("integrate: requires a < b");
  }
  const bool lower_inf = std::isinf(a);
  const bool upper_inf = std::isinf(b);
  if (lower_inf && upper_inf) {
    const double half_tol = 0.5 * spec.abs_tol;
    return integrate_lower_half_line(f, 0.0, half_tol, spec.max_depth) +
           integrate_upper_half_line(f, 0.0, half_tol, spec.max_depth);
  }
  if (upper_inf) return integrate_upper_half_line(f, a, spec.abs_tol, spec.max_depth);
  if (lower_inf) return integrate_lower_half_line(f, b, spec.abs_tol, spec.max_depth);
  return adaptive_finite(f, a, b, spec.abs_tol, spec.max_depth);
}

double find_root(const RealFunction& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("find_root: tol must be positive");
  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  if (std::isnan(fa) || std::isnan(fb) || fa * fb > 0.0) {
    throw std::invalid_argument("find_root: f(lo) and f(hi) must bracket a root");
  }
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;

  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < 500; ++iter) {
    if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * kEps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      const double s = fb / fa;
      double p = 0.0;
      double q = 0.0;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      const double min1 = 3.0 * xm * q - std::abs(tol1 * q);
      const double min2 = std::abs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
    fb = f(b);
  }
  throw NumericalError("find_root: iteration limit reached");
}

double ln_gamma(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("ln_gamma: x must be positive");
  if (std::isinf(x)) return x;
  // Lanczos approximation, g = 671/128, 14 terms.
  static constexpr std::array<double, 14> kCoef = {
      57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
      -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
      -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
      .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
      -.261908384015814087e-4, .368991826595316234e-5};
  double y = x;
  double tmp = x + 5.24218750000000000;
  tmp = (x + 0.5) * std::log(tmp) - tmp;
  double ser = 0.999999999999997092;
  for (double c : kCoef) ser += c / ++y;
  return tmp + std::log(2.5066282746310005 * ser / x);
}

namespace {

double gamma_series(double a, double x) {
  double ap = a;
  double del = 1.0 / a;
  double sum = del;
  for (int n = 0; n < 100000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) {
      return sum * std::exp(-x + a * std::log(x) - ln_gamma(a));
    }
  }
  throw NumericalError("gamma_p: series did not converge");
}

double gamma_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      return std::exp(-x + a * std::log(x) - ln_gamma(a)) * h;
    }
  }
  throw NumericalError("gamma_q: continued fraction did not converge");
}

double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m < 100000; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericalError("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: requires a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return x < a + 1.0 ? gamma_series(a, x) : 1.0 - gamma_continued_fraction(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: requires a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return x < a + 1.0 ? 1.0 - gamma_series(a, x) : gamma_continued_fraction(a, x);
}

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || x < 0.0 || x > 1.0) {
    throw std::invalid_argument("incomplete_beta: requires a, b > 0 and x in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double std_normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("std_normal_quantile: q must lie in (0, 1)");
  if (q > 0.5) return -std_normal_quantile(1.0 - q);

  // Acklam's rational approximation followed by one Halley step on the
  // lower-tail cdf, which is evaluated without cancellation for q <= 1/2.
  static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                              -2.759285104469687e+02, 1.383577518672690e+02,
                                              -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                              -1.556989798598866e+02, 6.680131188771972e+01,
                                              -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                              -2.400758277161838e+00, -2.549732539343734e+00,
                                              4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double kLowBreak = 0.02425;

  double x = 0.0;
  if (q < kLowBreak) {
    const double t = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
        ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  } else {
    const double t = q - 0.5;
    const double r = t * t;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * t /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double e = std_normal_cdf(x) - q;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1.0 + 0.5 * x * u);
}

}  // namespace semiloc
