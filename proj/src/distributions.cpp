#include "semiloc/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "semiloc/numerics.hpp"

namespace semiloc {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double safe_log(double w) { return w > 0.0 ? std::log(w) : kNegInf; }

}  // namespace

SymmetricDensity::SymmetricDensity(Kind kind) : kind_(std::move(kind)) {}

SymmetricDensity SymmetricDensity::student_t(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw std::invalid_argument("StudentT: nu must be positive and finite");
  }
  SymmetricDensity d(StudentT{nu});
  d.log_norm_ = ln_gamma(0.5 * (nu + 1.0)) - ln_gamma(0.5 * nu) - 0.5 * std::log(nu * std::numbers::pi);
  return d;
}

SymmetricDensity SymmetricDensity::generalized_gaussian(double s, double b) {
  if (!(s > 0.0) || !(b > 0.0) || !std::isfinite(s) || !std::isfinite(b)) {
    throw std::invalid_argument("GeneralizedGaussian: s and b must be positive and finite");
  }
  SymmetricDensity d(GeneralizedGaussian{s, b});
  d.gg_scale_ = std::pow(2.0, s) * b;
  const double shape = 1.0 / (2.0 * s);
  d.log_norm_ = std::log(s) - ln_gamma(shape) - shape * std::log(d.gg_scale_);
  return d;
}

SymmetricDensity SymmetricDensity::contaminated(double eps, const SymmetricDensity& nominal,
                                                const SymmetricDensity& contaminant) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw std::invalid_argument("Contaminated: eps must lie in [0, 1]");
  }
  return SymmetricDensity(Contaminated{eps, std::make_shared<const SymmetricDensity>(nominal),
                                       std::make_shared<const SymmetricDensity>(contaminant)});
}

std::string SymmetricDensity::label() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const StudentT& t) { os << "t(nu=" << t.nu << ")"; },
                 [&](const GeneralizedGaussian& g) { os << "GG(s=" << g.s << ",b=" << g.b << ")"; },
                 [&](const Contaminated& m) {
                   os << m.eps << "*" << m.nominal->label() << "+" << (1.0 - m.eps) << "*"
                      << m.contaminant->label();
                 },
             },
             kind_);
  return os.str();
}

double SymmetricDensity::log_pdf(double x) const {
  const double y = std::abs(x);
  return std::visit(
      Overloaded{
          [&](const StudentT& t) { return log_norm_ - 0.5 * (t.nu + 1.0) * std::log1p(y * y / t.nu); },
          [&](const GeneralizedGaussian& g) { return log_norm_ - std::pow(y, 2.0 * g.s) / gg_scale_; },
          [&](const Contaminated& m) {
            return log_sum_exp(safe_log(m.eps) + m.nominal->log_pdf(y),
                               safe_log(1.0 - m.eps) + m.contaminant->log_pdf(y));
          },
      },
      kind_);
}

double SymmetricDensity::pdf(double x) const { return std::exp(log_pdf(x)); }

double SymmetricDensity::score_abs(double y) const {
  return std::visit(
      Overloaded{
          [&](const StudentT& t) { return (t.nu + 1.0) * y / (t.nu + y * y); },
          [&](const GeneralizedGaussian& g) {
            if (y == 0.0) return 0.0;
            return 2.0 * g.s * std::pow(y, 2.0 * g.s - 1.0) / gg_scale_;
          },
          [&](const Contaminated& m) {
            // Posterior component weights, formed in log space so that far
            // tails where both densities underflow stay well defined.
            const double l1 = safe_log(m.eps) + m.nominal->log_pdf(y);
            const double l2 = safe_log(1.0 - m.eps) + m.contaminant->log_pdf(y);
            const double total = log_sum_exp(l1, l2);
            double phi = 0.0;
            if (l1 != kNegInf) phi += std::exp(l1 - total) * m.nominal->score_abs(y);
            if (l2 != kNegInf) phi += std::exp(l2 - total) * m.contaminant->score_abs(y);
            return phi;
          },
      },
      kind_);
}

double SymmetricDensity::score_phi(double u) const {
  const double phi = score_abs(std::abs(u));
  return u < 0.0 ? -phi : phi;
}

double SymmetricDensity::upper_tail(double y) const {
  if (y < 0.0) throw std::invalid_argument("upper_tail: y must be >= 0");
  if (y == 0.0) return 0.5;
  return std::visit(
      Overloaded{
          [&](const StudentT& t) {
            const double r2 = (y / std::sqrt(t.nu)) * (y / std::sqrt(t.nu));
            const double w = 1.0 / (1.0 + 1.0 / r2);  // y^2 / (nu + y^2)
            if (w < 0.5) return 0.5 - 0.5 * incomplete_beta(0.5, 0.5 * t.nu, w);
            return 0.5 * incomplete_beta(0.5 * t.nu, 0.5, 1.0 / (1.0 + r2));
          },
          [&](const GeneralizedGaussian& g) {
            return 0.5 * gamma_q(1.0 / (2.0 * g.s), std::pow(y, 2.0 * g.s) / gg_scale_);
          },
          [&](const Contaminated& m) {
            return m.eps * m.nominal->upper_tail(y) + (1.0 - m.eps) * m.contaminant->upper_tail(y);
          },
      },
      kind_);
}

double SymmetricDensity::cdf(double x) const {
  return x < 0.0 ? upper_tail(-x) : 1.0 - upper_tail(x);
}

double SymmetricDensity::scale_hint() const {
  return std::visit(Overloaded{
                        [](const StudentT&) { return 1.0; },
                        [&](const GeneralizedGaussian& g) { return std::pow(gg_scale_, 1.0 / (2.0 * g.s)); },
                        [](const Contaminated& m) {
                          return std::max(m.nominal->scale_hint(), m.contaminant->scale_hint());
                        },
                    },
                    kind_);
}

// Solves upper_tail(y) = p for p in (0, 1/2].
double SymmetricDensity::upper_quantile(double p) const {
  if (p >= 0.5) return 0.0;
  double hi = scale_hint();
  for (int i = 0; upper_tail(hi) > p; ++i) {
    if (i > 2000 || !std::isfinite(hi)) throw NumericalError("quantile: bracket expansion failed");
    hi *= 2.0;
  }
  const auto f = [this, p](double y) { return upper_tail(y) - p; };
  return find_root(f, 0.0, hi, 1e-15 * hi);
}

double SymmetricDensity::quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile: q must lie in (0, 1)");
  if (q < 0.5) return -upper_quantile(q);
  return upper_quantile(1.0 - q);
}

double SymmetricDensity::folded_quantile(double q) const {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("folded_quantile: q must lie in (0, 1)");
  return upper_quantile(0.5 * (1.0 - q));
}

bool SymmetricDensity::has_closed_form_fisher() const noexcept {
  return !std::holds_alternative<Contaminated>(kind_);
}

double SymmetricDensity::fisher_information() const {
  return std::visit(
      Overloaded{
          [](const StudentT& t) { return (t.nu + 1.0) / (t.nu + 3.0); },
          [&](const GeneralizedGaussian& g) {
            const double inv2s = 1.0 / (2.0 * g.s);
            if (!(2.0 - inv2s > 0.0)) {
              throw NumericalError("fisher_information: infinite for GG with s <= 1/4");
            }
            return 4.0 * g.s * g.s * std::pow(gg_scale_, -1.0 / g.s) *
                   std::exp(ln_gamma(2.0 - inv2s) - ln_gamma(inv2s));
          },
          [&](const Contaminated&) { return fisher_information_numeric(); },
      },
      kind_);
}

double SymmetricDensity::fisher_information_numeric() const {
  const auto integrand = [this](double x) {
    const double phi = score_abs(x);
    return phi * phi * pdf(x);
  };
  return 2.0 * integrate(integrand, 0.0, std::numeric_limits<double>::infinity());
}

double SymmetricDensity::sample_one(Rng& rng) const {
  return std::visit(
      Overloaded{
          [&](const StudentT& t) {
            const double z = sample_normal(rng);
            const double chi2_over_nu = sample_gamma(rng, 0.5 * t.nu) * 2.0 / t.nu;
            return z / std::sqrt(chi2_over_nu);
          },
          [&](const GeneralizedGaussian& g) {
            const double sign = sample_uniform(rng) < 0.5 ? -1.0 : 1.0;
            const double gamma = sample_gamma(rng, 1.0 / (2.0 * g.s));
            return sign * std::pow(gg_scale_ * gamma, 1.0 / (2.0 * g.s));
          },
          [&](const Contaminated& m) {
            return sample_uniform(rng) < m.eps ? m.nominal->sample_one(rng) : m.contaminant->sample_one(rng);
          },
      },
      kind_);
}

void SymmetricDensity::sample_into(Rng& rng, double theta, std::span<double> out) const {
  for (double& v : out) v = theta + sample_one(rng);
}

std::vector<double> SymmetricDensity::sample(Rng& rng, std::size_t n, double theta) const {
  std::vector<double> out(n);
  sample_into(rng, theta, out);
  return out;
}

}  // namespace semiloc
