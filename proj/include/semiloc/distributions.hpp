#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "semiloc/rng.hpp"

namespace semiloc {

class SymmetricDensity;

/// Standardized (scale 1) Student-t with `nu` degrees of freedom.
struct StudentT {
  double nu;
};

/// g(x) = c * exp(-|x|^(2s) / (2^s b)); s = 1 is the Gaussian with variance b.
struct GeneralizedGaussian {
  double s;
  double b;
};

/// eps * nominal + (1 - eps) * contaminant.
struct Contaminated {
  double eps;
  std::shared_ptr<const SymmetricDensity> nominal;
  std::shared_ptr<const SymmetricDensity> contaminant;
};

/// A density that is symmetric about zero and strictly positive on the real
/// line. Immutable once built; copies share the mixture components.
class SymmetricDensity {
 public:
  using Kind = std::variant<StudentT, GeneralizedGaussian, Contaminated>;

  static SymmetricDensity student_t(double nu);
  static SymmetricDensity generalized_gaussian(double s, double b);
  static SymmetricDensity contaminated(double eps, const SymmetricDensity& nominal,
                                       const SymmetricDensity& contaminant);

  const Kind& kind() const noexcept { return kind_; }
  std::string label() const;

  double log_pdf(double x) const;
  double pdf(double x) const;

  /// -g'(u)/g(u). Evaluated on |u| and re-signed, so it is exactly odd.
  double score_phi(double u) const;

  double cdf(double x) const;
  /// P(X > y) for y >= 0, computed without forming 1 - cdf.
  double upper_tail(double y) const;
  double quantile(double q) const;
  /// Quantile of |X|: G^-1((1 + q) / 2).
  double folded_quantile(double q) const;

  /// Rough spread used to size brackets and evaluation grids.
  double scale_hint() const;

  /// Closed form for Student-t and GG; quadrature for mixtures.
  double fisher_information() const;
  /// Always by quadrature of phi^2 g over the real line.
  double fisher_information_numeric() const;
  bool has_closed_form_fisher() const noexcept;

  double sample_one(Rng& rng) const;
  std::vector<double> sample(Rng& rng, std::size_t n, double theta) const;
  void sample_into(Rng& rng, double theta, std::span<double> out) const;

 private:
  explicit SymmetricDensity(Kind kind);

  double score_abs(double y) const;
  double upper_quantile(double p) const;

  Kind kind_;
  // Cached constants: log normalizer and, for GG, 2^s b.
  double log_norm_ = 0.0;
  double gg_scale_ = 0.0;
};

/// Data model X_i ~ g0(x - theta0).
struct LocationModel {
  SymmetricDensity density;
  double theta0 = 0.0;

  double pdf(double x) const { return density.pdf(x - theta0); }
  std::vector<double> sample(Rng& rng, std::size_t n) const { return density.sample(rng, n, theta0); }
};

}  // namespace semiloc
