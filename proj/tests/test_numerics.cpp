#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "oracles.hpp"
#include "semiloc/numerics.hpp"
#include "semiloc/rng.hpp"

using namespace semiloc;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }
}  // namespace

TEST_CASE("integrate: polynomial and normalization") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(integrate(std_normal_pdf, -kInf, kInf) - 1.0) <= 1e-10);
  CHECK(std::abs(integrate(std_normal_pdf, 0.0, kInf) - 0.5) <= 1e-10);
  CHECK(std::abs(integrate(std_normal_pdf, -kInf, 1.0) - oracle::normal_cdf(1.0)) <= 1e-10);
}

TEST_CASE("integrate: squared Gaussian rank score has unit mass") {
  // Oracle: the same integral after q = 2 Phi(z) - 1, by a dense trapezoid in z.
  const double reference = oracle::trapezoid([](double z) { return 2.0 * z * z * std_normal_pdf(z); }, 0.0, 40.0, 200000);
  CHECK(reference == doctest::Approx(1.0).epsilon(1e-9));
  const auto k2 = [](double q) {
    const double k = std_normal_quantile(0.5 * (1.0 + q));
    return k * k;
  };
  const double value = integrate(k2, 0.0, 1.0);
  CHECK(std::abs(value - reference) <= 1e-8);
}

TEST_CASE("integrate: linearity on random polynomial pairs") {
  Rng rng(2024);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> p(5), q(5);
    for (auto& c : p) c = 4.0 * sample_uniform(rng) - 2.0;
    for (auto& c : q) c = 4.0 * sample_uniform(rng) - 2.0;
    const double alpha = 3.0 * sample_uniform(rng) - 1.5;
    const double beta = 3.0 * sample_uniform(rng) - 1.5;
    const auto poly = [](const std::vector<double>& c, double x) {
      double v = 0.0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
      return v;
    };
    const double a = -1.0 - sample_uniform(rng);
    const double b = 1.0 + sample_uniform(rng);
    const QuadratureSpec spec;
    const double lhs = integrate([&](double x) { return alpha * poly(p, x) + beta * poly(q, x); }, a, b, spec);
    const double rhs = alpha * integrate([&](double x) { return poly(p, x); }, a, b, spec) +
                       beta * integrate([&](double x) { return poly(q, x); }, a, b, spec);
    CHECK(std::abs(lhs - rhs) <= 2.0 * spec.abs_tol);
  }
}

TEST_CASE("integrate: endpoint singularity and non-convergence") {
  // int_0^1 x^-1/2 = 2
  CHECK(integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-9));
  // int_0^1 log(x) = -1
  CHECK(integrate([](double x) { return std::log(x); }, 0.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-9));

  try {
    integrate([](double x) { return std::pow(x, -0.95); }, 0.0, 1.0, {1e-10, 5});
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.estimate() > 0.0);
    CHECK(e.error_bound() > 1e-10);
  }
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 0.0, 1.0, {0.0, 10}), std::invalid_argument);
}

TEST_CASE("find_root") {
  CHECK(find_root([](double x) { return x - 2.0; }, 0.0, 5.0, 1e-12) == doctest::Approx(2.0).epsilon(1e-12));
  const double q75 = find_root([](double x) { return std_normal_cdf(x) - 0.75; }, -5.0, 5.0, 1e-13);
  CHECK(std::abs(q75 - oracle::normal_quantile(0.75)) <= 1e-9);
  CHECK(std::abs(q75 - 0.674490) <= 1e-6);
  CHECK(std::abs(find_root([](double x) { return x * x * x; }, -1.0, 2.0, 1e-12)) <= 1e-12);
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12), std::invalid_argument);
}

TEST_CASE("ln_gamma") {
  CHECK(ln_gamma(0.5) == doctest::Approx(0.5 * std::log(std::numbers::pi)).epsilon(1e-14));
  CHECK(std::abs(ln_gamma(1.0)) <= 1e-14);
  CHECK(std::abs(ln_gamma(2.0)) <= 1e-14);
  CHECK(ln_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
  for (double x = 0.01; x < 200.0; x *= 1.07) {
    const double expected = std::lgamma(x);
    if (std::abs(expected) > 0.1) {
      CHECK(std::abs(ln_gamma(x) - expected) <= 1e-13 * std::abs(expected));
    } else {
      CHECK(std::abs(ln_gamma(x) - expected) <= 1e-14);
    }
  }
  CHECK_THROWS_AS(ln_gamma(0.0), std::invalid_argument);
  CHECK_THROWS_AS(ln_gamma(-1.5), std::invalid_argument);
}

TEST_CASE("incomplete gamma and beta against boost") {
  for (double a : {0.2, 0.5, 1.0, 1.7, 5.0, 30.0}) {
    for (double x : {1e-6, 0.01, 0.3, 1.0, 2.5, 10.0, 60.0}) {
      CHECK(std::abs(gamma_p(a, x) - boost::math::gamma_p(a, x)) <= 1e-13);
      CHECK(gamma_q(a, x) == doctest::Approx(boost::math::gamma_q(a, x)).epsilon(1e-11));
    }
  }
  for (double a : {0.5, 1.5, 5.0, 50.0}) {
    for (double b : {0.5, 2.0, 10.0}) {
      for (double x : {1e-8, 0.05, 0.3, 0.7, 0.99, 1 - 1e-9}) {
        CHECK(std::abs(incomplete_beta(a, b, x) - boost::math::ibeta(a, b, x)) <= 1e-13);
      }
    }
  }
}

TEST_CASE("standard normal cdf and quantile") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std::abs(std_normal_quantile(0.975) - 1.959964) <= 1e-6);
  CHECK(std::abs(std_normal_quantile(0.75) - 0.6744898) <= 1e-6);
  CHECK(std_normal_quantile(0.5) == 0.0);
  for (double x = -6.0; x <= 6.0; x += 0.01) {
    // Near 1 the stored cdf value itself is only good to one ulp, which
    // moves the root by ulp / pdf(x).
    const double p = std_normal_cdf(x);
    const double conditioning = (std::nextafter(p, 2.0) - p) / std_normal_pdf(x);
    CHECK(std::abs(std_normal_quantile(p) - x) <= 1e-9 + conditioning);
    if (x <= 0.0) CHECK(std::abs(std_normal_quantile(p) - x) <= 1e-9);
  }
  for (double lq = -12.0; lq < -0.31; lq += 0.05) {
    const double q = std::pow(10.0, lq);
    CHECK(std::abs(std_normal_quantile(q) - oracle::normal_quantile(q)) <= 1e-9);
    CHECK(std::abs(std_normal_quantile(1.0 - q) - oracle::normal_quantile(1.0 - q)) <= 1e-9);
  }
  CHECK_THROWS_AS(std_normal_quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(std_normal_quantile(1.0), std::invalid_argument);
  CHECK_THROWS_AS(std_normal_quantile(std::nan("")), std::invalid_argument);
}

TEST_CASE("rng: reproducibility and substreams") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 10000; ++i) REQUIRE(a() == b());

  Rng d1 = Rng::derive(7, 3), d2 = Rng::derive(7, 3);
  for (int i = 0; i < 1000; ++i) REQUIRE(d1() == d2());

  Rng s0 = Rng::derive(99, 0), s1 = Rng::derive(99, 1);
  std::vector<double> u0(100000), u1(100000);
  for (std::size_t i = 0; i < u0.size(); ++i) {
    u0[i] = sample_uniform(s0);
    u1[i] = sample_uniform(s1);
  }
  CHECK(std::abs(oracle::correlation(u0, u1)) < 0.01);
}

TEST_CASE("samplers: moments and ranges") {
  Rng rng(1);
  constexpr int kDraws = 1000000;
  double sum_n = 0.0, sum_g = 0.0, sum_small = 0.0;
  bool in_range = true;
  for (int i = 0; i < kDraws; ++i) {
    sum_n += sample_normal(rng);
    sum_g += sample_gamma(rng, 2.0);
    sum_small += sample_gamma(rng, 0.3);
    const double u = sample_uniform(rng);
    in_range = in_range && u > 0.0 && u < 1.0;
  }
  CHECK(std::abs(sum_n / kDraws) <= 0.005);
  CHECK(std::abs(sum_g / kDraws - 2.0) <= 0.006);
  // Var Gamma(0.3) = 0.3, 3 sigma / sqrt(N) ~ 0.0017
  CHECK(std::abs(sum_small / kDraws - 0.3) <= 0.002);
  CHECK(in_range);
  CHECK_THROWS_AS(sample_gamma(rng, 0.0), std::invalid_argument);
}

TEST_CASE("samplers: Kolmogorov-Smirnov against reference cdfs") {
  Rng rng(77);
  std::vector<double> normals(10000), gammas(10000);
  for (auto& v : normals) v = sample_normal(rng);
  for (auto& v : gammas) v = sample_gamma(rng, 0.4);
  CHECK(oracle::ks_pvalue(oracle::ks_statistic(normals, oracle::normal_cdf), normals.size()) > 0.01);
  const boost::math::gamma_distribution<double> g(0.4, 1.0);
  const auto gcdf = [&](double x) { return boost::math::cdf(g, x); };
  CHECK(oracle::ks_pvalue(oracle::ks_statistic(gammas, gcdf), gammas.size()) > 0.01);
}
