#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

#include "whitham/errors.hpp"
#include "whitham/special_functions.hpp"

using namespace whitham;
using boost::math::quadrature::gauss_kronrod;

namespace {

double integrate(const std::function<double(double)>& f, double a, double b) {
  return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-15);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("agm fixed points and a high-precision reference") {
  CHECK(agm(1, 1) == 1.0);
  CHECK(agm(2, 2) == 2.0);
  using big = boost::multiprecision::cpp_dec_float_50;
  big a = 1, b = big(1) / 2;
  for (int i = 0; i < 40; ++i) {
    const big an = (a + b) / 2;
    b = sqrt(a * b);
    a = an;
  }
  CHECK(rel(agm(1, 0.5), a.convert_to<double>()) <= 1e-15);
  CHECK_THROWS_AS(agm(0, 1), DomainError);
  CHECK_THROWS_AS(agm(1, -2), DomainError);
}

TEST_CASE("K against its defining integral") {
  CHECK(elliptic_K(0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  for (double s2 : {0.1, 0.5, 0.9}) {
    const double q = integrate([&](double p) { return 1 / std::sqrt(1 - s2 * std::sin(p) * std::sin(p)); }, 0,
                               std::numbers::pi / 2);
    CHECK(rel(elliptic_K(s2), q) <= 1e-12);
  }
  CHECK(elliptic_K(0.999999) > 7);
  CHECK_THROWS_AS(elliptic_K(1.0), DomainError);
  CHECK_THROWS_AS(elliptic_K(-0.1), DomainError);
}

TEST_CASE("E against its defining integral") {
  CHECK(elliptic_E(0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(elliptic_E(1) == doctest::Approx(1.0).epsilon(1e-15));
  const double s2 = 0.3;
  const double q = integrate([&](double p) { return std::sqrt(1 - s2 * std::sin(p) * std::sin(p)); }, 0,
                             std::numbers::pi / 2);
  CHECK(rel(elliptic_E(s2), q) <= 1e-12);
  CHECK_THROWS_AS(elliptic_E(1.5), DomainError);
}

TEST_CASE("third kind: reductions and the Legendre form") {
  for (double s2 : {0.0, 0.2, 0.7, 0.99}) CHECK(elliptic_Pi_complete(0, s2) == elliptic_K(s2));
  CHECK(elliptic_Pi_complete(0, 0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  const double r2 = 0.25, s2 = 0.5;
  const double legendre = integrate(
      [&](double p) {
        const double sn2 = std::sin(p) * std::sin(p);
        return 1 / ((1 - r2 * sn2) * std::sqrt(1 - s2 * sn2));
      },
      0, std::numbers::pi / 2);
  CHECK(rel(elliptic_Pi_complete(r2, s2), legendre) <= 1e-11);
  // negative characteristic is allowed
  const double neg = integrate(
      [&](double p) {
        const double sn2 = std::sin(p) * std::sin(p);
        return 1 / ((1 + 0.8 * sn2) * std::sqrt(1 - s2 * sn2));
      },
      0, std::numbers::pi / 2);
  CHECK(rel(elliptic_Pi_complete(-0.8, s2), neg) <= 1e-11);
  CHECK_THROWS_AS(elliptic_Pi_complete(1.0, 0.5), DomainError);
}

TEST_CASE("third kind: the Legendre form equals the sn form") {
  const double r2 = 0.4, s2 = 0.6, K = elliptic_K(s2);
  const double sn_form = integrate(
      [&](double v) {
        const double sn = boost::math::jacobi_sn(std::sqrt(s2), v);
        return 1 / (1 - r2 * sn * sn);
      },
      0, K);
  CHECK(rel(elliptic_Pi_complete(r2, s2), sn_form) <= 1e-10);
}

TEST_CASE("Legendre relation on random moduli") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(1e-6, 1 - 1e-6);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const double s2 = U(rng), c2 = 1 - s2;
    const double lhs = elliptic_E(s2) * elliptic_K(c2) + elliptic_E(c2) * elliptic_K(s2) -
                       elliptic_K(s2) * elliptic_K(c2);
    worst = std::max(worst, std::abs(lhs - std::numbers::pi / 2));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("monotonicity in the modulus") {
  double k = 0, e = 10, p = 0;
  for (int i = 0; i < 200; ++i) {
    const double s2 = i / 200.0;
    const double kn = elliptic_K(s2), en = elliptic_E(s2), pn = elliptic_Pi_complete(0.3, s2);
    if (i > 0) {
      CHECK(kn > k);
      CHECK(en < e);
      CHECK(pn > p);
    }
    k = kn;
    e = en;
    p = pn;
  }
}
