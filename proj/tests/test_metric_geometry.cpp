#include <doctest.h>

#include <cmath>
#include <random>

#include "sampling.hpp"
#include "whitham/ch_modulation.hpp"
#include "whitham/errors.hpp"
#include "whitham/metric_geometry.hpp"

using namespace whitham;

TEST_CASE("metric signature and exponent ratios") {
  std::mt19937_64 rng(43);
  for (int n = 0; n < 100; ++n) {
    const ChCurve c = testing::random_curve(rng);
    const Triple g0 = metric(c, 0), g1 = metric(c, 1);
    // the middle component has the opposite sign on every valid curve
    CHECK(g0[0] > 0);
    CHECK(g0[1] < 0);
    CHECK(g0[2] > 0);
    for (int i = 0; i < 3; ++i) CHECK(g0[i] / g1[i] == doctest::Approx(2 * (c.u(i) + c.nu())).epsilon(1e-14));
  }
}

TEST_CASE("residue of Omega_nu^2 against the local limit") {
  std::mt19937_64 rng(47);
  for (int n = 0; n < 20; ++n) {
    const ChCurve c = testing::random_curve(rng, 0.1);
    const CurveConstants k = constants(c);
    for (int i = 0; i < 3; ++i) {
      const double res = residue_omega_nu_sq(c, k, i);
      // (lambda - u^i) * density^2 -> residue; first-order error removed by Richardson
      auto lim = [&](double d) {
        const double l = c.u(i) + d;
        const std::complex<double> w = eval_differential(c, k, DifferentialKind::OmegaNu, l);
        return (d * w * w).real();
      };
      const double d = 1e-5 * c.min_gap();
      const double est = 2 * lim(d) - lim(2 * d);
      CHECK(std::abs(est - res) <= 1e-8 * std::max(1.0, std::abs(res)));
    }
  }
}

TEST_CASE("rotation coefficients: closed form, differences, exponent ratios, Egorov defect") {
  const ChCurve c(0, {1, 2, 3});
  for (int e = 0; e < 4; ++e) {
    const CMatrix a = rotation_coefficients(c, e), b = rotation_coefficients_fd(c, e);
    double defect = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        CHECK(std::abs(a[i][j] - b[i][j]) <= 1e-5 * std::max(1.0, std::abs(a[i][j])));
        defect = std::max(defect, std::abs(a[i][j] - a[j][i]));
      }
    CHECK(defect > 1e-3);
    CHECK(curvature(c, e).egorov_defect > 1e-3);
  }
  // r_ij(e) / r_ij(e') = ((u^j+nu)/(u^i+nu))^{(e'-e)/2}
  const ChCurve d(0.4, {0.1, 1.2, 2.9});
  const CMatrix r0 = rotation_coefficients(d, 0);
  for (int e = 1; e < 4; ++e) {
    const CMatrix r = rotation_coefficients(d, e);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        const double q = std::pow((d.u(j) + d.nu()) / (d.u(i) + d.nu()), -e / 2.0);
        CHECK(std::abs(r[i][j] / r0[i][j] - q) <= 1e-12 * q);
      }
  }
}

TEST_CASE("curvature table on the reference curve") {
  const ChCurve c(0, {1, 2, 3});
  const CurvatureReport r0 = curvature(c, 0);
  double m = r0.R.max_offdiag();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) m = std::max(m, std::abs(r0.R.sectional[i][j]));
  CHECK(m < 1e-4);
  CHECK(curvature(c, 2).R.sectional[0][1] == doctest::Approx(-1).epsilon(1e-4));
  const Triple C = speeds(c).C;
  CHECK(std::abs(curvature(c, 3).R.sectional[0][1] + 2 * c.nu() + C[0] + C[1]) < 1e-4);
  for (int e = 0; e < 4; ++e) CHECK_NOTHROW(verify_curvature(c, e));
}

TEST_CASE("curvature table on random curves") {
  std::mt19937_64 rng(53);
  for (int n = 0; n < 20; ++n) {
    const ChCurve c = testing::random_curve(rng, 0.1);
    for (int e = 0; e < 4; ++e) {
      const CurvatureReport r = curvature(c, e);
      CHECK(curvature_deviation(c, r, e) < 1e-4);
      CHECK(r.egorov_defect > 1e-3);
    }
  }
}

TEST_CASE("Tsarev relation for the flat and the next metric") {
  CHECK(tsarev_check(ChCurve(0, {1, 2, 3})) < 1e-4);
  CHECK(tsarev_check(ChCurve(1, {0, 2, 5})) < 1e-4);
  CHECK(tsarev_check(ChCurve(0, {1, 2, 3}), 1) < 1e-4);
  CHECK(tsarev_check(ChCurve(1, {0, 2, 5}), 1) < 1e-4);
}

TEST_CASE("flat pencil: contravariant combination is flat") {
  const ChCurve c(0, {1, 2, 3});
  const auto res = pencil_check(c, {0.0, -1.0, 0.5, 1.0, 3.0});
  REQUIRE(res.size() == 5);
  for (const auto& p : res) {
    if (p.degenerate) continue;
    CHECK(p.contravariant_residual < 1e-4);
  }
  // the covariant reading of the pencil is not flat away from lambda = 0
  CHECK(res[3].covariant_residual > 1e-3);
}

TEST_CASE("affinor sign of the exponent-3 metric") {
  std::mt19937_64 rng(59);
  for (int n = 0; n < 5; ++n) {
    const AffinorReport a = affinor_sign(testing::random_curve(rng, 0.1));
    CHECK(a.sign == -1);
    CHECK(a.minus_residual < 1e-4);
    CHECK(a.plus_residual > 1e-2);
  }
}
