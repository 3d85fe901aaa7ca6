#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "sampling.hpp"
#include "whitham/errors.hpp"

using namespace whitham;
using boost::math::quadrature::gauss_kronrod;
using cd = std::complex<double>;

namespace {

// 2 int_{u1}^{u2} g(lambda) dlambda with lambda = u1 + (u2-u1) sin^2 t; the
// Jacobian is taken from the rounded lambda so the endpoint factors cancel exactly
template <class G>
cd a_cycle(const ChCurve& c, G g) {
  const double a = c.u(0), b = c.u(1);
  auto part = [&](auto pick) {
    return gauss_kronrod<double, 61>::integrate(
        [&](double t) {
          const double s = std::sin(t);
          double l = a + (b - a) * s * s;
          if (l <= a) l = std::nextafter(a, b);
          if (l >= b) l = std::nextafter(b, a);
          return pick(g(l)) * 2 * std::sqrt((l - a) * (b - l));
        },
        0, std::numbers::pi / 2, 15, 1e-14);
  };
  return 2.0 * cd(part([](cd z) { return z.real(); }), part([](cd z) { return z.imag(); }));
}

Triple bumped(const ChCurve& c, int i, double h) {
  Triple u = c.u();
  u[i] += h;
  return u;
}

}  // namespace

TEST_CASE("curve validation names the violated invariant") {
  CHECK_THROWS_WITH_AS(ChCurve(0, {1, 1, 3}), doctest::Contains("u1 < u2"), InvalidCurve);
  CHECK_THROWS_WITH_AS(ChCurve(0, {1, 3, 2}), doctest::Contains("u2 < u3"), InvalidCurve);
  CHECK_THROWS_WITH_AS(ChCurve(1, {-1, 0, 1}), doctest::Contains("-nu < u1"), InvalidCurve);
  CHECK_THROWS_AS(ChCurve(0, {1, 1 + 1e-10, 3}), InvalidCurve);
  CHECK_NOTHROW(ChCurve(0, {1, 1 + 1e-8, 3}));
  CHECK_THROWS_AS(ChCurve(0, {1, NAN, 3}), InvalidCurve);
}

TEST_CASE("moments: location, independent quadrature and scaling") {
  const ChCurve c(0, {1, 2, 3});
  const double I0 = moment(c, 0), I1 = moment(c, 1);
  CHECK(I0 > 0);
  CHECK(I1 / I0 > 1);
  CHECK(I1 / I0 < 2);
  const cd gk = a_cycle(c, [&](double l) { return cd(1.0 / std::sqrt(c.R(l))); });
  CHECK(std::abs(I0 - gk.real()) <= 1e-10 * I0);
  for (double s : {0.5, 2.0, 7.0}) {
    const ChCurve cs(0, {s * 1, s * 2, s * 3});
    CHECK(moment(cs, 0) == doctest::Approx(I0 / s).epsilon(1e-11));
  }
  CHECK_THROWS_AS(moment(c, 5), DomainError);
}

TEST_CASE("constants: sign of gamma1, zero of P1, closed vs moment forms") {
  const ChCurve c(0, {1, 2, 3});
  const CurveConstants k = constants(c);
  CHECK(k.gamma1 < 0);
  CHECK(P1(k, -c.nu()) < 0);
  const double root = -k.gamma1;
  CHECK(root > c.u(0));
  CHECK(root < c.u(1));
  CHECK(k.moments_checked);

  std::mt19937_64 rng(11);
  double worst1 = 0, worst2 = 0;
  for (int n = 0; n < 50; ++n) {
    const ChCurve r = testing::random_curve(rng);
    const CurveConstants kc = closed_constants(r);
    const double I0 = moment(r, 0), I1 = moment(r, 1), I2 = moment(r, 2);
    const double g1 = -I1 / I0, g2 = -I2 / I0 + 0.5 * (r.sum_u() - r.nu()) * I1 / I0;
    worst1 = std::max(worst1, std::abs(g1 - kc.gamma1));
    worst2 = std::max(worst2, std::abs(g2 - kc.gamma2));
    CHECK(kc.residue_sigma1_sq > 0);
  }
  CHECK(worst1 < 1e-9);
  CHECK(worst2 < 1e-9);
}

TEST_CASE("normalizations of the differentials") {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 10; ++n) {
    const ChCurve c = n == 0 ? ChCurve(0, {1, 2, 3}) : testing::random_curve(rng);
    const CurveConstants k = constants(c);
    auto ev = [&](DifferentialKind kind) {
      return a_cycle(c, [&](double l) { return eval_differential(c, k, kind, l); });
    };
    auto scale = [&](DifferentialKind kind) {
      return a_cycle(c, [&](double l) { return cd(std::abs(eval_differential(c, k, kind, l))); }).real();
    };
    CHECK(std::abs(ev(DifferentialKind::Sigma1)) <= 1e-10 * scale(DifferentialKind::Sigma1));
    CHECK(std::abs(ev(DifferentialKind::Sigma2)) <= 1e-10 * scale(DifferentialKind::Sigma2));
    CHECK(std::abs(ev(DifferentialKind::OmegaNu)) <= 1e-10 * scale(DifferentialKind::OmegaNu));
    CHECK(std::abs(ev(DifferentialKind::Phi) - 1.0) <= 1e-10);
    // Omega_{u1}, Omega_{u2} have their pole on the cycle; the variational test covers them
    const cd v = a_cycle(c, [&](double l) { return eval_branch_differential(c, k, 2, l); });
    const double s = a_cycle(c, [&](double l) { return cd(std::abs(eval_branch_differential(c, k, 2, l))); }).real();
    CHECK(std::abs(v) <= 1e-10 * s);
  }
}

TEST_CASE("density is real on the cycle and imaginary on the gap") {
  const ChCurve c(0.5, {0, 1, 2.5});
  const CurveConstants k = constants(c);
  CHECK(eval_differential(c, k, DifferentialKind::Phi, 0.5).imag() == 0.0);
  CHECK(eval_differential(c, k, DifferentialKind::Phi, 1.7).real() == 0.0);
  CHECK_THROWS_AS(eval_differential(c, k, DifferentialKind::Sigma1, 1.0), DomainError);
  CHECK_THROWS_AS(eval_differential(c, k, DifferentialKind::OmegaNu, -0.5), DomainError);
}

TEST_CASE("branch-point values") {
  const ChCurve c(0, {1, 2, 3});
  const CurveConstants k = constants(c);
  const cd s1 = eval_at_branch(c, k, DifferentialKind::Sigma1, 0);
  CHECK(s1.imag() == 0.0);
  CHECK(s1.real() < 0);
  const cd phi = eval_at_minus_nu(c, k, DifferentialKind::Phi);
  const cd expected = 2.0 / (k.I0 * csqrt(c.S_nu()));
  CHECK(std::abs(phi - expected) <= 1e-14 * std::abs(expected));
  CHECK_THROWS_AS(eval_at_minus_nu(c, k, DifferentialKind::OmegaNu), DomainError);

  std::mt19937_64 rng(5);
  for (int n = 0; n < 50; ++n) {
    const ChCurve r = testing::random_curve(rng);
    const CurveConstants kr = constants(r);
    for (auto kind : {DifferentialKind::Sigma1, DifferentialKind::Sigma2, DifferentialKind::OmegaNu,
                      DifferentialKind::Phi})
      for (int i = 0; i < 3; ++i) {
        const cd v = eval_at_branch(r, kr, kind, i);
        CHECK(std::isfinite(std::abs(v)));
        CHECK(std::abs(v) > 0);
      }
  }
}

TEST_CASE("variational formulas at -nu and at the branch points") {
  std::mt19937_64 rng(17);
  for (int n = 0; n < 12; ++n) {
    const ChCurve c = n == 0 ? ChCurve(0, {1, 2, 3}) : testing::random_curve(rng, 0.1);
    const CurveConstants k = constants(c);
    const double h = 1e-6 * std::max(1.0, c.u(2));
    for (int i = 0; i < 3; ++i) {
      const ChCurve p(c.nu(), bumped(c, i, h)), m(c.nu(), bumped(c, i, -h));
      const CurveConstants kp = constants(p), km = constants(m);
      const cd Oi = eval_at_branch(c, k, DifferentialKind::OmegaNu, i);

      // d phi(-nu) = 1/2 phi(u^i) Omega_nu(u^i)
      const cd dphi = (eval_at_minus_nu(p, kp, DifferentialKind::Phi) - eval_at_minus_nu(m, km, DifferentialKind::Phi)) / (2 * h);
      const cd rphi = 0.5 * eval_at_branch(c, k, DifferentialKind::Phi, i) * Oi;
      CHECK(std::abs(dphi - rphi) <= 1e-5 * std::abs(rphi));

      // d sigma1(-nu) = 1/2 sigma1(u^i) Omega_nu(u^i)
      const cd ds = (eval_at_minus_nu(p, kp, DifferentialKind::Sigma1) - eval_at_minus_nu(m, km, DifferentialKind::Sigma1)) / (2 * h);
      const cd rs = 0.5 * eval_at_branch(c, k, DifferentialKind::Sigma1, i) * Oi;
      CHECK(std::abs(ds - rs) <= 1e-5 * std::abs(rs));

      // gamma derivatives
      const cd s1 = eval_at_branch(c, k, DifferentialKind::Sigma1, i);
      const cd s2 = eval_at_branch(c, k, DifferentialKind::Sigma2, i);
      const double dg1 = (kp.gamma1 - km.gamma1) / (2 * h), dg2 = (kp.gamma2 - km.gamma2) / (2 * h);
      const cd eg1 = -0.5 + 0.25 * s1 * s2;
      const cd eg2 = 0.25 * (c.sum_u() - c.nu()) - 0.5 * c.u(i) + 0.25 * s2 * s2;
      CHECK(std::abs(dg1 - eg1) <= 1e-5 * std::max(1.0, std::abs(eg1)));
      CHECK(std::abs(dg2 - eg2) <= 1e-5 * std::max(1.0, std::abs(eg2)));

      // d Omega_nu(u^j) = 1/2 Omega_nu(u^i) Omega_{u^i}(u^j), j != i
      for (int j = 0; j < 3; ++j) {
        if (j == i) continue;
        const cd dO = (eval_at_branch(p, kp, DifferentialKind::OmegaNu, j) - eval_at_branch(m, km, DifferentialKind::OmegaNu, j)) / (2 * h);
        const cd rO = 0.5 * Oi * eval_branch_at_branch(c, k, i, j);
        CHECK(std::abs(dO - rO) <= 1e-4 * std::max(1.0, std::abs(rO)));
      }
    }
  }
}

TEST_CASE("nearly coalescent curves stay usable") {
  const ChCurve c(0, {1, 1 + 1e-8, 3});
  const CurveConstants k = constants(c);
  CHECK(std::isfinite(k.gamma1));
  CHECK(std::isfinite(k.gamma2));
  CHECK(k.I0 > 0);
}
