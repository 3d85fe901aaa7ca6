#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "whitham/ch_modulation.hpp"
#include "whitham/errors.hpp"
#include "whitham/hodograph.hpp"

using namespace whitham;
using boost::math::quadrature::gauss;

namespace {

InitialData linear() {
  return InitialData::from_function([](double u) { return u; }, [](double) { return 1.0; }, 0, 5);
}
InitialData square() {
  return InitialData::from_function([](double u) { return u * u; }, [](double u) { return 2 * u; }, 0, 5);
}
InitialData cube() {
  return InitialData::from_function([](double u) { return u * u * u; }, [](double u) { return 3 * u * u; }, 0, 5);
}
// decreasing data breaks into an oscillatory zone
InitialData falling() {
  return InitialData::from_function([](double u) { return -(u - 1) * (u - 1) * (u - 1); },
                                    [](double u) { return -3 * (u - 1) * (u - 1); }, 0.01, 3);
}

// q by tensor Gauss-Legendre after mu = 1 - 2 v^2, eta = sin(theta), which
// remove both endpoint singularities
double q_legendre(const std::function<double(double)>& f, const Triple& u) {
  const double pi = std::numbers::pi;
  return gauss<double, 40>::integrate(
             [&](double v) {
               return gauss<double, 40>::integrate(
                   [&](double th) {
                     const double mu = 1 - 2 * v * v, eta = std::sin(th);
                     const double a = (1 + mu) * (1 + eta) / 4, b = (1 + mu) * (1 - eta) / 4, c = (1 - mu) / 2;
                     return f(a * u[0] + b * u[1] + c * u[2]);
                   },
                   -pi / 2, pi / 2);
             },
             0, 1) /
         pi;
}

std::vector<double> grid(double a, double b, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a + (b - a) * i / (n - 1);
  return g;
}

}  // namespace

TEST_CASE("initial data validation and inverse") {
  CHECK_THROWS_AS(InitialData::from_samples({{0, 0}, {1, 1}, {2, 2}}), DomainError);
  CHECK_THROWS_AS(InitialData::from_samples({{0, 0}, {1, 1}, {1, 2}, {2, 3}}), DomainError);
  CHECK_THROWS_AS(InitialData::from_samples({{0, 0}, {1, 1}, {2, 0.5}, {3, 3}}), DomainError);
  const InitialData d = InitialData::from_samples({{0, 0}, {1, 1}, {2, 4}, {3, 9}, {4, 16}});
  CHECK(d.direction() == 1);
  CHECK(d(2) == doctest::Approx(4));
  CHECK(d.inverse(9) == doctest::Approx(3).epsilon(1e-12));
  CHECK(std::isnan(d.inverse(20)));
  CHECK(falling().direction() == -1);
}

TEST_CASE("EPD kernel: constant, linear and quadratic data") {
  const InitialData one = InitialData::from_function([](double) { return 1.0; }, [](double) { return 0.0; }, 0, 5);
  for (Triple u : {Triple{1, 2, 3}, Triple{0.2, 0.3, 4.9}}) {
    CHECK(std::abs(epd_q(one, u).q - 1) <= 1e-10);
    CHECK(std::abs(epd_q(linear(), u).q - (u[0] + u[1] + u[2]) / 3) <= 1e-8);
  }
  // Dirichlet(1/2,1/2,1/2) weights: E[a_i^2] = 1/5, E[a_i a_j] = 1/15
  const EpdValue s = epd_q(square(), {1, 2, 3});
  CHECK(s.q == doctest::Approx(64.0 / 15.0).epsilon(1e-12));
  CHECK(std::abs(s.q - q_legendre([](double x) { return x * x; }, {1, 2, 3})) <= 1e-10);
  const Triple u{0.5, 1, 2};
  CHECK(std::abs(epd_q(cube(), u).q - q_legendre([](double x) { return x * x * x; }, u)) <= 1e-8);
  CHECK_THROWS_AS(epd_q(square(), {1, 2, 6}), DomainError);
}

TEST_CASE("EPD system and diagonal boundary") {
  const EpdResidual l = epd_residual(linear(), {1, 2, 3});
  CHECK(l.system < 1e-6);
  CHECK(l.boundary < 1e-6);
  const EpdResidual c = epd_residual(cube(), {0.5, 1, 2});
  CHECK(c.system < 1e-4);
  CHECK(c.boundary < 1e-6);
}

TEST_CASE("commuting speeds") {
  const Triple u{1, 2, 3};
  const CommutingSpeeds l = commuting_speeds(linear(), u);
  for (int i = 1; i < 3; ++i) CHECK(l.w[i] - l.C[i] / 3 == doctest::Approx(l.w[0] - l.C[0] / 3).epsilon(1e-8));
  const Triple C = speeds(ChCurve(0, u)).C;
  for (int i = 0; i < 3; ++i) CHECK(l.C[i] == doctest::Approx(C[i]).epsilon(1e-12));
  CHECK(tsarev_residual(square(), u) < 1e-3);
  const InitialData k = InitialData::from_function([](double) { return 2.0; }, [](double) { return 0.0; }, 0, 5);
  const CommutingSpeeds w = commuting_speeds(k, u);
  for (double v : w.w) CHECK(std::abs(v - 2) <= 1e-10);
}

TEST_CASE("point solve: t = 0, refusals, linear data") {
  const SolveResult r = solve(cube(), 8, 0, {1, 2, 3});
  CHECK(r.status == SolveStatus::Coalesced);
  for (double v : r.u) CHECK(v == doctest::Approx(2).epsilon(1e-10));
  CHECK(solve(cube(), 500, 0, {1, 2, 3}).status == SolveStatus::NoSolution);
  SolveOptions o;
  o.nu = 0.5;
  CHECK_THROWS_AS(solve(cube(), 1, 0.1, {1, 2, 3}, o), DomainError);
  CHECK_THROWS_AS(solve(cube(), 1, -0.1, {1, 2, 3}), DomainError);
  CHECK_THROWS_AS(solve(cube(), 1, 0.1, {2, 1, 3}), DomainError);
  // linear data does not open a zone: any converged root must still be exact
  for (double t : {0.01, 0.1})
    for (Triple seed : {Triple{1, 1.5, 2}, Triple{1.9, 2, 2.1}}) {
      const SolveResult s = solve(linear(), 2, t, seed);
      if (s.status == SolveStatus::Solved) CHECK(s.residual < 1e-9);
    }
  const ModulationSolution m = solve_field(linear(), grid(0.5, 4, 30), grid(0, 0.5, 6));
  for (const ZoneEdges& z : m.zones) CHECK_FALSE(z.open);
  CHECK(m.attempted == 0);
}

TEST_CASE("field solve on breaking data") {
  const InitialData f = falling();
  const std::vector<double> xs = grid(-0.5, 1, 60), ts = grid(0, 0.2, 12);
  const ModulationSolution s = solve_field(f, xs, ts);
  REQUIRE(s.points.size() == xs.size() * ts.size());
  CHECK(s.attempted > 50);
  CHECK(s.passed == s.attempted);
  CHECK(s.max_residual < 1e-3);
  CHECK_FALSE(s.zones.front().open);
  CHECK(s.zones.back().open);
  for (const FieldPoint& p : s.points) {
    if (p.status != PointStatus::Genus1) continue;
    CHECK(p.u[0] < p.u[1]);
    CHECK(p.u[1] < p.u[2]);
    // hodograph consistency at the stored root
    const SolveResult r = solve(f, p.x, p.t, p.u);
    CHECK(r.status == SolveStatus::Solved);
    CHECK(r.residual < 1e-9);
  }
  // zone edges carry coalescing triples
  const ZoneEdges& z = s.zones.back();
  CHECK(z.u_left[1] - z.u_left[0] < 1e-3 * (z.u_left[2] - z.u_left[0]) + 1e-6);
  CHECK(z.u_right[2] - z.u_right[1] < 1e-3 * (z.u_right[2] - z.u_right[0]) + 1e-6);
}

TEST_CASE("field solve is deterministic and thread independent") {
  const std::vector<double> xs = grid(-0.5, 1, 24), ts = grid(0, 0.2, 5);
  FieldOptions one, two;
  one.threads = 1;
  two.threads = 2;
  std::ostringstream a, b, c;
  write_csv(a, solve_field(falling(), xs, ts, one));
  write_csv(b, solve_field(falling(), xs, ts, one));
  write_csv(c, solve_field(falling(), xs, ts, two));
  CHECK(a.str() == b.str());
  CHECK(a.str() == c.str());
  CHECK(a.str().rfind("x,t,u1,u2,u3,residual,status\n", 0) == 0);
}

TEST_CASE("field solve: empty grids and refusals") {
  CHECK(solve_field(falling(), {}, {0.1}).points.empty());
  CHECK(solve_field(falling(), {0.1}, {}).points.empty());
  FieldOptions o;
  o.nu = 1;
  CHECK_THROWS_AS(solve_field(falling(), {0.1}, {0.1}, o), DomainError);
  CHECK_THROWS_AS(solve_field(falling(), {0.2, 0.1}, {0.1}), DomainError);
  const InitialData k = InitialData::from_function([](double) { return 2.0; }, [](double) { return 0.0; }, 0, 5);
  CHECK_THROWS_AS(solve_field(k, {0.1}, {0.1}), DomainError);
}
