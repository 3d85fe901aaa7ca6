#include <doctest.h>

#include <cmath>
#include <random>

#include "sampling.hpp"
#include "whitham/diagonal_metric.hpp"
#include "whitham/errors.hpp"
#include "whitham/reciprocal.hpp"

using namespace whitham;

namespace {

double H0_of(const Triple& b) {
  const KdvCurve k = kdv_curve(b);
  return -std::sqrt(b[0] * b[1] * b[2]) * k.alpha0;
}

}  // namespace

TEST_CASE("coordinate map") {
  const ChCurve c(1, {0, 1, 3});
  const ReciprocalPair p = pair(c);
  CHECK(p.kdv.beta[0] == 1.0);
  CHECK(p.kdv.beta[1] == 0.5);
  CHECK(p.kdv.beta[2] == 0.25);
  std::mt19937_64 rng(83);
  for (int n = 0; n < 50; ++n) {
    const ChCurve r = testing::random_curve(rng);
    const Triple b = beta_of_u(r.nu(), r.u());
    for (double v : b) CHECK(v > 0);
    const Triple u = u_of_beta(r.nu(), b);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(u[i] - r.u(i)) <= 4e-16 * std::max(1.0, std::abs(r.u(i)) + r.nu()));
  }
}

TEST_CASE("speeds in the new coordinates and the velocity identity") {
  for (const ChCurve& c : {ChCurve(0, {1, 2, 3}), ChCurve(1, {0, 1, 3})}) {
    const VelocityIdentity v = velocity_identity(pair(c));
    CHECK(v.delta_coordinates <= 1e-9);
    CHECK(v.delta_identity <= 1e-8);
  }
  std::mt19937_64 rng(89);
  for (int n = 0; n < 50; ++n) {
    const VelocityIdentity v = velocity_identity(pair(testing::random_curve(rng)));
    CHECK(v.delta_coordinates <= 1e-9);
    CHECK(v.delta_identity <= 1e-8);
  }
}

TEST_CASE("metric correspondence for all exponents") {
  std::mt19937_64 rng(97);
  for (int n = 0; n < 30; ++n) {
    const ReciprocalPair p = pair(n == 0 ? ChCurve(0, {1, 2, 3}) : testing::random_curve(rng));
    for (int e = 0; e < 4; ++e) CHECK(metric_correspondence(p, e) <= 1e-8);
  }
}

TEST_CASE("metric transformation with A = H0") {
  const Triple b{3, 2, 1};
  const KdvCurve k = kdv_curve(b);
  const ReciprocalPair p = pair(ChCurve(0.25, u_of_beta(0.25, b)));
  const Triple Ct = tilde_speeds(p);
  const double h = 1e-2 * std::min(b[0] - b[1], b[1] - b[2]);

  // flat KdV metric -> CH conformally flat metric
  const FerapontovResult f = ferapontov_transform(kdv_metric_fn(0), H0_of, b, h);
  const Triple g = kdv_metric(k, 0);
  for (int i = 0; i < 3; ++i) CHECK(f.metric[i] == doctest::Approx(g[i] / (p.H0 * p.H0)).epsilon(1e-12));
  CHECK(f.residual < 1e-3);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK(std::abs(f.transformed.sectional[i][j] + 2 * 0.25 + Ct[i] + Ct[j]) < 1e-4);

  // constant curvature -1/2 metric -> curvature -1
  const FerapontovResult s = ferapontov_transform(kdv_metric_fn(1), H0_of, b, h);
  CHECK(s.residual < 1e-3);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) CHECK(s.transformed.sectional[i][j] == doctest::Approx(-1).epsilon(1e-4));
}

TEST_CASE("metric transformation with constant A") {
  const Triple b{3, 2, 1};
  const double A = 1.7;
  const FerapontovResult f = ferapontov_transform(kdv_metric_fn(1), [&](const Triple&) { return A; }, b, 1e-2);
  for (double w : f.w) CHECK(std::abs(w) < 1e-8);
  const Triple g = kdv_metric(kdv_curve(b), 1);
  for (int i = 0; i < 3; ++i) CHECK(f.metric[i] == doctest::Approx(g[i] / (A * A)).epsilon(1e-14));
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK(f.transformed.sectional[i][j] == doctest::Approx(A * A * f.original.sectional[i][j]).epsilon(1e-8));
  CHECK_THROWS_AS(ferapontov_transform(kdv_metric_fn(1), [](const Triple&) { return 0.0; }, b, 1e-2),
                  DomainError);
}

TEST_CASE("density correspondence modulo Casimirs") {
  std::mt19937_64 rng(101);
  double worst34 = 0;
  for (int n = 0; n < 30; ++n) {
    const ReciprocalPair p = pair(n == 0 ? ChCurve(0.5, {0, 1, 2}) : testing::random_curve(rng));
    const CasimirRelations r = casimir_relations(p);
    CHECK(std::abs(r.h0_relation) <= 1e-7);
    CHECK(std::abs(r.h1_relation) <= 1e-7);
    CHECK(std::abs(r.h2_relation) <= 1e-7);
    CHECK(r.h_neg1_delta <= 1e-10);
    worst34 = std::max(worst34, std::abs(r.h2_relation_3_4));
  }
  // the 3/4 weighting of the cubic term does not satisfy the relation
  CHECK(worst34 > 1e-2);
}

TEST_CASE("table: rows, curvatures and the nu = 0 densities") {
  const ReciprocalPair p = pair(ChCurve(0, {1, 2, 3}));
  const auto rows = table1(p);
  REQUIRE(rows.size() == 8);
  int kdv = 0;
  for (const auto& r : rows) {
    CHECK(r.ok);
    CHECK(r.deviation < 1e-4);
    if (r.side == Side::KdV) ++kdv;
  }
  CHECK(kdv == 4);
  const TildeDensities t = tilde_densities_kdv(p);
  CHECK(t.h_neg1 == 1.0);
  CHECK(t.h0 == doctest::Approx(p.H.Hneg[0] / p.H0).epsilon(1e-14));
  CHECK(t.h1 == doctest::Approx(p.H.Hneg[1] / p.H0).epsilon(1e-14));
  CHECK(t.h2 == doctest::Approx(p.H.Hneg[2] / p.H0).epsilon(1e-14));

  std::mt19937_64 rng(103);
  for (int n = 0; n < 5; ++n)
    for (const auto& r : table1(pair(testing::random_curve(rng, 0.2)))) CHECK(r.ok);
}
