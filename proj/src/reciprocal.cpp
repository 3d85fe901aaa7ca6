#include "whitham/reciprocal.hpp"

#include <cmath>

#include "whitham/errors.hpp"
#include "whitham/metric_geometry.hpp"

namespace whitham {

namespace {

double prod_except(const Triple& b, int i) {
  double p = 1.0;
  for (int j = 0; j < 3; ++j)
    if (j != i) p *= b[i] - b[j];
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double H0_of_beta(const Triple& b) { return kdv_H0(b); }

}  // namespace

Triple beta_of_u(double nu, const Triple& u) {
  return {1.0 / (u[0] + nu), 1.0 / (u[1] + nu), 1.0 / (u[2] + nu)};
}

Triple u_of_beta(double nu, const Triple& b) {
  return {1.0 / b[0] - nu, 1.0 / b[1] - nu, 1.0 / b[2] - nu};
}

ReciprocalPair pair(const ChCurve& c) {
  const KdvCurve k = kdv_curve(beta_of_u(c.nu(), c.u()));
  const KdvHamiltonians H = kdv_hamiltonians(k, c.nu());
  return ReciprocalPair{c, k, H, H.H0, H.N};
}

Triple tilde_speeds(const ReciprocalPair& p) {
  const auto& b = p.kdv.beta;
  const double base = 1.0 / b[0] + 1.0 / b[1] + 1.0 / b[2] - p.ch.nu();
  Triple C;
  for (int i = 0; i < 3; ++i)
    C[i] = base + 2.0 * p.kdv.alpha0 * prod_except(b, i) / (b[i] * (b[i] + p.kdv.alpha1));
  return C;
}

VelocityIdentity velocity_identity(const ReciprocalPair& p) {
  VelocityIdentity v;
  v.C = speeds_fast(p.ch);
  v.C_tilde = tilde_speeds(p);
  const Triple vs = neg_speeds(p.kdv);
  for (int i = 0; i < 3; ++i) {
    v.v_H0_N[i] = vs[i] * p.H0 + p.N;
    v.delta_coordinates = std::max(v.delta_coordinates, rel(v.C_tilde[i], v.C[i]));
    v.delta_identity = std::max(v.delta_identity, rel(v.v_H0_N[i], v.C_tilde[i]));
  }
  return v;
}

double metric_correspondence(const ReciprocalPair& p, int exponent) {
  const Triple g = metric(p.ch, exponent);
  const Triple gk = kdv_metric(p.kdv, 3 - exponent);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double b = p.kdv.beta[i];
    const double pushed = g[i] / (b * b * b * b);
    const double expected = gk[i] / (p.H0 * p.H0);
    worst = std::max(worst, std::abs(pushed - expected) / std::abs(expected));
  }
  return worst;
}

TildeDensities tilde_densities_kdv(const ReciprocalPair& p) {
  const double nu = p.ch.nu(), H0 = p.H0;
  const auto& Hn = p.H.Hneg;
  return {1.0 - nu / H0, Hn[0] / H0 - nu, Hn[1] / H0 - nu * Hn[0] / H0,
          Hn[2] / H0 - nu * Hn[1] / H0};
}

TildeDensities tilde_densities_ch(const ChCurve& c) {
  const ChDensities d = densities(c);
  const double nu = c.nu();
  // -(sum xi_k x^{k+2}) dlambda with x = eta/(1 - nu eta), dlambda = -deta/eta^2
  const double e0 = d.xi0;
  const double e1 = d.xi1 + 2.0 * nu * d.xi0;
  const double e2 = d.xi2 + 3.0 * nu * d.xi1 + 3.0 * nu * nu * d.xi0;
  // H_{-s}/H0 = -e_{s-1}/s
  const double r1 = -e0, r2 = -e1 / 2.0, r3 = -e2 / 3.0;
  return {d.h_neg1, r1 - nu, r2 - nu * r1, r3 - nu * r2};
}

CasimirRelations casimir_relations(const ReciprocalPair& p) {
  const TildeDensities t = tilde_densities_ch(p.ch);
  const double nu = p.ch.nu(), H0 = p.H0;
  const auto& Hn = p.H.Hneg;
  CasimirRelations r;
  r.h2_relation = t.h2 * H0 - p.H.Hneg3_unit + nu * Hn[1];
  r.h2_relation_3_4 = t.h2 * H0 - Hn[2] + nu * Hn[1];
  r.h1_relation = t.h1 * H0 - Hn[1] + nu * Hn[0];
  r.h0_relation = t.h0 * H0 - Hn[0] + nu * H0;
  r.h_neg1_delta = std::abs(t.h_neg1 - (1.0 - nu / H0));
  return r;
}

std::vector<Table1Row> table1(const ReciprocalPair& p, double tol) {
  const auto& b = p.kdv.beta;
  const double nu = p.ch.nu();
  const double h = kdv_fd_step(p.kdv);
  const auto& Hn = p.H.Hneg;
  const double H0 = p.H0;
  const Triple Ct = tilde_speeds(p);
  const TildeDensities td = tilde_densities_kdv(p);
  const int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};

  const double kdv_ham[4] = {H0 - nu, Hn[0] - nu * H0, Hn[1] - nu * Hn[0], Hn[2] - nu * Hn[1]};
  const char* kdv_formula[4] = {"H0 - nu", "H-1 - nu H0", "H-2 - nu H-1", "H-3 - nu H-2"};
  const char* kdv_shift[4] = {"-nu (Casimir of J1)", "-nu H0 (Casimir of J2)",
                              "-nu H-1 (Casimir of J3)", "-nu H-2 (Casimir of J4)"};
  const double ch_ham[4] = {td.h_neg1, td.h0, td.h1, td.h2};
  const char* ch_formula[4] = {"1 - nu/H0", "H-1/H0 - nu", "H-2/H0 - nu H-1/H0",
                               "H-3/H0 - nu H-2/H0"};
  const char* ch_shift[4] = {"-nu/H0 (image of the Casimir -nu)", "-nu (image of -nu H0)",
                             "-nu H-1/H0", "-nu H-2/H0"};

  std::vector<Table1Row> rows;
  for (int s = 0; s < 4; ++s) {
    Table1Row r;
    r.side = Side::KdV;
    r.slot = s + 1;
    r.metric = kdv_metric(p.kdv, s);
    const Curvature K = christoffel_curvature(kdv_metric_fn(s), b, h);
    for (int q = 0; q < 3; ++q) {
      const int i = pairs[q][0], j = pairs[q][1];
      r.curvature[q] = K.sectional[i][j];
      r.expected[q] = kdv_expected_sectional(p.kdv, s, i, j);
      r.deviation = std::max(r.deviation, std::abs(r.curvature[q] - r.expected[q]) / std::max(1.0, std::abs(r.expected[q])));
    }
    r.offdiag = K.max_offdiag();
    r.deviation = std::max(r.deviation, r.offdiag);
    r.hamiltonian = kdv_ham[s];
    r.hamiltonian_formula = kdv_formula[s];
    r.casimir_shift = kdv_shift[s];
    r.ok = r.deviation <= tol;
    rows.push_back(r);
  }
  for (int s = 0; s < 4; ++s) {
    Table1Row r;
    r.side = Side::CH;
    r.slot = s + 1;
    const FerapontovResult F = ferapontov_transform(kdv_metric_fn(s), H0_of_beta, b, h);
    r.metric = F.metric;
    r.affinors = F.w;
    r.ferapontov_residual = F.residual;
    for (int q = 0; q < 3; ++q) {
      const int i = pairs[q][0], j = pairs[q][1];
      r.curvature[q] = F.transformed.sectional[i][j];
      const double ex[4] = {-2.0 * nu - Ct[i] - Ct[j], -1.0, 0.0, 0.0};
      r.expected[q] = ex[s];
      r.deviation = std::max(r.deviation, std::abs(r.curvature[q] - r.expected[q]) / std::max(1.0, std::abs(r.expected[q])));
    }
    r.offdiag = F.transformed.max_offdiag();
    r.deviation = std::max(r.deviation, r.offdiag);
    r.hamiltonian = ch_ham[s];
    r.hamiltonian_formula = ch_formula[s];
    r.casimir_shift = ch_shift[s];
    r.ok = r.deviation <= tol && F.residual <= 1e-3;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace whitham
