#pragma once

#include "whitham/curve.hpp"
#include "whitham/diagonal_metric.hpp"

namespace whitham {

// Odd curve w^2 = (eta-b1)(eta-b2)(eta-b3), indices aligned with u^i under
// b^i = 1/(u^i+nu), hence b1 > b2 > b3 > 0.  The a-cycle encircles (b2, b1).
struct KdvCurve {
  Triple beta{};
  double alpha0 = 0;  // fixes  oint (1 + alpha0 eta) deta/(eta w) = 0
  double alpha1 = 0;  // fixes  oint (eta + alpha1) deta/w = 0
  double J0 = 0;      // oint deta/|w| > 0
  double s2 = 0, rho2 = 0, K = 0, E = 0, Lambda = 0;
};

// Closed forms; throws DomainError unless b1 > b2 > b3 > 0.
KdvCurve kdv_curve(const Triple& beta);

// 2 int_{b2}^{b1} p(eta) deta / sqrt|w^2| by Gauss-Chebyshev quadrature.
double kdv_cycle_integral(const Triple& beta, const std::function<double(double)>& p);

struct KdvCycleCheck {
  double dp_period = 0;       // oint dp, normalized by oint |dp|
  double lambda0_period = 0;  // oint Lambda_0, normalized likewise
  double J0_delta = 0, alpha0_delta = 0, alpha1_delta = 0;  // closed form vs quadrature
};
KdvCycleCheck kdv_cycle_check(const KdvCurve& k);

// d J0 / d b^i = -(1/2) J0 (b^i + alpha1) / prod_{j!=i}(b^i - b^j)
Triple J0_gradient(const KdvCurve& k);

double kdv_wavenumber(const KdvCurve& k);  // 2 pi / J0
double kdv_frequency(const KdvCurve& k);   // 4 pi / (J0 sqrt(b1 b2 b3))

Triple neg_speeds(const KdvCurve& k);
Triple neg_speeds_fd(const KdvCurve& k);
Triple pos_speeds(const KdvCurve& k);

struct KdvHamiltonians {
  double H0 = 0;             // -sqrt(b1 b2 b3) alpha0
  Triple Hneg{};             // H_{-1}, H_{-2}, H_{-3} with the 3/4 weight on eta^3
  double Hneg3_unit = 0;     // H_{-3} if the eta^3 weight were 1
  double N = 0;              // sum 1/b - nu + 2 alpha0
  double N_gradient = 0;     // 4 sum (d_i H0)^2 / g^KdV_ii - nu
  double H0_wave = 0;        // travelling-wave average of the matched CH curve
  double H0_abelian = 0;     // -F(0)/4 with F the Abelian integral by quadrature
  double fit_residual = 0;   // max |G(eta) - series| at the fit points
  double fit_condition = 0;  // max |coefficient(fit) - coefficient(series)| / |H0|
};

// Series coefficients of G(eta) = -(1/4) * 2 int_eta^{b3} dp:
//   G = H0 + eta H_{-1} + eta^2 H_{-2} + (3/4) eta^3 H_{-3} + ...
// Throws ConsistencyError if the N routes differ by more than 1e-7, the H0
// routes by more than 1e-8 or the fit residual exceeds 1e-7.
KdvHamiltonians kdv_hamiltonians(const KdvCurve& k, double nu);

// Abelian integral F(eta) = 2 int_eta^{b3} (x + alpha1) dx / sqrt((b1-x)(b2-x)(b3-x)), eta < b3.
double kdv_abelian_integral(const KdvCurve& k, double eta);

// res_{eta=b^i} dp^2/deta = (b^i + alpha1)^2 / prod_{j!=i}(b^i - b^j)
Triple kdv_residue_metric(const KdvCurve& k);
// Residue metric divided by {8, 4b, 2b^2, b^3}[exponent].
Triple kdv_metric(const KdvCurve& k, int exponent);
// Metric as a function of beta, evaluated in extended precision.
MetricFn kdv_metric_fn(int exponent);
// H0 = -sqrt(b1 b2 b3) alpha0 in extended precision.
double kdv_H0(const Triple& beta);
// Expected R^{ij}_{ij}: {0, 0, -1/2, -(w+^i + w+^j)/8}.
double kdv_expected_sectional(const KdvCurve& k, int exponent, int i, int j);
// Central-difference step for curvature work in beta: 5e-3 of the smallest
// root gap (or beta3).
double kdv_fd_step(const KdvCurve& k);
// Largest deviation of the Christoffel curvature from the expected table.
double kdv_curvature_deviation(const KdvCurve& k, int exponent);

}  // namespace whitham
