#pragma once

#include <vector>

#include "whitham/curve.hpp"
#include "whitham/diagonal_metric.hpp"

namespace whitham {

using CMatrix = std::array<std::array<std::complex<double>, 3>, 3>;

// res_{lambda=u^i} Omega_nu^2 / dlambda = P_nu(u^i)^2 / (S_nu D_i)
double residue_omega_nu_sq(const ChCurve& c, const CurveConstants& k, int i);

// g_ii = -4 (u^i+nu) res_{u^i}(Omega_nu^2) / res_{-nu}(sigma1^2) divided by
// {1, 2(u^i+nu), 4(u^i+nu)^2, 8(u^i+nu)^3}[exponent].  The residue at -nu is
// taken as P1(-nu)^2/prod(u^j+nu) > 0; the metric then has signature (+,-,+).
Triple metric(const ChCurve& c, int exponent);
MetricFn metric_fn(double nu, int exponent);

// Branch of sqrt(g_ii) analytic in u (principal root of D_i).
CTriple sqrt_metric(const ChCurve& c, int exponent);

// r_ij = d_i sqrt(g_jj) / sqrt(g_ii) in closed form, and by central differences.
CMatrix rotation_coefficients(const ChCurve& c, int exponent);
CMatrix rotation_coefficients_fd(const ChCurve& c, int exponent);

struct CurvatureReport {
  CMatrix r{};
  Curvature R;               // real parts
  double imag_residual = 0;  // largest imaginary part met in the assembly
  double egorov_defect = 0;  // max |r_ij - r_ji|
};

// Curvature from the rotation coefficients and their central differences.
CurvatureReport curvature(const ChCurve& c, int exponent);
// Expected R^{ij}_{ij}: {0, 0, -1, -2nu - C^i - C^j}.
double expected_sectional(const ChCurve& c, int exponent, int i, int j);
// Largest deviation from the expected table (sectional and off-diagonal).
double curvature_deviation(const ChCurve& c, const CurvatureReport& rep, int exponent);
// Throws ConsistencyError naming the offending component if above tol.
void verify_curvature(const ChCurve& c, int exponent, double tol = 1e-4);

// max over i != j of |d_j C^i/(C^j - C^i) - d_j log sqrt(g_ii)|, pairs with
// |C^i - C^j| < 1e-6 skipped.
double tsarev_check(const ChCurve& c, int exponent = 0);

struct PencilResult {
  double lambda = 0;
  bool degenerate = false;
  double contravariant_residual = 0;  // g^ii (1 + 2 lambda (u^i+nu))
  double covariant_residual = 0;      // g_ii (1 + lambda/(u^i+nu))
};
std::vector<PencilResult> pencil_check(const ChCurve& c, const std::vector<double>& lambdas);

// Exponent-3 curvature compared with +(eta^i+eta^j) and -(eta^i+eta^j), eta = C + nu.
struct AffinorReport {
  double plus_residual = 0, minus_residual = 0;
  int sign = 0;  // +1 or -1, whichever fits
};
AffinorReport affinor_sign(const ChCurve& c);

}  // namespace whitham
