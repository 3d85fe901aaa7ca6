#pragma once

#include <array>
#include <complex>
#include <functional>

namespace whitham {

using Triple = std::array<double, 3>;
using CTriple = std::array<std::complex<double>, 3>;

inline constexpr double kCoalescenceTol = 1e-9;

// Elliptic curve R(lambda) = (lambda+nu)(lambda-u1)(lambda-u2)(lambda-u3).
class ChCurve {
 public:
  ChCurve(double nu, Triple u, double eps_c = kCoalescenceTol);

  double nu() const { return nu_; }
  const Triple& u() const { return u_; }
  double u(int i) const { return u_[i]; }
  double sum_u() const { return u_[0] + u_[1] + u_[2]; }

  double R(double lambda) const;
  // R'(u^i) = (u^i+nu) prod_{j!=i}(u^i-u^j)
  double D(int i) const;
  // (-nu-u1)(-nu-u2)(-nu-u3), negative on valid curves
  double S_nu() const;
  // smallest of u1+nu, u2-u1, u3-u2
  double min_gap() const;

 private:
  double nu_;
  Triple u_;
};

// Cycle integral I_k = 2 int_{u1}^{u2} lambda^k / sqrt(R) by Gauss-Chebyshev
// quadrature; throws NumericalError if orders up to 2^14 do not settle.
double moment(const ChCurve& c, int k);

struct EllipticData {
  double s2 = 0, rho2 = 0, K = 0, E = 0, Lambda = 0;
};
EllipticData elliptic_data(const ChCurve& c);

struct CurveConstants {
  double I0 = 0, I1 = 0, I2 = 0;  // closed-form I0; I1, I2 from gamma's
  double gamma1 = 0, gamma2 = 0;
  double residue_sigma1_sq = 0;  // P1(-nu)^2 / prod(u^i+nu), positive
  EllipticData ell;
  // moment-route cross-check; moments_checked is false when the quadrature
  // could not resolve a nearly coalescent curve
  bool moments_checked = false;
  double gamma_moment_delta = 0;
};

// Elliptic closed forms only.
CurveConstants closed_constants(const ChCurve& c);
// Closed forms verified against the moment definitions (ConsistencyError
// beyond 1e-6; the 1e-9 agreement is asserted by the tests).
CurveConstants constants(const ChCurve& c);

// Numerator polynomials of the normalized differentials.
double P1(const CurveConstants& k, double lambda);
double P2(const ChCurve& c, const CurveConstants& k, double lambda);
double Pnu(const ChCurve& c, const CurveConstants& k, double lambda);
// numerator of Omega_{u^i}: D_i / (2(lambda-u^i)) + P2(u^i)
double Pbranch(const ChCurve& c, const CurveConstants& k, int i, double lambda);

enum class DifferentialKind { Sigma1, Sigma2, OmegaNu, Phi };

// Density P(lambda)/sqrt(R(lambda)) (times the normalization of the kind).
// sqrt(R) is taken positive where R > 0 and i*sqrt(|R|) where R < 0.
std::complex<double> eval_differential(const ChCurve& c, const CurveConstants& k,
                                       DifferentialKind kind, double lambda);
// Density of Omega_{u^i}.
std::complex<double> eval_branch_differential(const ChCurve& c, const CurveConstants& k,
                                              int i, double lambda);

// Local-coordinate value at lambda = u^i, t^2 = lambda - u^i.
std::complex<double> eval_at_branch(const ChCurve& c, const CurveConstants& k,
                                    DifferentialKind kind, int i);
// Local-coordinate value at lambda = -nu, t^2 = lambda + nu (not for OmegaNu).
std::complex<double> eval_at_minus_nu(const ChCurve& c, const CurveConstants& k,
                                      DifferentialKind kind);
// Omega_{u^i}(u^j), i != j.
std::complex<double> eval_branch_at_branch(const ChCurve& c, const CurveConstants& k, int i,
                                           int j);

// a-cycle integral 2 int_{u1}^{u2} p(lambda)/sqrt(R) dlambda of a numerator p,
// by the same Gauss-Chebyshev rule as moment().
double cycle_integral(const ChCurve& c, const std::function<double(double)>& p);

std::complex<double> csqrt(double x);

}  // namespace whitham
