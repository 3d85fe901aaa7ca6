#include "whitham/curve.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "whitham/errors.hpp"
#include "whitham/special_functions.hpp"

namespace whitham {

ChCurve::ChCurve(double nu, Triple u, double eps_c) : nu_(nu), u_(u) {
  for (double v : u)
    if (!std::isfinite(v)) throw InvalidCurve("curve: non-finite Riemann invariant");
  if (!std::isfinite(nu)) throw InvalidCurve("curve: non-finite nu");
  if (!(u[0] + nu > eps_c)) throw InvalidCurve("curve: need -nu < u1 (u1+nu > eps_c)");
  if (!(u[1] - u[0] > eps_c)) throw InvalidCurve("curve: need u1 < u2 (gap > eps_c)");
  if (!(u[2] - u[1] > eps_c)) throw InvalidCurve("curve: need u2 < u3 (gap > eps_c)");
}

double ChCurve::R(double l) const {
  return (l + nu_) * (l - u_[0]) * (l - u_[1]) * (l - u_[2]);
}

double ChCurve::D(int i) const {
  double d = u_[i] + nu_;
  for (int j = 0; j < 3; ++j)
    if (j != i) d *= u_[i] - u_[j];
  return d;
}

double ChCurve::S_nu() const {
  return -(nu_ + u_[0]) * (nu_ + u_[1]) * (nu_ + u_[2]);
}

double ChCurve::min_gap() const {
  return std::min({u_[0] + nu_, u_[1] - u_[0], u_[2] - u_[1]});
}

std::complex<double> csqrt(double x) { return std::sqrt(std::complex<double>(x, 0.0)); }

namespace {

// 2 * (pi/n) * sum g(lambda_j) with lambda = m + h cos(theta_j); the weight
// 1/sqrt((lambda-u1)(u2-lambda)) is absorbed by the substitution.
double chebyshev_sum(const ChCurve& c, const std::function<double(double)>& p, int n) {
  const double m = 0.5 * (c.u(0) + c.u(1));
  const double h = 0.5 * (c.u(1) - c.u(0));
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    const double th = std::numbers::pi * (j + 0.5) / n;
    const double l = m + h * std::cos(th);
    s += p(l) / std::sqrt((l + c.nu()) * (c.u(2) - l));
  }
  return 2.0 * std::numbers::pi / n * s;
}

double settle(const ChCurve& c, const std::function<double(double)>& p, double scale_hint) {
  double prev = chebyshev_sum(c, p, 16);
  double err = 0.0;
  for (int n = 32; n <= (1 << 14); n *= 2) {
    const double cur = chebyshev_sum(c, p, n);
    err = std::abs(cur - prev);
    if (err <= 1e-12 * std::max(std::abs(cur), scale_hint)) return cur;
    prev = cur;
  }
  throw NumericalError("cycle quadrature did not converge", err);
}

}  // namespace

double cycle_integral(const ChCurve& c, const std::function<double(double)>& p) {
  // integrals that vanish by normalization are judged against int |p|/sqrt(R)
  const double scale = chebyshev_sum(c, [&p](double l) { return std::abs(p(l)); }, 64);
  return settle(c, p, scale);
}

double moment(const ChCurve& c, int k) {
  if (k < 0 || k > 4) throw DomainError("moment: need 0 <= k <= 4");
  return settle(c, [k](double l) { return std::pow(l, k); }, 0.0);
}

EllipticData elliptic_data(const ChCurve& c) {
  const double nu = c.nu();
  const auto& u = c.u();
  EllipticData e;
  e.s2 = (u[1] - u[0]) * (u[2] + nu) / ((u[2] - u[0]) * (u[1] + nu));
  e.rho2 = (u[1] - u[0]) / (u[1] + nu);
  e.K = elliptic_K(e.s2);
  e.E = elliptic_E(e.s2);
  e.Lambda = elliptic_Pi_complete(e.rho2, e.s2);
  return e;
}

CurveConstants closed_constants(const ChCurve& c) {
  const double nu = c.nu();
  const auto& u = c.u();
  CurveConstants k;
  k.ell = elliptic_data(c);
  const auto& e = k.ell;
  k.gamma1 = nu - (u[0] + nu) * e.Lambda / e.K;
  k.gamma2 = 0.5 * (u[0] * u[1] - nu * u[2] + (u[2] - u[0]) * (u[1] + nu) * e.E / e.K);
  k.I0 = 4.0 * e.K / std::sqrt((u[1] + nu) * (u[2] - u[0]));
  k.I1 = -k.gamma1 * k.I0;
  k.I2 = k.I0 * (-0.5 * (c.sum_u() - nu) * k.gamma1 - k.gamma2);
  const double p = P1(k, -nu);
  k.residue_sigma1_sq = p * p / -c.S_nu();
  return k;
}

CurveConstants constants(const ChCurve& c) {
  CurveConstants k = closed_constants(c);
  double I0, I1, I2;
  try {
    I0 = moment(c, 0);
    I1 = moment(c, 1);
    I2 = moment(c, 2);
  } catch (const NumericalError&) {
    return k;
  }
  const double g1 = -I1 / I0;
  const double g2 = -I2 / I0 + 0.5 * (c.sum_u() - c.nu()) * I1 / I0;
  const double scale = 1.0 + std::abs(c.u(2)) + std::abs(c.nu());
  k.gamma_moment_delta = std::max(std::abs(g1 - k.gamma1) / scale,
                                  std::abs(g2 - k.gamma2) / (scale * scale));
  k.moments_checked = true;
  if (!(k.gamma_moment_delta <= 1e-6))
    throw ConsistencyError("gamma closed form vs moments", k.gamma_moment_delta);
  return k;
}

double P1(const CurveConstants& k, double l) { return l + k.gamma1; }

double P2(const ChCurve& c, const CurveConstants& k, double l) {
  return l * l - 0.5 * (c.sum_u() - c.nu()) * l + k.gamma2;
}

double Pnu(const ChCurve& c, const CurveConstants& k, double l) {
  return c.S_nu() / (2.0 * (l + c.nu())) + P2(c, k, -c.nu());
}

double Pbranch(const ChCurve& c, const CurveConstants& k, int i, double l) {
  return c.D(i) / (2.0 * (l - c.u(i))) + P2(c, k, c.u(i));
}

namespace {

double numerator(const ChCurve& c, const CurveConstants& k, DifferentialKind kind, double l) {
  switch (kind) {
    case DifferentialKind::Sigma1: return P1(k, l);
    case DifferentialKind::Sigma2: return P2(c, k, l);
    case DifferentialKind::OmegaNu: return Pnu(c, k, l);
    case DifferentialKind::Phi: return 1.0 / k.I0;
  }
  return 0.0;
}

// Omega_nu carries 1/sqrt(S_nu) so that it behaves as dt/t^2 at -nu.
std::complex<double> normalization(const ChCurve& c, DifferentialKind kind) {
  if (kind == DifferentialKind::OmegaNu) return 1.0 / csqrt(c.S_nu());
  return 1.0;
}

}  // namespace

std::complex<double> eval_differential(const ChCurve& c, const CurveConstants& k,
                                       DifferentialKind kind, double l) {
  const double r = c.R(l);
  if (r == 0.0) throw DomainError("eval_differential: lambda at a branch point");
  if (kind == DifferentialKind::OmegaNu && l == -c.nu())
    throw DomainError("eval_differential: pole of Omega_nu");
  return numerator(c, k, kind, l) * normalization(c, kind) / csqrt(r);
}

std::complex<double> eval_branch_differential(const ChCurve& c, const CurveConstants& k, int i,
                                              double l) {
  const double r = c.R(l);
  if (r == 0.0) throw DomainError("eval_branch_differential: lambda at a branch point");
  return Pbranch(c, k, i, l) / (csqrt(c.D(i)) * csqrt(r));
}

std::complex<double> eval_at_branch(const ChCurve& c, const CurveConstants& k,
                                    DifferentialKind kind, int i) {
  if (i < 0 || i > 2) throw DomainError("eval_at_branch: index out of range");
  return 2.0 * numerator(c, k, kind, c.u(i)) * normalization(c, kind) / csqrt(c.D(i));
}

std::complex<double> eval_at_minus_nu(const ChCurve& c, const CurveConstants& k,
                                      DifferentialKind kind) {
  if (kind == DifferentialKind::OmegaNu)
    throw DomainError("eval_at_minus_nu: Omega_nu has its pole there");
  return 2.0 * numerator(c, k, kind, -c.nu()) / csqrt(c.S_nu());
}

std::complex<double> eval_branch_at_branch(const ChCurve& c, const CurveConstants& k, int i,
                                           int j) {
  if (i == j) throw DomainError("eval_branch_at_branch: need i != j");
  return 2.0 * Pbranch(c, k, i, c.u(j)) / (csqrt(c.D(i)) * csqrt(c.D(j)));
}

}  // namespace whitham
