#include "whitham/kdv_modulation.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <boost/math/special_functions/ellint_3.hpp>

#include <cmath>
#include <numbers>

#include "whitham/ch_modulation.hpp"
#include "whitham/errors.hpp"
#include "whitham/special_functions.hpp"

namespace whitham {

namespace {

double prod_except(const Triple& b, int i) {
  double p = 1.0;
  for (int j = 0; j < 3; ++j)
    if (j != i) p *= b[i] - b[j];
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Gauss-Chebyshev on [lo, hi] with weight 1/sqrt((hi-x)(x-lo)) absorbed;
// f receives the node.  Orders doubled until 1e-13 relative agreement.
double chebyshev_sum(double lo, double hi, const std::function<double(double)>& f, int n) {
  const double m = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += f(m + h * std::cos(std::numbers::pi * (j + 0.5) / n));
  return std::numbers::pi / n * s;
}

double chebyshev(double lo, double hi, const std::function<double(double)>& f, double scale) {
  auto sum = [&](int n) { return chebyshev_sum(lo, hi, f, n); };
  double prev = sum(16), err = 0.0;
  for (int n = 32; n <= (1 << 16); n *= 2) {
    const double cur = sum(n);
    err = std::abs(cur - prev);
    if (err <= 1e-12 * std::max(std::abs(cur), scale)) return cur;
    prev = cur;
  }
  throw NumericalError("Gauss-Chebyshev quadrature did not converge", err);
}

}  // namespace

KdvCurve kdv_curve(const Triple& b) {
  for (double v : b)
    if (!std::isfinite(v)) throw DomainError("kdv_curve: non-finite beta");
  if (!(b[2] > 0.0)) throw DomainError("kdv_curve: need beta3 > 0");
  if (!(b[0] > b[1] && b[1] > b[2])) throw DomainError("kdv_curve: need beta1 > beta2 > beta3");
  KdvCurve k;
  k.beta = b;
  k.s2 = (b[0] - b[1]) / (b[0] - b[2]);
  k.rho2 = (b[0] - b[1]) / b[0];
  k.K = elliptic_K(k.s2);
  k.E = elliptic_E(k.s2);
  k.Lambda = elliptic_Pi_complete(k.rho2, k.s2);
  k.J0 = 4.0 * k.K / std::sqrt(b[0] - b[2]);
  k.alpha1 = -b[2] - (b[0] - b[2]) * k.E / k.K;
  k.alpha0 = -k.Lambda / (b[0] * k.K);
  return k;
}

double kdv_cycle_integral(const Triple& b, const std::function<double(double)>& p) {
  auto f = [&](double eta) { return 2.0 * p(eta) / std::sqrt(eta - b[2]); };
  const double scale = chebyshev_sum(b[1], b[0], [&](double e) { return std::abs(f(e)); }, 64);
  return chebyshev(b[1], b[0], f, scale);
}

KdvCycleCheck kdv_cycle_check(const KdvCurve& k) {
  const auto& b = k.beta;
  KdvCycleCheck c;
  const double one = kdv_cycle_integral(b, [](double) { return 1.0; });
  const double eta = kdv_cycle_integral(b, [](double e) { return e; });
  const double inv = kdv_cycle_integral(b, [](double e) { return 1.0 / e; });
  auto size = [&](const std::function<double(double)>& p) {
    return chebyshev_sum(b[1], b[0], [&](double e) { return 2.0 * std::abs(p(e)) / std::sqrt(e - b[2]); }, 256);
  };
  auto dp = [&](double e) { return e + k.alpha1; };
  auto l0 = [&](double e) { return 1.0 / e + k.alpha0; };
  c.dp_period = kdv_cycle_integral(b, dp) / size(dp);
  c.lambda0_period = kdv_cycle_integral(b, l0) / size(l0);
  c.J0_delta = std::abs(one - k.J0) / k.J0;
  c.alpha1_delta = rel(-eta / one, k.alpha1);
  c.alpha0_delta = rel(-inv / one, k.alpha0);
  return c;
}

Triple J0_gradient(const KdvCurve& k) {
  Triple g;
  for (int i = 0; i < 3; ++i)
    g[i] = -0.5 * k.J0 * (k.beta[i] + k.alpha1) / prod_except(k.beta, i);
  return g;
}

double kdv_wavenumber(const KdvCurve& k) { return 2.0 * std::numbers::pi / k.J0; }

double kdv_frequency(const KdvCurve& k) {
  return 4.0 * std::numbers::pi / (k.J0 * std::sqrt(k.beta[0] * k.beta[1] * k.beta[2]));
}

Triple neg_speeds(const KdvCurve& k) {
  const auto& b = k.beta;
  const double pre = 2.0 / std::sqrt(b[0] * b[1] * b[2]);
  Triple v;
  for (int i = 0; i < 3; ++i)
    v[i] = pre * (1.0 - prod_except(b, i) / (b[i] * (b[i] + k.alpha1)));
  return v;
}

Triple neg_speeds_fd(const KdvCurve& k) {
  const auto& b = k.beta;
  const double gap = std::min({b[0] - b[1], b[1] - b[2], b[2]});
  auto ratio = [&](int i, double h) {
    Triple bp = b, bm = b;
    bp[i] += h;
    bm[i] -= h;
    const KdvCurve kp = kdv_curve(bp), km = kdv_curve(bm);
    return (kdv_frequency(kp) - kdv_frequency(km)) / (kdv_wavenumber(kp) - kdv_wavenumber(km));
  };
  const double h = 1e-3 * gap;
  Triple v;
  for (int i = 0; i < 3; ++i) v[i] = (4.0 * ratio(i, 0.5 * h) - ratio(i, h)) / 3.0;
  return v;
}

Triple pos_speeds(const KdvCurve& k) {
  const auto& b = k.beta;
  Triple w;
  for (int i = 0; i < 3; ++i)
    w[i] = b[0] + b[1] + b[2] + 2.0 * prod_except(b, i) / (b[i] + k.alpha1);
  return w;
}

double kdv_abelian_integral(const KdvCurve& k, double eta) {
  const auto& b = k.beta;
  if (!(eta < b[2])) throw DomainError("kdv_abelian_integral: need eta < beta3");
  // x = b3 - t^2 removes the endpoint singularity
  auto f = [&](double t) {
    const double x = b[2] - t * t;
    return 2.0 * (x + k.alpha1) / std::sqrt((b[0] - x) * (b[1] - x));
  };
  const double T = std::sqrt(b[2] - eta);
  return 2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, T, 8, 1e-14);
}

namespace {

double H0_closed(const KdvCurve& k) {
  const auto& b = k.beta;
  return -std::sqrt(b[0] * b[1] * b[2]) * k.alpha0;
}

// H0 as the travelling-wave average over the matched CH curve
double H0_travelling_wave(const KdvCurve& k, double nu) {
  Triple u;
  for (int i = 0; i < 3; ++i) u[i] = 1.0 / k.beta[i] - nu;
  const double c = u[0] + u[1] + u[2] + 2.0 * nu;
  const double e1 = -u[0] + u[1] + u[2], e2 = u[0] - u[1] + u[2], e3 = u[0] + u[1] - u[2];
  const double C = 2.0 / std::sqrt(k.beta[0] * k.beta[1] * k.beta[2]);
  const double num = chebyshev(e2, e1, [&](double x) { return std::sqrt((c - x) / (x - e3)); }, 0);
  const double den =
      chebyshev(e2, e1, [&](double x) { return 1.0 / std::sqrt((c - x) * (x - e3)); }, 0);
  return num / (C * den);
}

}  // namespace

KdvHamiltonians kdv_hamiltonians(const KdvCurve& k, double nu) {
  const auto& b = k.beta;
  KdvHamiltonians H;
  H.H0 = H0_closed(k);
  // Taylor coefficients of (x + alpha1) / sqrt((b1-x)(b2-x)(b3-x)) at x = 0
  double s[3] = {1.0, 0.0, 0.0};
  for (double v : b) {
    const double r = 1.0 / v;
    const double f[3] = {1.0, 0.5 * r, 0.375 * r * r};
    double t[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < 3; ++a)
      for (int c = 0; a + c < 3; ++c) t[a + c] += s[a] * f[c];
    for (int a = 0; a < 3; ++a) s[a] = t[a];
  }
  const double sq = std::sqrt(b[0] * b[1] * b[2]);
  const double c0 = k.alpha1 * s[0] / sq;
  const double c1 = (k.alpha1 * s[1] + s[0]) / sq;
  const double c2 = (k.alpha1 * s[2] + s[1]) / sq;
  // G(eta) = H0 + (1/2) int_0^eta (c0 + c1 x + c2 x^2) dx
  H.Hneg[0] = 0.5 * c0;
  H.Hneg[1] = 0.25 * c1;
  H.Hneg3_unit = c2 / 6.0;
  H.Hneg[2] = H.Hneg3_unit / 0.75;

  H.N = 1.0 / b[0] + 1.0 / b[1] + 1.0 / b[2] - nu + 2.0 * k.alpha0;
  {
    const double gap = std::min({b[0] - b[1], b[1] - b[2], b[2]});
    const double h = 1e-3 * gap;
    const Triple g = kdv_residue_metric(k);
    double sum = 0.0;
    for (int i = 0; i < 3; ++i) {
      auto d = [&](double hh) {
        Triple bp = b, bm = b;
        bp[i] += hh;
        bm[i] -= hh;
        return (kdv_H0(bp) - kdv_H0(bm)) / (2.0 * hh);
      };
      const double dH = (4.0 * d(0.5 * h) - d(h)) / 3.0;
      sum += dH * dH / g[i];
    }
    H.N_gradient = 4.0 * sum - nu;
  }
  H.H0_wave = H0_travelling_wave(k, nu);
  H.H0_abelian = -0.25 * kdv_abelian_integral(k, 0.0);

  // quadrature values of G against the series, and a least-squares refit
  const double etas[4] = {1e-2, 5e-3, 2.5e-3, 1e-3};
  Eigen::Matrix4d A;
  Eigen::Vector4d y;
  for (int r = 0; r < 4; ++r) {
    const double e = etas[r] * std::min(1.0, b[2]);
    const double G = -0.25 * kdv_abelian_integral(k, e);
    const double series = H.H0 + e * H.Hneg[0] + e * e * H.Hneg[1] + 0.75 * e * e * e * H.Hneg[2];
    H.fit_residual = std::max(H.fit_residual, std::abs(G - series));
    A.row(r) << 1.0, e, e * e, 0.75 * e * e * e;
    y(r) = G;
  }
  const Eigen::Vector4d fit = A.colPivHouseholderQr().solve(y);
  const double coef[4] = {H.H0, H.Hneg[0], H.Hneg[1], H.Hneg[2]};
  for (int r = 0; r < 4; ++r)
    H.fit_condition = std::max(H.fit_condition, std::abs(fit(r) - coef[r]) / std::abs(H.H0));

  if (!(rel(H.N_gradient, H.N) <= 1e-7)) throw ConsistencyError("N routes", rel(H.N_gradient, H.N));
  const double d0 = std::max(rel(H.H0_wave, H.H0), rel(H.H0_abelian, H.H0));
  if (!(d0 <= 1e-8)) throw ConsistencyError("H0 routes", d0);
  if (!(H.fit_residual <= 1e-7)) throw ConsistencyError("expansion fit", H.fit_residual);
  return H;
}

Triple kdv_residue_metric(const KdvCurve& k) {
  Triple g;
  for (int i = 0; i < 3; ++i) {
    const double a = k.beta[i] + k.alpha1;
    g[i] = a * a / prod_except(k.beta, i);
  }
  return g;
}

Triple kdv_metric(const KdvCurve& k, int exponent) {
  if (exponent < 0 || exponent > 3) throw DomainError("metric exponent must be in {0,1,2,3}");
  Triple g = kdv_residue_metric(k);
  for (int i = 0; i < 3; ++i) {
    const double b = k.beta[i];
    const double div[4] = {8.0, 4.0 * b, 2.0 * b * b, b * b * b};
    g[i] /= div[exponent];
  }
  return g;
}

namespace {

using LD = long double;

// b^i + alpha1 cancels near the zeros of g^KdV_ii; extended precision keeps
// the metric accurate enough for second differences.
void check_beta(const Triple& b) {
  if (!(b[2] > 0.0 && b[0] > b[1] && b[1] > b[2])) throw DomainError("need beta1 > beta2 > beta3 > 0");
}

}  // namespace

MetricFn kdv_metric_fn(int exponent) {
  if (exponent < 0 || exponent > 3) throw DomainError("kdv metric exponent must be 0..3");
  return [exponent](const Triple& bd) {
    check_beta(bd);
    const LD b[3] = {bd[0], bd[1], bd[2]};
    const LD s = std::sqrt((b[0] - b[1]) / (b[0] - b[2]));
    const LD a1 = -b[2] - (b[0] - b[2]) * boost::math::ellint_2(s) / boost::math::ellint_1(s);
    Triple g;
    for (int i = 0; i < 3; ++i) {
      LD p = 1;
      for (int j = 0; j < 3; ++j)
        if (j != i) p *= b[i] - b[j];
      const LD a = b[i] + a1;
      const LD div[4] = {8, 4 * b[i], 2 * b[i] * b[i], b[i] * b[i] * b[i]};
      g[i] = static_cast<double>(a * a / p / div[exponent]);
    }
    return g;
  };
}

double kdv_H0(const Triple& bd) {
  check_beta(bd);
  const LD b[3] = {bd[0], bd[1], bd[2]};
  const LD s = std::sqrt((b[0] - b[1]) / (b[0] - b[2])), rho2 = (b[0] - b[1]) / b[0];
  const LD alpha0 = -boost::math::ellint_3(s, rho2) / (b[0] * boost::math::ellint_1(s));
  return static_cast<double>(-std::sqrt(b[0] * b[1] * b[2]) * alpha0);
}

double kdv_expected_sectional(const KdvCurve& k, int exponent, int i, int j) {
  if (exponent < 2) return 0.0;
  if (exponent == 2) return -0.5;
  const Triple w = pos_speeds(k);
  return -(w[i] + w[j]) / 8.0;
}

double kdv_fd_step(const KdvCurve& k) {
  const auto& b = k.beta;
  return 5e-3 * std::min({b[0] - b[1], b[1] - b[2], b[2]});
}

double kdv_curvature_deviation(const KdvCurve& k, int exponent) {
  const auto& b = k.beta;
  const double h = kdv_fd_step(k);
  const Curvature K = christoffel_curvature(kdv_metric_fn(exponent), b, h);
  double dev = K.max_offdiag();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j)
        dev = std::max(dev, std::abs(K.sectional[i][j] - kdv_expected_sectional(k, exponent, i, j)));
  return dev;
}

}  // namespace whitham
