#include "whitham/ch_modulation.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "whitham/errors.hpp"

namespace whitham {

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double k_closed(const ChCurve& c, const CurveConstants& k) {
  return -2.0 * std::numbers::pi / (k.I0 * P1(k, -c.nu()));
}

}  // namespace

WavenumberPaths wavenumber_paths(const ChCurve& c) {
  const CurveConstants k = closed_constants(c);
  WavenumberPaths w;
  // phi(-nu)/sigma1(-nu) as complex numbers: the sqrt(S_nu) factors cancel
  const auto phi = eval_at_minus_nu(c, k, DifferentialKind::Phi);
  const auto s1 = eval_at_minus_nu(c, k, DifferentialKind::Sigma1);
  w.from_branch = (-2.0 * std::numbers::pi * phi / s1).real();
  try {
    const double I0 = moment(c, 0), I1 = moment(c, 1);
    w.from_moments = 2.0 * std::numbers::pi / (I1 + c.nu() * I0);
    w.delta = std::abs(w.from_moments - w.from_branch) / w.from_branch;
  } catch (const NumericalError&) {
    w.from_moments = std::numeric_limits<double>::quiet_NaN();
  }
  return w;
}

double wavenumber(const ChCurve& c) {
  const auto w = wavenumber_paths(c);
  if (!(w.delta <= 1e-7)) throw ConsistencyError("wavenumber paths", w.delta);
  return w.from_branch;
}

double frequency(const ChCurve& c) { return (2.0 * c.nu() + c.sum_u()) * wavenumber(c); }

Triple speeds_elliptic(const ChCurve& c, const CurveConstants& k) {
  const double nu = c.nu();
  const auto& u = c.u();
  const auto& e = k.ell;
  const double S = c.sum_u() + 2.0 * nu;
  Triple C;
  C[0] = S + 2.0 * (u[0] + nu) * (u[0] - u[1]) * e.Lambda / ((u[1] + nu) * (e.K - e.E));
  C[1] = S + 2.0 * (u[1] - u[0]) * e.Lambda /
                 (e.K - (u[1] + nu) * (u[2] - u[0]) / ((u[0] + nu) * (u[2] - u[1])) * e.E);
  C[2] = S + 2.0 * (u[0] + nu) * (u[2] - u[1]) * e.Lambda / ((u[1] + nu) * e.E);
  return C;
}

Triple speeds_differential(const ChCurve& c, const CurveConstants& k) {
  const double S = c.sum_u() + 2.0 * c.nu();
  const double p = P1(k, -c.nu());
  Triple C;
  for (int i = 0; i < 3; ++i) {
    double prod = 1.0;
    for (int j = 0; j < 3; ++j)
      if (j != i) prod *= c.u(i) - c.u(j);
    C[i] = S - p / Pnu(c, k, c.u(i)) * prod;
  }
  return C;
}

Triple speeds_finite_difference(const ChCurve& c) {
  auto kw = [&](const Triple& u) {
    const ChCurve cc(c.nu(), u, 0.0);
    const double kk = k_closed(cc, closed_constants(cc));
    return std::pair{kk, (2.0 * c.nu() + cc.sum_u()) * kk};
  };
  auto ratio = [&](int i, double h) {
    Triple up = c.u(), um = c.u();
    up[i] += h;
    um[i] -= h;
    const auto [kp, wp] = kw(up);
    const auto [km, wm] = kw(um);
    return (wp - wm) / (kp - km);
  };
  const double h = 1e-3 * c.min_gap();
  Triple C;
  for (int i = 0; i < 3; ++i) C[i] = (4.0 * ratio(i, 0.5 * h) - ratio(i, h)) / 3.0;
  return C;
}

SpeedRoutes speed_routes(const ChCurve& c) {
  const CurveConstants k = closed_constants(c);
  SpeedRoutes r;
  r.elliptic = speeds_elliptic(c, k);
  r.differential = speeds_differential(c, k);
  r.finite_difference = speeds_finite_difference(c);
  for (int i = 0; i < 3; ++i) {
    r.delta_elliptic_differential =
        std::max(r.delta_elliptic_differential, rel(r.differential[i], r.elliptic[i]));
    r.delta_finite_difference =
        std::max(r.delta_finite_difference, rel(r.finite_difference[i], r.elliptic[i]));
  }
  return r;
}

Triple speeds_fast(const ChCurve& c) { return speeds_elliptic(c, closed_constants(c)); }

ChSpeeds speeds(const ChCurve& c) {
  const CurveConstants k = closed_constants(c);
  ChSpeeds s{speeds_elliptic(c, k)};
  const Triple d = speeds_differential(c, k);
  double delta = 0.0;
  for (int i = 0; i < 3; ++i) delta = std::max(delta, rel(d[i], s.C[i]));
  if (!(delta <= 1e-9)) throw ConsistencyError("speeds elliptic vs differential", delta);
  if (!(s.C[0] < s.C[2] && s.C[1] < s.C[2]))
    throw ConsistencyError("speed ordering C1<C3, C2<C3", std::max(s.C[0], s.C[1]) - s.C[2]);
  return s;
}

TravelingWave traveling_wave(const ChCurve& c) {
  const auto& u = c.u();
  const double nu = c.nu();
  TravelingWave w;
  w.e = {-u[0] + u[1] + u[2], u[0] - u[1] + u[2], u[0] + u[1] - u[2]};
  const auto& e = w.e;
  w.c = e[0] + e[1] + e[2] + 2.0 * nu;
  w.B = 0.5 * (e[0] * e[1] + e[0] * e[2] + e[1] * e[2]);
  w.A = 0.5 * e[0] * e[1] * e[2];
  w.k = wavenumber(c);
  w.omega = (2.0 * nu + c.sum_u()) * w.k;
  w.C2 = w.B * w.c + nu * w.c * w.c - w.A;
  w.C2_expected = 4.0 * (u[0] + nu) * (u[1] + nu) * (u[2] + nu);
  w.constraint = w.c - e[0] - e[1] - e[2] - 2.0 * nu;
  return w;
}

ChDensities densities(const ChCurve& c) {
  const CurveConstants k = closed_constants(c);
  const double nu = c.nu();
  // 1/sqrt(R) = lambda^{-2} prod_r (1 - r x)^{-1/2}, x = 1/lambda
  const double roots[4] = {-nu, c.u(0), c.u(1), c.u(2)};
  double s[4] = {1.0, 0.0, 0.0, 0.0};
  for (double r : roots) {
    const double f[4] = {1.0, 0.5 * r, 0.375 * r * r, 0.3125 * r * r * r};
    double t[4] = {0.0, 0.0, 0.0, 0.0};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; a + b < 4; ++b) t[a + b] += s[a] * f[b];
    for (int a = 0; a < 4; ++a) s[a] = t[a];
  }
  // P_nu = P2(-nu) + (S_nu/2) x (1 - nu x + nu^2 x^2 - ...)
  const double h = 0.5 * c.S_nu();
  const double p[3] = {P2(c, k, -nu), h, -nu * h};
  const double p1 = P1(k, -nu);
  double xi[3];
  for (int n = 0; n < 3; ++n) {
    double cn = 0.0;
    for (int a = 0; a <= n; ++a) cn += p[a] * s[n - a];
    xi[n] = -cn / p1;
  }
  ChDensities d;
  d.xi0 = xi[0];
  d.xi1 = xi[1];
  d.xi2 = xi[2];
  d.h0 = 2.0 * d.xi0 - nu;
  d.h1 = 2.0 * d.xi1 + 2.0 * nu * d.xi0;
  d.h2 = 8.0 / 3.0 * d.xi2 + 6.0 * nu * d.xi1;
  d.h_neg1 = 1.0 - nu / std::sqrt(k.residue_sigma1_sq);
  d.h0_direct = -2.0 * P2(c, k, -nu) / p1 - nu;
  const double delta = rel(d.h0, d.h0_direct);
  if (!(delta <= 1e-9)) throw ConsistencyError("h0 series vs direct", delta);
  return d;
}

}  // namespace whitham
