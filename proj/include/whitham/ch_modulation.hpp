#pragma once

#include "whitham/curve.hpp"

namespace whitham {

struct WavenumberPaths {
  double from_branch = 0;   // -2 pi phi(-nu) / sigma1(-nu), closed forms
  double from_moments = 0;  // 2 pi / (I1 + nu I0), quadrature; NaN if unresolved
  double delta = 0;         // relative difference, 0 if moments unavailable
};

WavenumberPaths wavenumber_paths(const ChCurve& c);
// k > 0; throws ConsistencyError if the two paths differ by more than 1e-7.
double wavenumber(const ChCurve& c);
double frequency(const ChCurve& c);

struct ChSpeeds {
  Triple C{};
};

// Production route (complete elliptic integrals).
Triple speeds_elliptic(const ChCurve& c, const CurveConstants& k);
// Route through the differential numerators P1, P_nu.
Triple speeds_differential(const ChCurve& c, const CurveConstants& k);
// d omega / d k along each u^i, central differences with Richardson extrapolation.
Triple speeds_finite_difference(const ChCurve& c);

struct SpeedRoutes {
  Triple elliptic{}, differential{}, finite_difference{};
  double delta_elliptic_differential = 0;  // max relative
  double delta_finite_difference = 0;      // max relative, vs elliptic
};
SpeedRoutes speed_routes(const ChCurve& c);

// Elliptic route, verified against the differential route (1e-9) and the
// hyperbolicity ordering C1 < C3, C2 < C3.
ChSpeeds speeds(const ChCurve& c);
// Same without checks, for hot loops.
Triple speeds_fast(const ChCurve& c);

struct TravelingWave {
  double c = 0, A = 0, B = 0, k = 0, omega = 0;
  Triple e{};               // e1 > e2 > e3
  double C2 = 0;            // B c + nu c^2 - A
  double C2_expected = 0;   // (Omega/K)^2 = 4 prod(u^i + nu)
  double constraint = 0;    // c - e1 - e2 - e3 - 2 nu
};
TravelingWave traveling_wave(const ChCurve& c);

struct ChDensities {
  double xi0 = 0, xi1 = 0, xi2 = 0;
  double h0 = 0, h1 = 0, h2 = 0, h_neg1 = 0;
  double h0_direct = 0;  // -2 P2(-nu)/P1(-nu) - nu
};
// Coefficients of P_nu(lambda) / (P1(-nu) sqrt(R)) = -(xi0 + xi1/lambda + xi2/lambda^2 + ...)/lambda^2,
// by series in 1/lambda.  Throws ConsistencyError if h0 != h0_direct to 1e-9.
ChDensities densities(const ChCurve& c);

}  // namespace whitham
