#pragma once

namespace whitham {

// Arithmetic-geometric mean of two positive numbers.
double agm(double a, double b);

// Complete elliptic integrals in terms of the squared modulus s2 = s^2.
double elliptic_K(double s2);
double elliptic_E(double s2);

// Complete third kind integral  int_0^{pi/2} dpsi / ((1 - rho2 sin^2) sqrt(1 - s2 sin^2)).
// Equal to int_0^{K(s)} dv / (1 - rho2 sn^2 v).
double elliptic_Pi_complete(double rho2, double s2);

}  // namespace whitham
