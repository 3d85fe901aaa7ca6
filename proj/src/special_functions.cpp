#include "whitham/special_functions.hpp"

#include <boost/math/special_functions/ellint_rj.hpp>

#include <cmath>
#include <numbers>

#include "whitham/errors.hpp"

namespace whitham {

double agm(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("agm: arguments must be positive");
  for (int n = 0; n < 64; ++n) {
    if (std::abs(a - b) <= 1e-16 * a) break;
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return 0.5 * (a + b);
}

double elliptic_K(double s2) {
  if (!(s2 >= 0.0) || !(s2 < 1.0)) throw DomainError("elliptic_K: need 0 <= s2 < 1");
  return std::numbers::pi / (2.0 * agm(1.0, std::sqrt(1.0 - s2)));
}

double elliptic_E(double s2) {
  if (!(s2 >= 0.0) || !(s2 <= 1.0)) throw DomainError("elliptic_E: need 0 <= s2 <= 1");
  if (s2 == 1.0) return 1.0;
  // Gauss: E = K (1 - sum 2^{n-1} c_n^2), c_0^2 = s2.
  double a = 1.0, b = std::sqrt(1.0 - s2);
  double sum = 0.5 * s2;
  double pow2 = 0.5;
  for (int n = 1; n < 64; ++n) {
    const double c = 0.5 * (a - b);
    pow2 *= 2.0;
    sum += pow2 * c * c;
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    if (std::abs(c) <= 1e-17 * a) break;
  }
  return std::numbers::pi / (2.0 * a) * (1.0 - sum);
}

double elliptic_Pi_complete(double rho2, double s2) {
  if (!(rho2 < 1.0)) throw DomainError("elliptic_Pi_complete: need rho2 < 1");
  const double K = elliptic_K(s2);
  if (rho2 == 0.0) return K;
  // Pi(n|m) = R_F(0,1-m,1) + (n/3) R_J(0,1-m,1,1-n)
  const double rj = boost::math::ellint_rj(0.0, 1.0 - s2, 1.0, 1.0 - rho2);
  return K + rho2 / 3.0 * rj;
}

}  // namespace whitham
