#pragma once

#include <string>
#include <vector>

#include "whitham/ch_modulation.hpp"
#include "whitham/kdv_modulation.hpp"

namespace whitham {

// beta^i = 1/(u^i+nu), indices kept aligned with u (so beta1 > beta2 > beta3).
struct ReciprocalPair {
  ChCurve ch;
  KdvCurve kdv;
  KdvHamiltonians H;
  double H0 = 0, N = 0;
};

Triple beta_of_u(double nu, const Triple& u);
Triple u_of_beta(double nu, const Triple& beta);
ReciprocalPair pair(const ChCurve& c);

// C~^i(beta) = sum 1/beta - nu + 2 alpha0 prod_{j!=i}(beta^i-beta^j)/(beta^i(beta^i+alpha1))
Triple tilde_speeds(const ReciprocalPair& p);

struct VelocityIdentity {
  Triple C{}, C_tilde{}, v_H0_N{};
  double delta_coordinates = 0;  // C~ vs C, relative
  double delta_identity = 0;     // v H0 + N vs C~, relative
};
VelocityIdentity velocity_identity(const ReciprocalPair& p);

// CH metric of the given exponent pushed to beta (times (du/dbeta)^2 = 1/beta^4)
// compared with the KdV residue metric / (H0^2 {beta^3, 2 beta^2, 4 beta, 8}).
double metric_correspondence(const ReciprocalPair& p, int exponent);

struct TildeDensities {
  double h_neg1 = 0, h0 = 0, h1 = 0, h2 = 0;
};
// From the KdV Hamiltonians (H_{-3} with the 3/4 weight, as printed).
TildeDensities tilde_densities_kdv(const ReciprocalPair& p);
// From the CH xi-expansion re-expanded in eta = 1/(lambda+nu).
TildeDensities tilde_densities_ch(const ChCurve& c);

struct CasimirRelations {
  double h2_relation = 0;       // h~2 H0 - H_{-3} + nu H_{-2}, CH route, unit eta^3 weight
  double h2_relation_3_4 = 0;   // same with the 3/4-weighted H_{-3}
  double h1_relation = 0;       // h~1 H0 - H_{-2} + nu H_{-1}
  double h0_relation = 0;       // h~0 H0 - H_{-1} + nu H0
  double h_neg1_delta = 0;      // 1 - nu/H0 vs CH h_{-1}
};
CasimirRelations casimir_relations(const ReciprocalPair& p);

enum class Side { KdV, CH };

struct Table1Row {
  Side side = Side::KdV;
  int slot = 1;
  Triple metric{};
  Triple curvature{};  // R^{12}_{12}, R^{13}_{13}, R^{23}_{23}
  Triple expected{};
  double offdiag = 0;
  double hamiltonian = 0;
  std::string hamiltonian_formula;
  std::string casimir_shift;
  double deviation = 0;  // max |R - expected| / max(1, |expected|), and off-diagonal |R|
  bool ok = false;
  // CH side only: reciprocal image of the KdV row with A = H0
  Triple affinors{};
  double ferapontov_residual = 0;
};

std::vector<Table1Row> table1(const ReciprocalPair& p, double tol = 1e-4);

}  // namespace whitham
