#pragma once

#include <functional>

#include "whitham/curve.hpp"

namespace whitham {

// Diagonal covariant metric as a function of the coordinates.
using MetricFn = std::function<Triple(const Triple&)>;
using ScalarFn = std::function<double(const Triple&)>;

struct Curvature {
  double sectional[3][3] = {};   // R^{ij}_{ij}, i != j (symmetric)
  double offdiag[3][3][3] = {};  // R^{ij}_{il}, i, j, l distinct
  double max_offdiag() const;
};

// Derivatives of a diagonal metric from one central-difference stencil of step h.
struct MetricJet {
  Triple g{};
  double dg[3][3] = {};      // dg[k][a] = d_k g_aa
  double ddg[3][3][3] = {};  // ddg[k][l][a] = d_k d_l g_aa
};
MetricJet metric_jet(const MetricFn& g, const Triple& u, double h);

// Christoffel symbols Gamma^a_{bc} of a diagonal metric.
void christoffel(const MetricJet& J, double G[3][3][3]);

// Riemann tensor R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb},
// contracted to R^{ij}_{il} = R^i_{jil} / g_jj.
Curvature christoffel_curvature(const MetricFn& g, const Triple& u, double h);

struct FerapontovResult {
  Triple metric{};     // g / A^2
  Triple w{};          // affinors  A g^{ii} nabla_i nabla_i A - (1/2)|grad A|^2
  double grad_sq = 0;  // sum_j (d_j A)^2 / g_jj
  Curvature original, transformed;
  double residual = 0;  // max |R~ - (A^2 R + w^i + w^j)| over i<j
  double mixed_hessian = 0;  // max |nabla_j nabla_l A| over j != l
};

// Metric g -> g/A^2 under the reciprocal transformation generated by A.
// Throws DomainError if |A| < 1e-14.
FerapontovResult ferapontov_transform(const MetricFn& g, const ScalarFn& A, const Triple& u,
                                      double h);

}  // namespace whitham
