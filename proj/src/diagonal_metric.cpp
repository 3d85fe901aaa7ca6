#include "whitham/diagonal_metric.hpp"

#include <algorithm>
#include <cmath>

#include "whitham/errors.hpp"

namespace whitham {

double Curvature::max_offdiag() const {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l)
        if (i != j && j != l && i != l) m = std::max(m, std::abs(offdiag[i][j][l]));
  return m;
}

// fourth-order central stencils
MetricJet metric_jet(const MetricFn& g, const Triple& u, double h) {
  static constexpr int off[4] = {-2, -1, 1, 2};
  static constexpr double d1[4] = {1.0, -8.0, 8.0, -1.0};        // / 12h
  static constexpr double d2[4] = {-1.0, 16.0, 16.0, -1.0};      // -30 f0, / 12h^2
  MetricJet J;
  J.g = g(u);
  for (int k = 0; k < 3; ++k) {
    Triple f[4];
    for (int s = 0; s < 4; ++s) {
      Triple v = u;
      v[k] += off[s] * h;
      f[s] = g(v);
    }
    for (int a = 0; a < 3; ++a) {
      double s1 = 0.0, s2 = -30.0 * J.g[a];
      for (int s = 0; s < 4; ++s) {
        s1 += d1[s] * f[s][a];
        s2 += d2[s] * f[s][a];
      }
      J.dg[k][a] = s1 / (12.0 * h);
      J.ddg[k][k][a] = s2 / (12.0 * h * h);
    }
  }
  for (int k = 0; k < 3; ++k)
    for (int l = k + 1; l < 3; ++l) {
      Triple acc{};
      for (int s = 0; s < 4; ++s)
        for (int r = 0; r < 4; ++r) {
          Triple v = u;
          v[k] += off[s] * h;
          v[l] += off[r] * h;
          const Triple f = g(v);
          for (int a = 0; a < 3; ++a) acc[a] += d1[s] * d1[r] * f[a];
        }
      for (int a = 0; a < 3; ++a) {
        J.ddg[k][l][a] = acc[a] / (144.0 * h * h);
        J.ddg[l][k][a] = J.ddg[k][l][a];
      }
    }
  return J;
}

namespace {

// numerator of Gamma^a_{bc} times 2 g_aa, differentiated along d when d >= 0
double gamma_num(const MetricJet& J, int a, int b, int c, int d) {
  auto first = [&](int k, int m) { return d < 0 ? J.dg[k][m] : J.ddg[d][k][m]; };
  double s = 0.0;
  if (a == c) s += first(b, a);
  if (a == b) s += first(c, a);
  if (b == c) s -= first(a, b);
  return s;
}

}  // namespace

void christoffel(const MetricJet& J, double G[3][3][3]) {
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) G[a][b][c] = gamma_num(J, a, b, c, -1) / (2.0 * J.g[a]);
}

Curvature christoffel_curvature(const MetricFn& g, const Triple& u, double h) {
  const MetricJet J = metric_jet(g, u, h);
  double G[3][3][3];
  christoffel(J, G);
  // dG[d][a][b][c] = d_d Gamma^a_{bc}
  double dG[3][3][3][3];
  for (int d = 0; d < 3; ++d)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c)
          dG[d][a][b][c] = gamma_num(J, a, b, c, d) / (2.0 * J.g[a]) -
                           gamma_num(J, a, b, c, -1) * J.dg[d][a] / (2.0 * J.g[a] * J.g[a]);
  auto riem = [&](int a, int b, int c, int d) {
    double s = dG[c][a][d][b] - dG[d][a][c][b];
    for (int e = 0; e < 3; ++e) s += G[a][c][e] * G[e][d][b] - G[a][d][e] * G[e][c][b];
    return s;
  };
  Curvature K;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      K.sectional[i][j] = riem(i, j, i, j) / J.g[j];
      for (int l = 0; l < 3; ++l)
        if (l != i && l != j) K.offdiag[i][j][l] = riem(i, j, i, l) / J.g[j];
    }
  return K;
}

FerapontovResult ferapontov_transform(const MetricFn& g, const ScalarFn& A, const Triple& u,
                                      double h) {
  const double a0 = A(u);
  if (!(std::abs(a0) >= 1e-14)) throw DomainError("ferapontov_transform: A vanishes");
  const MetricJet J = metric_jet(g, u, h);
  double G[3][3][3];
  christoffel(J, G);
  // gradient and Hessian of A, via the same stencils
  const MetricJet JA = metric_jet([&](const Triple& v) { const double x = A(v); return Triple{x, x, x}; }, u, h);
  double dA[3], ddA[3][3];
  for (int k = 0; k < 3; ++k) {
    dA[k] = JA.dg[k][0];
    for (int l = 0; l < 3; ++l) ddA[k][l] = JA.ddg[k][l][0];
  }
  auto hess = [&](int i, int j) {
    double s = ddA[i][j];
    for (int k = 0; k < 3; ++k) s -= G[k][i][j] * dA[k];
    return s;
  };
  FerapontovResult r;
  for (int j = 0; j < 3; ++j) r.grad_sq += dA[j] * dA[j] / J.g[j];
  for (int i = 0; i < 3; ++i) {
    r.metric[i] = J.g[i] / (a0 * a0);
    r.w[i] = a0 * hess(i, i) / J.g[i] - 0.5 * r.grad_sq;
    for (int j = 0; j < 3; ++j)
      if (j != i) r.mixed_hessian = std::max(r.mixed_hessian, std::abs(hess(i, j)));
  }
  r.original = christoffel_curvature(g, u, h);
  r.transformed = christoffel_curvature(
      [&](const Triple& v) {
        const Triple gv = g(v);
        const double av = A(v);
        return Triple{gv[0] / (av * av), gv[1] / (av * av), gv[2] / (av * av)};
      },
      u, h);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      r.residual = std::max(r.residual, std::abs(r.transformed.sectional[i][j] -
                                                 (a0 * a0 * r.original.sectional[i][j] +
                                                  r.w[i] + r.w[j])));
  return r;
}

}  // namespace whitham
