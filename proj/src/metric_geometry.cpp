#include "whitham/metric_geometry.hpp"

#include <cmath>
#include <string>

#include "whitham/ch_modulation.hpp"
#include "whitham/errors.hpp"

namespace whitham {

namespace {

void check_exponent(int e) {
  if (e < 0 || e > 3) throw DomainError("metric exponent must be in {0,1,2,3}");
}

double divisor(double v, int e) { return std::pow(2.0 * v, e); }

}  // namespace

double residue_omega_nu_sq(const ChCurve& c, const CurveConstants& k, int i) {
  const double p = Pnu(c, k, c.u(i));
  return p * p / (c.S_nu() * c.D(i));
}

Triple metric(const ChCurve& c, int exponent) {
  check_exponent(exponent);
  const CurveConstants k = closed_constants(c);
  Triple g;
  for (int i = 0; i < 3; ++i) {
    const double v = c.u(i) + c.nu();
    g[i] = -4.0 * v * residue_omega_nu_sq(c, k, i) / k.residue_sigma1_sq / divisor(v, exponent);
  }
  return g;
}

MetricFn metric_fn(double nu, int exponent) {
  return [nu, exponent](const Triple& u) { return metric(ChCurve(nu, u, 0.0), exponent); };
}

CTriple sqrt_metric(const ChCurve& c, int exponent) {
  check_exponent(exponent);
  const CurveConstants k = closed_constants(c);
  const double p1 = std::abs(P1(k, -c.nu()));
  CTriple s;
  for (int i = 0; i < 3; ++i) {
    const double v = c.u(i) + c.nu();
    s[i] = 2.0 * std::sqrt(v) * Pnu(c, k, c.u(i)) / (csqrt(c.D(i)) * p1) /
           std::sqrt(divisor(v, exponent));
  }
  return s;
}

CMatrix rotation_coefficients(const ChCurve& c, int exponent) {
  check_exponent(exponent);
  const CurveConstants k = closed_constants(c);
  const double kk = 1.0 - exponent;
  const double p1 = P1(k, -c.nu());
  CMatrix r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const double ratio = (c.u(j) + c.nu()) / (c.u(i) + c.nu());
      const double bracket =
          Pbranch(c, k, i, c.u(j)) - Pnu(c, k, c.u(j)) * P1(k, c.u(i)) / p1;
      r[i][j] = std::pow(ratio, 0.5 * kk) * bracket / (csqrt(c.D(i)) * csqrt(c.D(j)));
    }
  return r;
}

CMatrix rotation_coefficients_fd(const ChCurve& c, int exponent) {
  const CTriple s = sqrt_metric(c, exponent);
  const double h = 1e-5 * c.min_gap();
  CMatrix r{};
  for (int i = 0; i < 3; ++i) {
    Triple up = c.u(), um = c.u();
    up[i] += h;
    um[i] -= h;
    const CTriple sp = sqrt_metric(ChCurve(c.nu(), up, 0.0), exponent);
    const CTriple sm = sqrt_metric(ChCurve(c.nu(), um, 0.0), exponent);
    for (int j = 0; j < 3; ++j)
      if (j != i) r[i][j] = (sp[j] - sm[j]) / (2.0 * h) / s[i];
  }
  return r;
}

CurvatureReport curvature(const ChCurve& c, int exponent) {
  CurvatureReport rep;
  rep.r = rotation_coefficients(c, exponent);
  const CTriple s = sqrt_metric(c, exponent);
  const double h = 1e-4 * c.min_gap();
  // dr[l][a][b] = d_l r_ab
  std::complex<double> dr[3][3][3];
  for (int l = 0; l < 3; ++l) {
    Triple up = c.u(), um = c.u();
    up[l] += h;
    um[l] -= h;
    const CMatrix rp = rotation_coefficients(ChCurve(c.nu(), up, 0.0), exponent);
    const CMatrix rm = rotation_coefficients(ChCurve(c.nu(), um, 0.0), exponent);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) dr[l][a][b] = (rp[a][b] - rm[a][b]) / (2.0 * h);
  }
  auto keep = [&](std::complex<double> z) {
    rep.imag_residual = std::max(rep.imag_residual, std::abs(z.imag()));
    return z.real();
  };
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const std::complex<double> pre = -1.0 / (s[i] * s[j]);
      std::complex<double> sum = dr[i][i][j] + dr[j][j][i];
      for (int p = 0; p < 3; ++p)
        if (p != i && p != j) sum += rep.r[p][j] * rep.r[p][i];
      rep.R.sectional[i][j] = keep(pre * sum);
      for (int l = 0; l < 3; ++l)
        if (l != i && l != j)
          rep.R.offdiag[i][j][l] = keep(pre * (dr[l][j][i] - rep.r[j][l] * rep.r[l][i]));
      rep.egorov_defect = std::max(rep.egorov_defect, std::abs(rep.r[i][j] - rep.r[j][i]));
    }
  return rep;
}

double expected_sectional(const ChCurve& c, int exponent, int i, int j) {
  check_exponent(exponent);
  if (exponent < 2) return 0.0;
  if (exponent == 2) return -1.0;
  const Triple C = speeds_fast(c);
  return -2.0 * c.nu() - C[i] - C[j];
}

double curvature_deviation(const ChCurve& c, const CurvatureReport& rep, int exponent) {
  double dev = rep.R.max_offdiag();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j)
        dev = std::max(dev, std::abs(rep.R.sectional[i][j] - expected_sectional(c, exponent, i, j)));
  return dev;
}

void verify_curvature(const ChCurve& c, int exponent, double tol) {
  const CurvatureReport rep = curvature(c, exponent);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const double d = std::abs(rep.R.sectional[i][j] - expected_sectional(c, exponent, i, j));
      if (d > tol)
        throw ConsistencyError("curvature exponent " + std::to_string(exponent) + " R^{" +
                                   std::to_string(i + 1) + std::to_string(j + 1) + "}_{" +
                                   std::to_string(i + 1) + std::to_string(j + 1) + "}",
                               d);
      for (int l = 0; l < 3; ++l)
        if (l != i && l != j && std::abs(rep.R.offdiag[i][j][l]) > tol)
          throw ConsistencyError("curvature exponent " + std::to_string(exponent) + " R^{" +
                                     std::to_string(i + 1) + std::to_string(j + 1) + "}_{" +
                                     std::to_string(i + 1) + std::to_string(l + 1) + "}",
                                 std::abs(rep.R.offdiag[i][j][l]));
    }
}

double tsarev_check(const ChCurve& c, int exponent) {
  const double h = 1e-4 * c.min_gap();
  const Triple C = speeds_fast(c);
  const Triple g = metric(c, exponent);
  double worst = 0.0;
  for (int j = 0; j < 3; ++j) {
    Triple up = c.u(), um = c.u();
    up[j] += h;
    um[j] -= h;
    const ChCurve cp(c.nu(), up, 0.0), cm(c.nu(), um, 0.0);
    const Triple Cp = speeds_fast(cp), Cm = speeds_fast(cm);
    const Triple gp = metric(cp, exponent), gm = metric(cm, exponent);
    for (int i = 0; i < 3; ++i) {
      if (i == j || std::abs(C[i] - C[j]) < 1e-6) continue;
      const double lhs = (Cp[i] - Cm[i]) / (2.0 * h) / (C[j] - C[i]);
      const double rhs = 0.5 * (gp[i] - gm[i]) / (2.0 * h) / g[i];
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

namespace {

double max_curvature(const Curvature& K) {
  double m = K.max_offdiag();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) m = std::max(m, std::abs(K.sectional[i][j]));
  return m;
}

}  // namespace

std::vector<PencilResult> pencil_check(const ChCurve& c, const std::vector<double>& lambdas) {
  std::vector<PencilResult> out;
  const double nu = c.nu();
  const double h = 1e-2 * c.min_gap();
  const MetricFn g0 = metric_fn(nu, 0);
  for (double lam : lambdas) {
    PencilResult p;
    p.lambda = lam;
    for (int i = 0; i < 3; ++i) {
      const double v = c.u(i) + nu;
      if (std::abs(1.0 + 2.0 * lam * v) < 1e-6 || std::abs(1.0 + lam / v) < 1e-6)
        p.degenerate = true;
    }
    if (!p.degenerate) {
      const MetricFn contra = [&](const Triple& u) {
        Triple g = g0(u);
        for (int i = 0; i < 3; ++i) g[i] /= 1.0 + 2.0 * lam * (u[i] + nu);
        return g;
      };
      const MetricFn cov = [&](const Triple& u) {
        Triple g = g0(u);
        for (int i = 0; i < 3; ++i) g[i] *= 1.0 + lam / (u[i] + nu);
        return g;
      };
      p.contravariant_residual = max_curvature(christoffel_curvature(contra, c.u(), h));
      p.covariant_residual = max_curvature(christoffel_curvature(cov, c.u(), h));
    }
    out.push_back(p);
  }
  return out;
}

AffinorReport affinor_sign(const ChCurve& c) {
  const CurvatureReport rep = curvature(c, 3);
  const Triple C = speeds_fast(c);
  AffinorReport a;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double eta = C[i] + C[j] + 2.0 * c.nu();
      a.plus_residual = std::max(a.plus_residual, std::abs(rep.R.sectional[i][j] - eta));
      a.minus_residual = std::max(a.minus_residual, std::abs(rep.R.sectional[i][j] + eta));
    }
  a.sign = a.minus_residual < a.plus_residual ? -1 : 1;
  return a;
}

}  // namespace whitham
