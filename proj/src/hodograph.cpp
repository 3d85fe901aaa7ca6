#include "whitham/hodograph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <thread>

#include <Eigen/Dense>
// this boost release calls unqualified isnan inside pchip
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/roots.hpp>

#include "whitham/ch_modulation.hpp"
#include "whitham/errors.hpp"

namespace whitham {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double toms748(const std::function<double(double)>& g, double a, double b) {
  boost::uintmax_t it = 200;
  auto r = boost::math::tools::toms748_solve(g, a, b, boost::math::tools::eps_tolerance<double>(52), it);
  return 0.5 * (r.first + r.second);
}

}  // namespace

// ---------------------------------------------------------------- initial data

InitialData InitialData::from_samples(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 4) throw DomainError("initial data needs at least 4 samples");
  std::vector<double> u, x;
  for (auto& [a, b] : samples) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("initial data: non-finite sample");
    u.push_back(a);
    x.push_back(b);
  }
  for (size_t i = 1; i < u.size(); ++i)
    if (!(u[i] > u[i - 1])) throw DomainError("initial data: u samples must be strictly increasing");
  const int dir = x[1] > x[0] ? 1 : -1;
  for (size_t i = 1; i < x.size(); ++i)
    if (!(dir * (x[i] - x[i - 1]) > 0)) throw DomainError("initial data: x samples must be strictly monotone");
  const double lo = u.front(), hi = u.back();
  using Pchip = boost::math::interpolators::pchip<std::vector<double>>;
  auto p = std::make_shared<Pchip>(std::move(u), std::move(x));
  InitialData d = from_function([p](double v) { return (*p)(v); }, [p](double v) { return p->prime(v); }, lo, hi);
  return d;
}

InitialData InitialData::from_function(std::function<double(double)> f, std::function<double(double)> df,
                                       double lo, double hi) {
  if (!(hi > lo)) throw DomainError("initial data: empty domain");
  InitialData d;
  d.f_ = std::move(f);
  d.df_ = std::move(df);
  d.lo_ = lo;
  d.hi_ = hi;
  const double a = d.f_(lo), b = d.f_(hi);
  d.direction_ = b > a ? 1 : (b < a ? -1 : 0);
  return d;
}

double InitialData::inverse(double x) const {
  const double a = f_(lo_), b = f_(hi_);
  if (direction_ == 0) return kNaN;
  if (x < std::min(a, b) || x > std::max(a, b)) return kNaN;
  if (x == a) return lo_;
  if (x == b) return hi_;
  return toms748([&](double v) { return f_(v) - x; }, lo_, hi_);
}

// ---------------------------------------------------------------- EPD kernel

namespace {

struct Rule {
  std::vector<double> x, w;
};

// Gauss-Jacobi on [-1,1] with weight (1-x)^a (1+x)^b, Golub-Welsch.
Rule gauss_jacobi(int n, double a, double b) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    T(k, k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double m = k + 1.0, sm = 2.0 * m + a + b;
      T(k, k + 1) = T(k + 1, k) =
          std::sqrt(4.0 * m * (m + a) * (m + b) * (m + a + b) / (sm * sm * (sm + 1.0) * (sm - 1.0)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                     std::tgamma(a + b + 2.0);
  Rule r;
  for (int k = 0; k < n; ++k) {
    r.x.push_back(es.eigenvalues()(k));
    const double v = es.eigenvectors()(0, k);
    r.w.push_back(mu0 * v * v);
  }
  return r;
}

struct TensorRule {
  std::vector<double> a1, a2, a3, w;
};

const TensorRule& tensor_rule(int n) {
  static std::mutex m;
  static std::map<int, std::unique_ptr<TensorRule>> cache;
  std::lock_guard<std::mutex> lock(m);
  auto& slot = cache[n];
  if (!slot) {
    const Rule mu = gauss_jacobi(n, -0.5, 0.0);
    auto T = std::make_unique<TensorRule>();
    const double cn = 1.0 / (2.0 * std::numbers::sqrt2 * std::numbers::pi);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double eta = std::cos(std::numbers::pi * (j + 0.5) / n);
        const double M = mu.x[i];
        T->a1.push_back((1 + M) * (1 + eta) / 4);
        T->a2.push_back((1 + M) * (1 - eta) / 4);
        T->a3.push_back((1 - M) / 2);
        T->w.push_back(cn * mu.w[i] * std::numbers::pi / n);
      }
    slot = std::move(T);
  }
  return *slot;
}

void check_domain(const InitialData& f, const Triple& u) {
  const double lo = std::min({u[0], u[1], u[2]}), hi = std::max({u[0], u[1], u[2]});
  const double slack = 1e-12 * std::max(1.0, f.hi() - f.lo());
  if (lo < f.lo() - slack || hi > f.hi() + slack)
    throw DomainError("u outside the initial-data domain [" + std::to_string(f.lo()) + ", " +
                      std::to_string(f.hi()) + "]");
}

}  // namespace

EpdValue epd_q_fixed(const InitialData& f, const Triple& u, int nodes) {
  check_domain(f, u);
  const TensorRule& R = tensor_rule(nodes);
  const double lo = f.lo(), hi = f.hi();
  EpdValue v;
  v.nodes = nodes;
  for (size_t k = 0; k < R.w.size(); ++k) {
    const double s = std::clamp(R.a1[k] * u[0] + R.a2[k] * u[1] + R.a3[k] * u[2], lo, hi);
    const double d = R.w[k] * f.prime(s);
    v.q += R.w[k] * f(s);
    v.grad[0] += d * R.a1[k];
    v.grad[1] += d * R.a2[k];
    v.grad[2] += d * R.a3[k];
  }
  return v;
}

EpdValue epd_q(const InitialData& f, const Triple& u, int nodes) {
  if (nodes < 4) throw DomainError("epd_q: at least 4 nodes");
  EpdValue prev = epd_q_fixed(f, u, nodes / 2);
  for (int n = nodes; n <= 1024; n *= 2) {
    EpdValue cur = epd_q_fixed(f, u, n);
    cur.estimate = std::abs(cur.q - prev.q);
    double gscale = 0.0;
    for (int i = 0; i < 3; ++i) gscale = std::max(gscale, std::abs(cur.grad[i] - prev.grad[i]));
    const double scale = std::max(1.0, std::abs(cur.q));
    if (cur.estimate <= 1e-10 * scale && gscale <= 1e-8 * scale) return cur;
    prev = cur;
  }
  throw NumericalError("epd_q: quadrature did not converge", prev.estimate);
}

EpdResidual epd_residual(const InitialData& f, const Triple& u) {
  EpdResidual r;
  const double span = u[2] - u[0];
  const double h = 1e-4 * std::max(span, 1e-3);
  const EpdValue c = epd_q(f, u);
  Triple gp[3], gm[3];
  for (int j = 0; j < 3; ++j) {
    Triple up = u, um = u;
    up[j] += h;
    um[j] -= h;
    gp[j] = epd_q_fixed(f, up, c.nodes).grad;
    gm[j] = epd_q_fixed(f, um, c.nodes).grad;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double dij = 0.5 * ((gp[j][i] - gm[j][i]) + (gp[i][j] - gm[i][j])) / (2.0 * h);
      r.system = std::max(r.system, std::abs(c.grad[i] - c.grad[j] - 2.0 * (u[i] - u[j]) * dij));
    }
  for (int k = 0; k < 20; ++k) {
    const double v = f.lo() + (f.hi() - f.lo()) * (k + 0.5) / 20.0;
    r.boundary = std::max(r.boundary, std::abs(epd_q(f, {v, v, v}).q - f(v)));
  }
  return r;
}

CommutingSpeeds commuting_speeds(const InitialData& f, const Triple& u, int nodes) {
  CommutingSpeeds s;
  s.C = speeds_fast(ChCurve(0.0, u, 0.0));
  const EpdValue q = epd_q(f, u, nodes);
  const double su = u[0] + u[1] + u[2];
  for (int i = 0; i < 3; ++i) s.w[i] = q.q + (s.C[i] - su) * q.grad[i];
  return s;
}

double tsarev_residual(const InitialData& f, const Triple& u) {
  const ChCurve c(0.0, u);
  const double h = 1e-4 * c.min_gap();
  const CommutingSpeeds s = commuting_speeds(f, u);
  double worst = 0.0;
  for (int j = 0; j < 3; ++j) {
    Triple up = u, um = u;
    up[j] += h;
    um[j] -= h;
    const CommutingSpeeds sp = commuting_speeds(f, up), sm = commuting_speeds(f, um);
    for (int i = 0; i < 3; ++i) {
      if (i == j) continue;
      const double lhs = (sp.w[i] - sm.w[i]) / (2.0 * h) / (s.w[i] - s.w[j]);
      const double rhs = (sp.C[i] - sm.C[i]) / (2.0 * h) / (s.C[i] - s.C[j]);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

// ---------------------------------------------------------------- hodograph

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Solved: return "solved";
    case SolveStatus::Coalesced: return "coalesced";
    case SolveStatus::NoSolution: return "no_solution";
    case SolveStatus::SingularJacobian: return "singular_jacobian";
    case SolveStatus::MaxIterations: return "max_iterations";
  }
  return "?";
}

const char* to_string(PointStatus s) {
  switch (s) {
    case PointStatus::Genus1: return "genus1";
    case PointStatus::Genus0: return "genus0";
    case PointStatus::MultiValued: return "multivalued";
    case PointStatus::Failed: return "failed";
    case PointStatus::OutsideDomain: return "outside_domain";
  }
  return "?";
}

namespace {

double inf_norm(const Triple& v) { return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])}); }

// x = C^i t + w^i with a frozen quadrature rule
class Hodograph {
 public:
  Hodograph(const InitialData& f, int nodes) : f_(f), nodes_(nodes) {}

  bool valid(const Triple& u) const {
    return u[0] > 0.0 && u[0] < u[1] && u[1] < u[2] && u[0] >= f_.lo() && u[2] <= f_.hi();
  }

  // C^i t + w^i
  Triple G(const Triple& u, double t, Triple* C = nullptr) const {
    const Triple c = speeds_fast(ChCurve(0.0, u, 0.0));
    const EpdValue q = epd_q_fixed(f_, u, nodes_);
    const double su = u[0] + u[1] + u[2];
    Triple g;
    for (int i = 0; i < 3; ++i) g[i] = c[i] * t + q.q + (c[i] - su) * q.grad[i];
    if (C) *C = c;
    return g;
  }

  Triple F(const Triple& u, double x, double t) const {
    Triple g = G(u, t);
    for (double& v : g) v -= x;
    return g;
  }

  double step(const Triple& u) const {
    const double gap = std::min(u[1] - u[0], u[2] - u[1]);
    return std::min(1e-7 * std::max(u[2] - u[0], 1e-3), 1e-3 * gap);
  }

  Eigen::Matrix3d jacobian(const Triple& u, double t, const Triple& g0) const {
    Eigen::Matrix3d J;
    const double h = step(u);
    for (int j = 0; j < 3; ++j) {
      Triple up = u;
      up[j] += h;
      const Triple gp = G(up, t);
      for (int i = 0; i < 3; ++i) J(i, j) = (gp[i] - g0[i]) / h;
    }
    return J;
  }

  const InitialData& data() const { return f_; }
  int nodes() const { return nodes_; }

 private:
  const InitialData& f_;
  int nodes_;
};

struct NewtonOut {
  SolveResult r;
  Eigen::Matrix3d J;
};

NewtonOut newton(const Hodograph& H, double x, double t, Triple u, double tol, int max_iter) {
  NewtonOut out;
  SolveResult& r = out.r;
  if (!H.valid(u)) {
    r.status = SolveStatus::NoSolution;
    r.diagnostic = "seed outside the valid ordering or domain";
    return out;
  }
  Triple F = H.F(u, x, t);
  double nf = inf_norm(F);
  for (int it = 0; it <= max_iter; ++it) {
    r.iterations = it;
    if (nf < tol) {
      out.J = H.jacobian(u, t, H.G(u, t));
      r.status = SolveStatus::Solved;
      r.u = u;
      r.residual = nf;
      return out;
    }
    if (it == max_iter) break;
    Triple g0;
    for (int i = 0; i < 3; ++i) g0[i] = F[i] + x;
    const Eigen::Matrix3d J = H.jacobian(u, t, g0);
    const Eigen::Vector3d sv = J.jacobiSvd().singularValues();
    if (!(sv(2) > 1e-14 * sv(0))) {
      r.status = SolveStatus::SingularJacobian;
      r.u = u;
      r.residual = nf;
      r.diagnostic = "Jacobian condition " + std::to_string(sv(0) / sv(2));
      return out;
    }
    const Eigen::Vector3d d = J.partialPivLu().solve(-Eigen::Vector3d(F[0], F[1], F[2]));
    double lam = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 30; ++ls, lam *= 0.5) {
      const Triple un{u[0] + lam * d(0), u[1] + lam * d(1), u[2] + lam * d(2)};
      if (!H.valid(un)) continue;
      const Triple Fn = H.F(un, x, t);
      const double nn = inf_norm(Fn);
      if (nn < nf) {
        u = un;
        F = Fn;
        nf = nn;
        moved = true;
        break;
      }
    }
    if (!moved) {
      r.status = SolveStatus::NoSolution;
      r.u = u;
      r.residual = nf;
      r.diagnostic = "line search failed";
      return out;
    }
  }
  r.status = SolveStatus::MaxIterations;
  r.u = u;
  r.residual = nf;
  r.diagnostic = "no convergence in " + std::to_string(max_iter) + " iterations";
  return out;
}

// Chord iteration from a predictor, reusing J; falls back to full Newton.
bool resolve(const Hodograph& H, const Eigen::Matrix3d& J, double x, double t, Triple& u) {
  const auto lu = J.partialPivLu();
  for (int it = 0; it < 12; ++it) {
    if (!H.valid(u)) break;
    const Triple F = H.F(u, x, t);
    if (inf_norm(F) < 1e-13) return true;
    const Eigen::Vector3d d = lu.solve(-Eigen::Vector3d(F[0], F[1], F[2]));
    for (int i = 0; i < 3; ++i) u[i] += d(i);
    if (d.cwiseAbs().maxCoeff() < 1e-15 * (1.0 + std::abs(u[2]))) return H.valid(u);
  }
  if (!H.valid(u)) return false;
  const NewtonOut n = newton(H, x, t, u, 1e-12, 20);
  if (n.r.status != SolveStatus::Solved) return false;
  u = n.r.u;
  return true;
}

}  // namespace

SolveResult solve(const InitialData& f, double x, double t, const Triple& seed, const SolveOptions& opt) {
  if (opt.nu != 0.0) throw DomainError("hodograph solver is restricted to nu = 0");
  if (!(t >= 0.0)) throw DomainError("solve: t must be >= 0");
  if (!(seed[0] < seed[1] && seed[1] < seed[2])) throw DomainError("solve: seed must be strictly ordered");
  if (t == 0.0) {
    SolveResult r;
    const double v = f.inverse(x);
    if (std::isnan(v)) {
      r.status = SolveStatus::NoSolution;
      r.diagnostic = "x outside the range of the initial data";
      return r;
    }
    r.status = SolveStatus::Coalesced;
    r.u = {v, v, v};
    r.diagnostic = "t = 0: hodograph equations coincide on the diagonal";
    return r;
  }
  const Hodograph H(f, opt.nodes);
  return newton(H, x, t, seed, opt.tol, opt.max_iter).r;
}

// ---------------------------------------------------------------- field

namespace {

struct TracePoint {
  double x;
  Triple u;
};

class ZoneTracer {
 public:
  ZoneTracer(const Hodograph& H, double t) : H_(H), t_(t) {}

  // (u1, u3) with u2 fixed such that the three hodograph equations share x
  bool correct(double u2, double& u1, double& u3) const {
    auto G = [&](double a, double b, bool& ok) {
      const Triple u{a, u2, b};
      ok = H_.valid(u);
      if (!ok) return Eigen::Vector2d(0, 0);
      const Triple g = H_.G(u, t_);
      return Eigen::Vector2d(g[0] - g[2], g[1] - g[2]);
    };
    bool ok;
    Eigen::Vector2d r = G(u1, u3, ok);
    if (!ok) return false;
    const double scale = std::max(1.0, std::abs(u3));
    for (int it = 0; it < 40; ++it) {
      if (r.cwiseAbs().maxCoeff() < 1e-12 * scale) return true;
      const double h = H_.step({u1, u2, u3});
      Eigen::Matrix2d J;
      bool ok1, ok3;
      const Eigen::Vector2d r1 = G(u1 + h, u3, ok1), r3 = G(u1, u3 + h, ok3);
      if (!ok1 || !ok3) return false;
      J.col(0) = (r1 - r) / h;
      J.col(1) = (r3 - r) / h;
      if (std::abs(J.determinant()) < 1e-300) return false;
      const Eigen::Vector2d d = J.partialPivLu().solve(-r);
      double lam = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 30; ++ls, lam *= 0.5) {
        const double a = u1 + lam * d(0), b = u3 + lam * d(1);
        const Eigen::Vector2d rn = G(a, b, ok);
        if (ok && rn.cwiseAbs().maxCoeff() < r.cwiseAbs().maxCoeff()) {
          u1 = a;
          u3 = b;
          r = rn;
          moved = true;
          break;
        }
      }
      if (!moved) return r.cwiseAbs().maxCoeff() < 1e-10 * scale;
    }
    return false;
  }

  double x_of(const Triple& u) const { return H_.G(u, t_)[2]; }

  // walk u2 towards both coalescence edges
  std::vector<TracePoint> trace(Triple seed) const {
    std::vector<TracePoint> pts{{x_of(seed), seed}};
    for (int dir : {+1, -1}) {
      std::vector<Triple> branch{seed};
      double step = 0.05 * (seed[2] - seed[0]);
      while (step > 1e-14) {
        const Triple& last = branch.back();
        const double gap = dir > 0 ? last[2] - last[1] : last[1] - last[0];
        if (gap < 1e-7 * (last[2] - last[0])) break;
        const double s = std::min(step, 0.5 * gap);
        const double u2 = last[1] + dir * s;
        double u1 = last[0], u3 = last[2];
        if (branch.size() >= 2) {
          const Triple& prev = branch[branch.size() - 2];
          const double ds = last[1] - prev[1];
          u1 += (last[0] - prev[0]) / ds * (u2 - last[1]);
          u3 += (last[2] - prev[2]) / ds * (u2 - last[1]);
        }
        if (u1 >= u2 || u3 <= u2 || !correct(u2, u1, u3) || !(u1 < u2 && u2 < u3)) {
          step *= 0.5;
          continue;
        }
        branch.push_back({u1, u2, u3});
        pts.push_back({x_of(branch.back()), branch.back()});
        step = std::min(1.5 * step, 0.05 * (u3 - u1));
      }
    }
    std::sort(pts.begin(), pts.end(), [](const TracePoint& a, const TracePoint& b) { return a.x < b.x; });
    return pts;
  }

  // t13 = t23 on (u1, u3) fixed; NaN if no crossing
  double middle(double u1, double u3) const {
    auto D = [&](double u2) {
      const Triple u{u1, u2, u3};
      Triple C;
      const Triple g = H_.G(u, 0.0, &C);
      return (g[0] - g[2]) / (C[2] - C[0]) - (g[1] - g[2]) / (C[2] - C[1]);
    };
    const int n = 24;
    const double h = (u3 - u1) / n;
    double a = u1 + 1e-3 * h, fa = D(a);
    for (int k = 1; k <= n; ++k) {
      const double b = k == n ? u3 - 1e-3 * h : u1 + k * h, fb = D(b);
      if (std::isfinite(fa) && std::isfinite(fb) && fa * fb < 0) return toms748(D, a, b);
      a = b;
      fa = fb;
    }
    return kNaN;
  }

  // bracketed search with u3 fixed: returns a point on the zone curve
  bool scan(double u3, double u1_lo, Triple& out) const {
    auto T = [&](double u1) {
      const double u2 = middle(u1, u3);
      if (std::isnan(u2)) return kNaN;
      const Triple u{u1, u2, u3};
      Triple C;
      const Triple g = H_.G(u, 0.0, &C);
      return (g[0] - g[2]) / (C[2] - C[0]) - t_;
    };
    const int n = 24;
    const double h = (u3 - u1_lo) / n;
    double a = u1_lo, fa = T(a);
    for (int k = 1; k < n; ++k) {
      const double b = u1_lo + k * h, fb = T(b);
      if (std::isfinite(fa) && std::isfinite(fb) && fa * fb < 0) {
        const double u1 = toms748([&](double v) { const double r = T(v); return std::isnan(r) ? fa : r; }, a, b);
        const double u2 = middle(u1, u3);
        if (std::isnan(u2)) return false;
        out = {u1, u2, u3};
        return true;
      }
      a = b;
      fa = fb;
    }
    return false;
  }

 private:
  const Hodograph& H_;
  double t_;
};

// genus-zero branch x = 3 u t + f(u), tabulated per slice
class Dispersionless {
 public:
  Dispersionless(const InitialData& f, double t) : f_(f), t_(t) {
    lo_ = std::max(f.lo(), 0.0);
    const int n = 4000;
    for (int k = 0; k <= n; ++k) {
      const double u = lo_ + (f.hi() - lo_) * k / n;
      u_.push_back(u);
      X_.push_back(X(u));
    }
  }
  double X(double u) const { return 3.0 * u * t_ + f_(u); }
  double dX(double u) const { return 3.0 * t_ + f_.prime(u); }

  std::vector<double> roots(double x) const {
    std::vector<double> r;
    for (size_t k = 0; k + 1 < u_.size(); ++k) {
      const double a = X_[k] - x, b = X_[k + 1] - x;
      if (a == 0.0) r.push_back(u_[k]);
      else if (a * b < 0) r.push_back(toms748([&](double v) { return X(v) - x; }, u_[k], u_[k + 1]));
    }
    if (X_.back() == x) r.push_back(u_.back());
    return r;
  }

  // fold: interval where X increases (f decreasing)
  bool fold(double& ua, double& ub) const {
    size_t best = 0, len = 0;
    for (size_t k = 0; k + 1 < u_.size();) {
      if (X_[k + 1] > X_[k]) {
        size_t e = k;
        while (e + 1 < u_.size() && X_[e + 1] > X_[e]) ++e;
        if (e - k > len) {
          len = e - k;
          best = k;
        }
        k = e + 1;
      } else {
        ++k;
      }
    }
    if (len < 2) return false;
    ua = u_[best];
    ub = u_[best + len];
    return true;
  }

  // root of 3 u t + f(u) = x nearest u, by Newton; NaN if it leaves the domain
  static double near(const InitialData& f, double t, double x, double u) {
    for (int it = 0; it < 60; ++it) {
      const double d = (3.0 * u * t + f(u) - x) / (3.0 * t + f.prime(u));
      u -= d;
      if (!(u >= std::max(f.lo(), 0.0) && u <= f.hi())) return kNaN;
      if (std::abs(d) < 1e-15 * (1.0 + std::abs(u))) return u;
    }
    return u;
  }

 private:
  const InitialData& f_;
  double t_, lo_;
  std::vector<double> u_, X_;
};

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* e = std::getenv("WHITHAM_CH_THREADS")) {
    const int n = std::atoi(e);
    if (n > 0) return n;
  }
  return 1;
}

Triple interpolate(const std::vector<TracePoint>& tr, double x) {
  auto it = std::lower_bound(tr.begin(), tr.end(), x, [](const TracePoint& p, double v) { return p.x < v; });
  if (it == tr.begin()) return tr.front().u;
  if (it == tr.end()) return tr.back().u;
  const TracePoint& b = *it;
  const TracePoint& a = *(it - 1);
  const double s = (x - a.x) / (b.x - a.x);
  Triple u;
  for (int i = 0; i < 3; ++i) u[i] = a.u[i] + s * (b.u[i] - a.u[i]);
  return u;
}

}  // namespace

ModulationSolution solve_field(const InitialData& f, const std::vector<double>& xs, const std::vector<double>& ts,
                               const FieldOptions& opt) {
  if (opt.nu != 0.0) throw DomainError("hodograph solver is restricted to nu = 0");
  if (f.direction() == 0) throw DomainError("initial data must be strictly monotone");
  for (size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw DomainError("x grid must be increasing");
  for (size_t i = 1; i < ts.size(); ++i)
    if (!(ts[i] > ts[i - 1])) throw DomainError("t grid must be increasing");
  for (double t : ts)
    if (t < 0) throw DomainError("t grid must be non-negative");

  ModulationSolution sol;
  sol.nodes = opt.nodes;
  if (xs.empty() || ts.empty()) return sol;
  const Hodograph H(f, opt.nodes);
  const int nthreads = thread_count(opt.threads);
  const double hfd = opt.fd_step;
  std::optional<Triple> carry;  // zone point from the previous slice

  sol.points.resize(xs.size() * ts.size());
  for (size_t it = 0; it < ts.size(); ++it) {
    const double t = ts[it];
    const Dispersionless D(f, t);
    ZoneEdges Z;
    Z.t = t;
    std::vector<TracePoint> tr;

    double ua, ub;
    if (t > 0 && D.fold(ua, ub)) {
      const ZoneTracer zt(H, t);
      Triple seed{};
      bool have = false;
      if (carry) {
        double u1 = (*carry)[0], u3 = (*carry)[2];
        if (zt.correct((*carry)[1], u1, u3) && u1 < (*carry)[1] && (*carry)[1] < u3) {
          seed = {u1, (*carry)[1], u3};
          have = true;
        }
      }
      if (!have) {
        const double xm = 0.5 * (D.X(ua) + D.X(ub));
        const std::vector<double> r = D.roots(xm);
        if (r.size() >= 3) {
          double u1 = r.front(), u3 = r.back();
          if (zt.correct(r[1], u1, u3) && u1 < r[1] && r[1] < u3) {
            seed = {u1, r[1], u3};
            have = true;
          }
          const double span = r.back() - r.front();
          for (double s : {0.0, 0.1, -0.1, 0.25, 0.5}) {
            if (have) break;
            const double u3c = r.back() + s * span;
            if (u3c <= r[1] || u3c > f.hi()) continue;
            have = zt.scan(u3c, std::max({f.lo(), r.front() - span, 1e-9 * span}), seed);
          }
        }
      }
      if (have) {
        tr = zt.trace(seed);
        if (tr.size() >= 3) {
          Z.open = true;
          Z.x_left = tr.front().x;
          Z.x_right = tr.back().x;
          Z.u_left = tr.front().u;
          Z.u_right = tr.back().u;
          carry = tr[tr.size() / 2].u;
        }
      }
    }
    sol.zones.push_back(Z);

    auto work = [&](size_t ix) {
      const double x = xs[ix];
      FieldPoint& P = sol.points[it * xs.size() + ix];
      P.x = x;
      P.t = t;
      P.residual = kNaN;
      P.interior = ix > 0 && ix + 1 < xs.size() && it > 0 && it + 1 < ts.size();
      if (Z.open && x > Z.x_left && x < Z.x_right) {
        const Triple seed = interpolate(tr, x);
        const NewtonOut n = newton(H, x, t, seed, 1e-9, 40);
        if (n.r.status != SolveStatus::Solved) {
          P.status = PointStatus::Failed;
          P.u = {kNaN, kNaN, kNaN};
          return;
        }
        P.u = n.r.u;
        const double dev = std::max({std::abs(P.u[0] - seed[0]), std::abs(P.u[1] - seed[1]),
                                     std::abs(P.u[2] - seed[2])});
        P.status = dev > 0.05 * (seed[2] - seed[0]) ? PointStatus::MultiValued : PointStatus::Genus1;
        if (!P.interior) return;
        // u_x = J^{-1} 1, u_t = -J^{-1} C as predictors
        Triple C;
        H.G(P.u, t, &C);
        const auto lu = n.J.partialPivLu();
        const Eigen::Vector3d ux = lu.solve(Eigen::Vector3d(1, 1, 1));
        const Eigen::Vector3d ut = lu.solve(-Eigen::Vector3d(C[0], C[1], C[2]));
        // central differences at h and 2h, Richardson-combined
        Triple v[8];
        const double dx[8] = {hfd, -hfd, 0, 0, 2 * hfd, -2 * hfd, 0, 0};
        const double dt[8] = {0, 0, hfd, -hfd, 0, 0, 2 * hfd, -2 * hfd};
        for (int k = 0; k < 8; ++k) {
          for (int i = 0; i < 3; ++i) v[k][i] = P.u[i] + dx[k] * ux(i) + dt[k] * ut(i);
          if (!resolve(H, n.J, x + dx[k], t + dt[k], v[k])) return;
        }
        double r = 0.0;
        for (int i = 0; i < 3; ++i) {
          const double dx1 = (v[0][i] - v[1][i]) / (2 * hfd), dx2 = (v[4][i] - v[5][i]) / (4 * hfd);
          const double dt1 = (v[2][i] - v[3][i]) / (2 * hfd), dt2 = (v[6][i] - v[7][i]) / (4 * hfd);
          r = std::max(r, std::abs((4 * dt1 - dt2) / 3 + C[i] * (4 * dx1 - dx2) / 3));
        }
        P.residual = r;
        return;
      }
      const std::vector<double> r = D.roots(x);
      if (r.empty()) {
        P.status = PointStatus::OutsideDomain;
        P.u = {kNaN, kNaN, kNaN};
        return;
      }
      double u;
      if (r.size() == 1) u = r[0];
      else if (Z.open) u = x <= Z.x_left ? r.back() : r.front();
      else u = x <= 0.5 * (D.X(r.front()) + D.X(r.back())) ? r.back() : r.front();
      P.u = {u, u, u};
      P.status = PointStatus::Genus0;
      if (!P.interior) return;
      const double a = Dispersionless::near(f, t, x + hfd, u), b = Dispersionless::near(f, t, x - hfd, u);
      const double c = Dispersionless::near(f, t + hfd, x, u), d = Dispersionless::near(f, t - hfd, x, u);
      if (std::isnan(a) || std::isnan(b) || std::isnan(c) || std::isnan(d)) return;
      P.residual = std::abs((c - d) / (2 * hfd) + 3.0 * u * (a - b) / (2 * hfd));
    };

    if (nthreads <= 1) {
      for (size_t ix = 0; ix < xs.size(); ++ix) work(ix);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < nthreads; ++w)
        pool.emplace_back([&, w] {
          for (size_t ix = w; ix < xs.size(); ix += nthreads) work(ix);
        });
      for (auto& th : pool) th.join();
    }

    double prev_u3 = kNaN;
    bool up = false, down = false;
    for (size_t ix = 0; ix < xs.size(); ++ix) {
      const FieldPoint& P = sol.points[it * xs.size() + ix];
      const bool inside = Z.open && P.x > Z.x_left && P.x < Z.x_right;
      if (inside && P.interior) {
        ++sol.attempted;
        if (P.status == PointStatus::Genus1 && P.residual < opt.pde_tol) {
          ++sol.passed;
          sol.max_residual = std::max(sol.max_residual, P.residual);
        }
      }
      if (inside && P.status == PointStatus::Genus1) {
        if (P.u[2] > prev_u3) up = true;
        if (P.u[2] < prev_u3) down = true;
        prev_u3 = P.u[2];
      }
    }
    if (up && down) ++sol.u3_nonmonotone_slices;
  }
  return sol;
}

void write_csv(std::ostream& os, const ModulationSolution& s) {
  os << "x,t,u1,u2,u3,residual,status\n";
  os << std::setprecision(17);
  for (const FieldPoint& p : s.points)
    os << p.x << ',' << p.t << ',' << p.u[0] << ',' << p.u[1] << ',' << p.u[2] << ',' << p.residual << ','
       << to_string(p.status) << '\n';
}

}  // namespace whitham
