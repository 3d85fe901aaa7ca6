#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "whitham/curve.hpp"

namespace whitham {

// Initial profile x = f(u) at t = 0, strictly monotone on [lo, hi].
class InitialData {
 public:
  // Samples (u, x) with u strictly increasing and x strictly monotone;
  // interpolated by a monotone piecewise cubic (PCHIP).
  static InitialData from_samples(std::vector<std::pair<double, double>> samples);
  static InitialData from_function(std::function<double(double)> f,
                                   std::function<double(double)> df, double lo, double hi);

  double operator()(double u) const { return f_(u); }
  double prime(double u) const { return df_(u); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  // +1 increasing, -1 decreasing, 0 constant (kernel tests only)
  int direction() const { return direction_; }
  // u with f(u) = x, or NaN outside the range of f
  double inverse(double x) const;

 private:
  std::function<double(double)> f_, df_;
  double lo_ = 0, hi_ = 0;
  int direction_ = 1;
};

struct EpdValue {
  double q = 0;
  Triple grad{};
  int nodes = 0;         // per dimension, after doubling
  double estimate = 0;   // |q(n) - q(n/2)|
};

// q(u) as a tensor Gauss-Jacobi double integral, normalized so q(u,u,u) = f(u);
// node count doubles from `nodes` until successive values agree to 1e-10
// relative (up to 1024).  The gradient is differentiated under the integral.
EpdValue epd_q(const InitialData& f, const Triple& u, int nodes = 64);

// Single evaluation with a fixed rule, no convergence check.
EpdValue epd_q_fixed(const InitialData& f, const Triple& u, int nodes);

struct EpdResidual {
  double system = 0;    // max_{i<j} |d_i q - d_j q - 2(u^i-u^j) d_i d_j q|
  double boundary = 0;  // max |q(v,v,v) - f(v)| over 20 diagonal points
};
EpdResidual epd_residual(const InitialData& f, const Triple& u);

struct CommutingSpeeds {
  Triple w{}, C{};
};
// w^i = q + (C^i - u1 - u2 - u3) d_i q on the nu = 0 curve.
CommutingSpeeds commuting_speeds(const InitialData& f, const Triple& u, int nodes = 64);
// max |d_j w^i / (w^i - w^j) - d_j C^i / (C^i - C^j)| over i != j.
double tsarev_residual(const InitialData& f, const Triple& u);

enum class SolveStatus { Solved, Coalesced, NoSolution, SingularJacobian, MaxIterations };
const char* to_string(SolveStatus s);

struct SolveOptions {
  double nu = 0;      // only 0 is supported
  double tol = 1e-9;  // on max |x - C^i t - w^i|
  int max_iter = 40;
  int nodes = 64;
};

struct SolveResult {
  SolveStatus status = SolveStatus::NoSolution;
  Triple u{};
  double residual = 0;
  int iterations = 0;
  std::string diagnostic;
};

// Newton iteration on x = C^i(u) t + w^i(u), i = 1..3, for the nu = 0 system
// u^i_t + C^i u^i_x = 0.  At t = 0 the three equations collapse onto the
// diagonal and the result is the coalesced point f^{-1}(x).
SolveResult solve(const InitialData& f, double x, double t, const Triple& seed,
                  const SolveOptions& opt = {});

enum class PointStatus { Genus1, Genus0, MultiValued, Failed, OutsideDomain };
const char* to_string(PointStatus s);

struct FieldPoint {
  double x = 0, t = 0;
  Triple u{};
  double residual = 0;  // FD residual of u_t + C u_x, NaN if not computed
  PointStatus status = PointStatus::Failed;
  bool interior = false;
};

struct ZoneEdges {
  double t = 0;
  bool open = false;  // oscillatory zone present
  double x_left = 0, x_right = 0;
  Triple u_left{}, u_right{};  // coalescing triples at the edges
};

struct ModulationSolution {
  std::vector<FieldPoint> points;  // t-major, x-minor
  std::vector<ZoneEdges> zones;    // one per t
  int nodes = 64;
  int attempted = 0;       // interior points inside a zone
  int passed = 0;          // of those: hodograph residual and PDE residual within bounds
  double max_residual = 0; // PDE residual over passed points
  // soft diagnostic: slices where u3 is not monotone in x inside the zone
  int u3_nonmonotone_slices = 0;
};

struct FieldOptions {
  double nu = 0;  // only 0 is supported
  int nodes = 64;
  double pde_tol = 1e-3;
  double fd_step = 1e-6;  // Richardson pair h, 2h
  int threads = 0;  // 0: WHITHAM_CH_THREADS or 1
};

// Hodograph solve on a tensor grid with zone tracing per time slice.
ModulationSolution solve_field(const InitialData& f, const std::vector<double>& xs,
                               const std::vector<double>& ts, const FieldOptions& opt = {});

// x,t,u1,u2,u3,residual,status
void write_csv(std::ostream& os, const ModulationSolution& s);

}  // namespace whitham
