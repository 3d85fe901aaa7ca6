// whitham-ch: command-line front end for the Camassa-Holm modulation library.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "whitham/ch_modulation.hpp"
#include "whitham/errors.hpp"
#include "whitham/hodograph.hpp"
#include "whitham/kdv_modulation.hpp"
#include "whitham/metric_geometry.hpp"
#include "whitham/reciprocal.hpp"

using json = nlohmann::ordered_json;
using namespace whitham;

namespace {

// ------------------------------------------------------------------ output

std::string num(double v, int digits) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void dump_json(std::ostream& os, const json& j, int level) {
  const std::string pad(2 * level, ' '), pad1(2 * (level + 1), ' ');
  if (j.is_object()) {
    if (j.empty()) { os << "{}"; return; }
    os << "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) os << ",\n";
      first = false;
      os << pad1 << json(it.key()).dump() << ": ";
      dump_json(os, it.value(), level + 1);
    }
    os << "\n" << pad << "}";
  } else if (j.is_array()) {
    const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
    if (j.empty()) { os << "[]"; return; }
    if (flat) {
      os << "[";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) os << ", ";
        dump_json(os, j[i], level + 1);
      }
      os << "]";
      return;
    }
    os << "[\n";
    for (size_t i = 0; i < j.size(); ++i) {
      if (i) os << ",\n";
      os << pad1;
      dump_json(os, j[i], level + 1);
    }
    os << "\n" << pad << "]";
  } else if (j.is_number_float()) {
    const double v = j.get<double>();
    os << (std::isfinite(v) ? num(v, 17) : "null");
  } else {
    os << j.dump();
  }
}

std::string cell(const json& j) {
  if (j.is_number_float()) return num(j.get<double>(), 10);
  if (j.is_string()) return j.get<std::string>();
  if (j.is_array()) {
    std::string s;
    for (size_t i = 0; i < j.size(); ++i) s += (i ? " " : "") + cell(j[i]);
    return s;
  }
  if (j.is_null()) return "-";
  return j.dump();
}

void dump_text(std::ostream& os, const json& j, const std::string& title) {
  std::vector<std::pair<std::string, std::string>> scalars;
  std::vector<std::pair<std::string, const json*>> nested;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& v = it.value();
    const bool table = v.is_array() && !v.empty() && v[0].is_object();
    if (v.is_object() || table) nested.emplace_back(it.key(), &v);
    else scalars.emplace_back(it.key(), cell(v));
  }
  if (!title.empty()) os << "\n[" << title << "]\n";
  size_t w = 0;
  for (auto& [k, v] : scalars) w = std::max(w, k.size());
  for (auto& [k, v] : scalars) os << k << std::string(w - k.size() + 2, ' ') << v << "\n";
  for (auto& [k, v] : nested) {
    const std::string name = title.empty() ? k : title + "." + k;
    if (v->is_object()) {
      dump_text(os, *v, name);
      continue;
    }
    std::vector<std::string> cols;
    for (auto it = (*v)[0].begin(); it != (*v)[0].end(); ++it) cols.push_back(it.key());
    std::vector<std::vector<std::string>> rows;
    for (const json& r : *v) {
      std::vector<std::string> row;
      for (auto& c : cols) row.push_back(r.contains(c) ? cell(r[c]) : "-");
      rows.push_back(row);
    }
    std::vector<size_t> width(cols.size());
    for (size_t c = 0; c < cols.size(); ++c) {
      width[c] = cols[c].size();
      for (auto& r : rows) width[c] = std::max(width[c], r[c].size());
    }
    os << "\n[" << name << "]\n";
    auto line = [&](const std::vector<std::string>& r) {
      for (size_t c = 0; c < cols.size(); ++c)
        os << r[c] << (c + 1 < cols.size() ? std::string(width[c] - r[c].size() + 2, ' ') : "\n");
    };
    line(cols);
    for (auto& r : rows) line(r);
  }
}

void dump_csv(std::ostream& os, const json& j, const std::string& prefix) {
  if (prefix.empty()) os << "key,value\n";
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    const json& v = it.value();
    if (v.is_object()) {
      dump_csv(os, v, key);
    } else if (v.is_array()) {
      for (size_t i = 0; i < v.size(); ++i) {
        const std::string k = key + "." + std::to_string(i);
        if (v[i].is_structured()) dump_csv(os, v[i], k);
        else os << k << "," << (v[i].is_number_float() ? num(v[i].get<double>(), 17) : cell(v[i])) << "\n";
      }
    } else {
      os << key << "," << (v.is_number_float() ? num(v.get<double>(), 17) : cell(v)) << "\n";
    }
  }
}

void emit(const json& report, const std::string& format, std::ostream& os) {
  if (format == "json") {
    dump_json(os, report, 0);
    os << "\n";
  } else if (format == "csv") {
    dump_csv(os, report, "");
  } else {
    dump_text(os, report, "");
  }
}

json triple(const Triple& t) { return json::array({t[0], t[1], t[2]}); }

// ------------------------------------------------------------------ config

struct Job {
  std::string command;
  double nu = 0.0;
  std::vector<double> u, beta, lambdas{0.5, 1.0, 3.0};
  std::string format = "text";
  std::string out, data, xgrid = "-2:2:200", tgrid = "0:1:50";
  int nodes = 64, threads = 0;
  std::vector<std::string> tol_overrides;
  std::map<std::string, double> tol;
};

std::vector<double> parse_grid(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw DomainError("grid must be a:b:n, got '" + s + "'");
  const double a = std::stod(parts[0]), b = std::stod(parts[1]);
  const int n = std::stoi(parts[2]);
  if (n < 1) throw DomainError("grid point count must be positive");
  if (n > 1 && !(b > a)) throw DomainError("grid requires b > a");
  std::vector<double> g;
  for (int i = 0; i < n; ++i) g.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  return g;
}

Triple as_triple(const std::vector<double>& v, const char* name) {
  if (v.size() != 3) throw DomainError(std::string(name) + " needs exactly three values");
  return {v[0], v[1], v[2]};
}

double tol(const Job& job, const std::string& check, double dflt) {
  auto it = job.tol.find(check);
  return it == job.tol.end() ? dflt : it->second;
}

// ------------------------------------------------------------------ commands

json cmd_speeds(const Job& job) {
  const ChCurve c(job.nu, as_triple(job.u, "--u"));
  const SpeedRoutes r = speed_routes(c);
  const ChSpeeds s = speeds(c);
  const WavenumberPaths kp = wavenumber_paths(c);
  json j;
  j["schema"] = 1;
  j["command"] = "speeds";
  j["nu"] = c.nu();
  j["u"] = triple(c.u());
  j["k"] = wavenumber(c);
  j["omega"] = frequency(c);
  j["C"] = triple(s.C);
  j["routes"] = {{"elliptic", triple(r.elliptic)},
                 {"differential", triple(r.differential)},
                 {"finite_difference", triple(r.finite_difference)},
                 {"delta_elliptic_differential", r.delta_elliptic_differential},
                 {"delta_finite_difference", r.delta_finite_difference},
                 {"delta_wavenumber", kp.delta}};
  return j;
}

json cmd_geometry(const Job& job) {
  const ChCurve c(job.nu, as_triple(job.u, "--u"));
  json j;
  j["schema"] = 1;
  j["command"] = "geometry";
  j["nu"] = c.nu();
  j["u"] = triple(c.u());
  json rows = json::array();
  for (int e = 0; e <= 3; ++e) {
    const CurvatureReport rep = curvature(c, e);
    const CMatrix rf = rotation_coefficients_fd(c, e);
    double rdelta = 0.0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        if (a != b) rdelta = std::max(rdelta, std::abs(rep.r[a][b] - rf[a][b]));
    rows.push_back({{"exponent", e},
                    {"metric", triple(metric(c, e))},
                    {"R12", rep.R.sectional[0][1]},
                    {"R13", rep.R.sectional[0][2]},
                    {"R23", rep.R.sectional[1][2]},
                    {"expected", triple({expected_sectional(c, e, 0, 1), expected_sectional(c, e, 0, 2),
                                         expected_sectional(c, e, 1, 2)})},
                    {"deviation", curvature_deviation(c, rep, e)},
                    {"egorov_defect", rep.egorov_defect},
                    {"imag_residual", rep.imag_residual},
                    {"rotation_fd_delta", rdelta},
                    {"tsarev", tsarev_check(c, e)}});
  }
  j["metrics"] = rows;
  json pen = json::array();
  for (const PencilResult& p : pencil_check(c, job.lambdas))
    pen.push_back({{"lambda", p.lambda},
                   {"degenerate", p.degenerate},
                   {"contravariant", p.contravariant_residual},
                   {"covariant", p.covariant_residual}});
  j["pencil"] = pen;
  const AffinorReport a = affinor_sign(c);
  j["affinor"] = {{"sign", a.sign}, {"plus_residual", a.plus_residual}, {"minus_residual", a.minus_residual}};
  return j;
}

json cmd_kdv(const Job& job) {
  Triple b = as_triple(job.beta, "--beta");
  std::sort(b.begin(), b.end(), std::greater<>());
  const KdvCurve k = kdv_curve(b);
  const KdvCycleCheck cc = kdv_cycle_check(k);
  const KdvHamiltonians H = kdv_hamiltonians(k, job.nu);
  json j;
  j["schema"] = 1;
  j["command"] = "kdv";
  j["nu"] = job.nu;
  j["beta"] = triple(k.beta);
  j["alpha0"] = k.alpha0;
  j["alpha1"] = k.alpha1;
  j["J0"] = k.J0;
  j["k"] = kdv_wavenumber(k);
  j["omega"] = kdv_frequency(k);
  j["neg_speeds"] = triple(neg_speeds(k));
  j["neg_speeds_fd"] = triple(neg_speeds_fd(k));
  j["pos_speeds"] = triple(pos_speeds(k));
  j["cycle"] = {{"dp_period", cc.dp_period},
                {"lambda0_period", cc.lambda0_period},
                {"J0_delta", cc.J0_delta},
                {"alpha0_delta", cc.alpha0_delta},
                {"alpha1_delta", cc.alpha1_delta}};
  j["hamiltonians"] = {{"H0", H.H0},
                       {"H0_abelian", H.H0_abelian},
                       {"H0_wave", H.H0_wave},
                       {"H_neg", triple(H.Hneg)},
                       {"H_neg3_unit_weight", H.Hneg3_unit},
                       {"N", H.N},
                       {"N_gradient", H.N_gradient}};
  json rows = json::array();
  for (int e = 0; e <= 3; ++e)
    rows.push_back({{"slot", e + 1},
                    {"metric", triple(kdv_metric(k, e))},
                    {"expected", triple({kdv_expected_sectional(k, e, 0, 1), kdv_expected_sectional(k, e, 0, 2),
                                         kdv_expected_sectional(k, e, 1, 2)})},
                    {"deviation", kdv_curvature_deviation(k, e)}});
  j["metrics"] = rows;
  return j;
}

json cmd_reciprocal(const Job& job) {
  const ChCurve c(job.nu, as_triple(job.u, "--u"));
  const ReciprocalPair p = pair(c);
  const VelocityIdentity v = velocity_identity(p);
  const CasimirRelations cr = casimir_relations(p);
  const TildeDensities tk = tilde_densities_kdv(p), tc = tilde_densities_ch(c);
  json j;
  j["schema"] = 1;
  j["command"] = "reciprocal";
  j["nu"] = c.nu();
  j["u"] = triple(c.u());
  j["beta"] = triple(p.kdv.beta);
  j["H0"] = p.H0;
  j["H0_abelian"] = p.H.H0_abelian;
  j["H0_wave"] = p.H.H0_wave;
  j["N"] = p.N;
  j["N_gradient"] = p.H.N_gradient;
  j["velocity"] = {{"C", triple(v.C)},
                   {"C_tilde", triple(v.C_tilde)},
                   {"v_H0_plus_N", triple(v.v_H0_N)},
                   {"delta_coordinates", v.delta_coordinates},
                   {"delta_identity", v.delta_identity}};
  json mc = json::array();
  for (int e = 0; e <= 3; ++e) mc.push_back({{"exponent", e}, {"delta", metric_correspondence(p, e)}});
  j["metric_correspondence"] = mc;
  j["densities"] = {{"kdv_route", {tk.h_neg1, tk.h0, tk.h1, tk.h2}}, {"ch_route", {tc.h_neg1, tc.h0, tc.h1, tc.h2}}};
  j["casimir"] = {{"h_neg1_delta", cr.h_neg1_delta},
                  {"h0_relation", cr.h0_relation},
                  {"h1_relation", cr.h1_relation},
                  {"h2_relation", cr.h2_relation},
                  {"h2_relation_three_quarter_weight", cr.h2_relation_3_4}};
  return j;
}

json cmd_table(const Job& job) {
  const ChCurve c(job.nu, as_triple(job.u, "--u"));
  const ReciprocalPair p = pair(c);
  json j;
  j["schema"] = 1;
  j["command"] = "table";
  j["nu"] = c.nu();
  j["u"] = triple(c.u());
  j["beta"] = triple(p.kdv.beta);
  j["H0"] = p.H0;
  json rows = json::array();
  for (const Table1Row& r : table1(p, tol(job, "table", 1e-4)))
    rows.push_back({{"side", r.side == Side::KdV ? "KdV" : "CH"},
                    {"slot", r.slot},
                    {"R12_R13_R23", triple(r.curvature)},
                    {"expected", triple(r.expected)},
                    {"deviation", r.deviation},
                    {"hamiltonian", r.hamiltonian_formula},
                    {"value", r.hamiltonian},
                    {"casimir_shift", r.casimir_shift},
                    {"ok", r.ok}});
  j["rows"] = rows;
  return j;
}

InitialData load_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open initial data file '" + path + "'");
  json d;
  try {
    in >> d;
  } catch (const std::exception& e) {
    throw DomainError("initial data file is not valid JSON: " + std::string(e.what()));
  }
  if (d.is_object() && d.contains("samples")) d = d["samples"];
  if (!d.is_array()) throw DomainError("initial data must be a JSON array of (u, x) pairs");
  std::vector<std::pair<double, double>> s;
  for (const auto& e : d) {
    if (e.is_array() && e.size() == 2) s.emplace_back(e[0].get<double>(), e[1].get<double>());
    else if (e.is_object()) s.emplace_back(e.at("u").get<double>(), e.at("x").get<double>());
    else throw DomainError("initial data entries must be [u, x] or {\"u\":..,\"x\":..}");
  }
  return InitialData::from_samples(std::move(s));
}

json cmd_solve(const Job& job) {
  if (job.nu != 0.0) throw DomainError("solve: the hodograph solver is restricted to nu = 0");
  if (job.data.empty()) throw DomainError("solve: --data is required");
  const InitialData f = load_data(job.data);
  const std::vector<double> xs = parse_grid(job.xgrid), ts = parse_grid(job.tgrid);
  FieldOptions opt;
  opt.nodes = job.nodes;
  opt.threads = job.threads;
  opt.pde_tol = tol(job, "pde", 1e-3);
  const ModulationSolution s = solve_field(f, xs, ts, opt);
  if (!job.out.empty()) {
    std::ofstream o(job.out);
    if (!o) throw DomainError("cannot write '" + job.out + "'");
    write_csv(o, s);
  } else if (job.format == "csv") {
    write_csv(std::cout, s);
    return json();
  }
  json j;
  j["schema"] = 1;
  j["command"] = "solve";
  j["points"] = s.points.size();
  j["nodes"] = s.nodes;
  j["attempted"] = s.attempted;
  j["passed"] = s.passed;
  j["max_residual"] = s.max_residual;
  j["u3_nonmonotone_slices"] = s.u3_nonmonotone_slices;
  std::map<std::string, int> counts;
  for (const FieldPoint& p : s.points) ++counts[to_string(p.status)];
  j["status_counts"] = counts;
  json z = json::array();
  for (const ZoneEdges& e : s.zones)
    if (e.open) z.push_back({{"t", e.t}, {"x_left", e.x_left}, {"x_right", e.x_right}});
  j["zones"] = z;
  if (!job.out.empty()) j["out"] = job.out;
  return j;
}

// ------------------------------------------------------------------ verify

struct Check {
  std::string name;
  double value = 0;
  double bound = 0;
  bool lower = false;  // pass if value > bound instead of value <= bound
  std::string error;
  bool pass() const { return error.empty() && (lower ? value > bound : value <= bound) && !std::isnan(value); }
};

class Suite {
 public:
  explicit Suite(const Job& job) : job_(job) {}

  template <class F>
  void run(const std::string& name, double bound, F&& f, bool lower = false) {
    Check c;
    c.name = name;
    c.bound = tol(job_, name, bound);
    c.lower = lower;
    try {
      c.value = f();
    } catch (const ConsistencyError& e) {
      c.value = e.residual();
      c.error = e.what();
    } catch (const std::exception& e) {
      c.value = std::nan("");
      c.error = e.what();
    }
    checks_.push_back(c);
  }

  const std::vector<Check>& checks() const { return checks_; }

 private:
  const Job& job_;
  std::vector<Check> checks_;
};

json cmd_verify(const Job& job, bool& failed) {
  const ChCurve c(job.nu, as_triple(job.u, "--u"));
  Suite S(job);
  S.run("speeds.elliptic_vs_differential", 1e-9, [&] { return speed_routes(c).delta_elliptic_differential; });
  S.run("speeds.elliptic_vs_finite_difference", 1e-5, [&] { return speed_routes(c).delta_finite_difference; });
  S.run("speeds.hyperbolicity_violation", 0.0, [&] {
    const Triple C = speeds_fast(c);
    return std::max({0.0, C[0] - C[2], C[1] - C[2]});
  });
  S.run("ch.numerator_sign_violation", 0.0, [&] {
    const CurveConstants k = closed_constants(c);
    const double a = Pnu(c, k, c.u(0)), b = Pnu(c, k, c.u(1)), d = Pnu(c, k, c.u(2));
    return std::max({0.0, P1(k, -c.nu()), a, -b, b - d});
  });
  S.run("ch.coalescence_C2_C3", 1e-3, [&] {
    const double v = 0.5 * (c.u(1) + c.u(2)), e = 1e-6 * (c.u(2) - c.u(0));
    const Triple C = speeds_fast(ChCurve(c.nu(), {c.u(0), v - e, v + e}));
    return std::abs(C[1] - C[2]) / std::max(1.0, std::abs(C[2]));
  });
  S.run("ch.coalescence_C1_C2", 1e-3, [&] {
    const double e = 1e-6 * (c.u(2) - c.u(0));
    const Triple C = speeds_fast(ChCurve(c.nu(), {c.u(0), c.u(0) + e, c.u(2)}));
    return std::abs(C[0] - C[1]) / std::max(1.0, std::abs(C[0]));
  });
  S.run("curve.gamma_vs_moments", 1e-6, [&] { return constants(c).gamma_moment_delta; });
  S.run("ch.wavenumber_paths", 1e-7, [&] { return wavenumber_paths(c).delta; });
  S.run("ch.density_h0_paths", 1e-9, [&] {
    const ChDensities d = densities(c);
    return std::abs(d.h0 - d.h0_direct);
  });
  S.run("ch.travelling_wave_C2", 1e-9, [&] {
    const TravelingWave w = traveling_wave(c);
    return std::abs(w.C2 - w.C2_expected) / std::abs(w.C2_expected);
  });
  for (int e = 0; e <= 3; ++e) {
    const std::string s = std::to_string(e);
    S.run("metric.curvature.e" + s, 1e-4, [&] { return curvature_deviation(c, curvature(c, e), e); });
    S.run("metric.egorov_defect.e" + s, 1e-3, [&] { return curvature(c, e).egorov_defect; }, true);
    S.run("metric.tsarev.e" + s, 1e-4, [&] { return tsarev_check(c, e); });
    S.run("metric.rotation_closed_vs_fd.e" + s, 1e-5, [&] {
      const CMatrix a = rotation_coefficients(c, e), b = rotation_coefficients_fd(c, e);
      double m = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          if (i != j) m = std::max(m, std::abs(a[i][j] - b[i][j]) / std::max(1.0, std::abs(a[i][j])));
      return m;
    });
  }
  S.run("metric.signature_violation", 0.0, [&] {
    const Triple g = metric(c, 0);
    return std::max({0.0, -g[0], g[1], -g[2]});
  });
  S.run("metric.pencil_contravariant", 1e-4, [&] {
    double m = 0.0;
    for (const PencilResult& p : pencil_check(c, job.lambdas))
      if (!p.degenerate) m = std::max(m, p.contravariant_residual);
    return m;
  });
  S.run("metric.affinor", 1e-4, [&] {
    const AffinorReport a = affinor_sign(c);
    return std::min(a.plus_residual, a.minus_residual);
  });
  std::optional<ReciprocalPair> p;
  S.run("reciprocal.pair", 0.0, [&] {
    p.emplace(pair(c));
    return 0.0;
  });
  if (p) {
    const KdvCurve& k = p->kdv;
    S.run("kdv.cycle_dp", 1e-12, [&] { return std::abs(kdv_cycle_check(k).dp_period); });
    S.run("kdv.cycle_lambda0", 1e-12, [&] { return std::abs(kdv_cycle_check(k).lambda0_period); });
    S.run("kdv.closed_forms", 1e-10, [&] {
      const KdvCycleCheck cc = kdv_cycle_check(k);
      return std::max({cc.J0_delta, cc.alpha0_delta, cc.alpha1_delta});
    });
    for (int e = 0; e <= 3; ++e)
      S.run("kdv.curvature.e" + std::to_string(e), 1e-4, [&] { return kdv_curvature_deviation(k, e); });
    S.run("kdv.neg_speeds_vs_fd", 1e-5, [&] {
      const Triple a = neg_speeds(k), b = neg_speeds_fd(k);
      double m = 0.0;
      for (int i = 0; i < 3; ++i) m = std::max(m, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(a[i])));
      return m;
    });
    S.run("kdv.H0_paths", 1e-8, [&] {
      return std::max(std::abs(p->H.H0_abelian - p->H0), std::abs(p->H.H0_wave - p->H0)) / std::abs(p->H0);
    });
    S.run("kdv.N_paths", 1e-7, [&] { return std::abs(p->H.N - p->H.N_gradient); });
    S.run("reciprocal.velocity_identity", 1e-8, [&] { return velocity_identity(*p).delta_identity; });
    for (int e = 0; e <= 3; ++e)
      S.run("reciprocal.metric_correspondence.e" + std::to_string(e), 1e-8,
            [&] { return metric_correspondence(*p, e); });
    S.run("reciprocal.casimir_h0", 1e-7, [&] { return std::abs(casimir_relations(*p).h0_relation); });
    S.run("reciprocal.casimir_h1", 1e-7, [&] { return std::abs(casimir_relations(*p).h1_relation); });
    S.run("reciprocal.casimir_h2", 1e-7, [&] { return std::abs(casimir_relations(*p).h2_relation); });
    S.run("reciprocal.table1", 1e-4, [&] {
      double m = 0.0;
      for (const Table1Row& r : table1(*p)) m = std::max(m, r.deviation);
      return m;
    });
  }
  // EPD kernel on cubic data over a range covering the curve
  const double hi = std::max(c.u(2), 1.0) + 1.0;
  const InitialData cubic =
      InitialData::from_function([](double v) { return v * v * v; }, [](double v) { return 3 * v * v; }, 0.0, hi);
  const Triple ue{0.25 * hi, 0.5 * hi, 0.75 * hi};
  S.run("hodograph.epd_system", 1e-4, [&] { return epd_residual(cubic, ue).system; });
  S.run("hodograph.epd_boundary", 1e-6, [&] { return epd_residual(cubic, ue).boundary; });
  S.run("hodograph.commuting_tsarev", 1e-3, [&] { return tsarev_residual(cubic, ue); });
  // field solve on fixed breaking data x = -(u-1)^3, independent of the curve
  std::optional<ModulationSolution> field;
  S.run("hodograph.field_unresolved_points", 0.0, [&] {
    const InitialData f = InitialData::from_function([](double v) { return -(v - 1) * (v - 1) * (v - 1); },
                                                     [](double v) { return -3 * (v - 1) * (v - 1); }, 0.01, 3);
    std::vector<double> xs(40), ts(8);
    for (int i = 0; i < 40; ++i) xs[i] = -0.5 + 1.5 * i / 39.0;
    for (int i = 0; i < 8; ++i) ts[i] = 0.2 * i / 7.0;
    FieldOptions o;
    o.threads = job.threads;
    field.emplace(solve_field(f, xs, ts, o));
    return static_cast<double>(field->attempted - field->passed);
  });
  if (field) S.run("hodograph.field_pde_residual", 1e-3, [&] { return field->max_residual; });

  json j;
  j["schema"] = 1;
  j["command"] = "verify";
  j["nu"] = c.nu();
  j["u"] = triple(c.u());
  json rows = json::array();
  int nfail = 0;
  for (const Check& ch : S.checks()) {
    json r = {{"check", ch.name},
              {"value", ch.value},
              {"bound", (ch.lower ? "> " : "<= ") + num(ch.bound, 3)},
              {"pass", ch.pass()}};
    if (!ch.error.empty()) r["error"] = ch.error;
    rows.push_back(r);
    if (!ch.pass()) ++nfail;
  }
  j["failures"] = nfail;
  j["checks"] = rows;
  failed = nfail > 0;
  return j;
}

void apply_config(Job& job, const std::string& path, const CLI::App& sub) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config '" + path + "'");
  json c;
  in >> c;
  auto unset = [&](const char* flag) {
    try {
      return sub.get_option(flag)->count() == 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  if (c.contains("nu") && unset("--nu")) job.nu = c["nu"].get<double>();
  if (c.contains("u") && unset("--u")) job.u = c["u"].get<std::vector<double>>();
  if (c.contains("beta") && unset("--beta")) job.beta = c["beta"].get<std::vector<double>>();
  if (c.contains("format") && unset("--format")) job.format = c["format"].get<std::string>();
  if (c.contains("out") && unset("--out")) job.out = c["out"].get<std::string>();
  if (c.contains("data") && unset("--data")) job.data = c["data"].get<std::string>();
  if (c.contains("xgrid") && unset("--xgrid")) job.xgrid = c["xgrid"].get<std::string>();
  if (c.contains("tgrid") && unset("--tgrid")) job.tgrid = c["tgrid"].get<std::string>();
  if (c.contains("nodes") && unset("--nodes")) job.nodes = c["nodes"].get<int>();
  if (c.contains("tolerances"))
    for (auto it = c["tolerances"].begin(); it != c["tolerances"].end(); ++it)
      if (!job.tol.count(it.key())) job.tol[it.key()] = it.value().get<double>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Whitham modulation of the Camassa-Holm equation"};
  app.require_subcommand(1);
  Job job;
  std::string config;

  auto curve_opts = [&](CLI::App* s) {
    s->add_option("--nu", job.nu, "nu >= 0")->check(CLI::NonNegativeNumber);
    s->add_option("--u", job.u, "u1,u2,u3 with -nu < u1 < u2 < u3")->delimiter(',')->expected(3);
  };
  auto common = [&](CLI::App* s) {
    s->add_option("--format", job.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
    s->add_option("--out", job.out, "write the report (solve: the CSV field) to this file");
    s->add_option("--config", config, "JSON job file; flags given on the command line take precedence");
    s->add_option("--tol", job.tol_overrides, "check=value tolerance override (repeatable)");
  };

  auto* sp = app.add_subcommand("speeds", "wave number, frequency and characteristic speeds");
  auto* ge = app.add_subcommand("geometry", "metrics, rotation coefficients, curvature, pencil");
  auto* kd = app.add_subcommand("kdv", "negative-KdV modulation data for beta1 > beta2 > beta3 > 0");
  auto* re = app.add_subcommand("reciprocal", "reciprocal map to the negative-KdV system");
  auto* ta = app.add_subcommand("table", "curvature and Hamiltonian table for both systems");
  auto* so = app.add_subcommand("solve", "hodograph field solve for nu = 0");
  auto* ve = app.add_subcommand("verify", "run every cross-check; nonzero exit on failure");
  for (auto* s : {sp, ge, re, ta, ve, so}) curve_opts(s);
  for (auto* s : {sp, ge, kd, re, ta, so, ve}) common(s);
  kd->add_option("--nu", job.nu, "nu for the Casimir shifts")->check(CLI::NonNegativeNumber);
  kd->add_option("--beta", job.beta, "beta1,beta2,beta3 > 0 (any order)")->delimiter(',')->expected(3);
  for (auto* s : {ge, ve}) s->add_option("--lambda", job.lambdas, "pencil parameters")->delimiter(',');
  so->add_option("--data", job.data, "JSON array of (u, x) samples");
  so->add_option("--xgrid", job.xgrid, "a:b:n");
  so->add_option("--tgrid", job.tgrid, "a:b:n");
  so->add_option("--nodes", job.nodes, "quadrature nodes per dimension")->check(CLI::Range(4, 1024));
  so->add_option("--threads", job.threads, "worker threads (default WHITHAM_CH_THREADS or 1)");

  CLI11_PARSE(app, argc, argv);
  CLI::App* sub = app.get_subcommands().front();
  job.command = sub->get_name();

  try {
    for (const std::string& t : job.tol_overrides) {
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw DomainError("--tol expects check=value");
      const double v = std::stod(t.substr(eq + 1));
      if (!(v > 0)) throw DomainError("tolerance '" + t + "' must be positive");
      job.tol[t.substr(0, eq)] = v;
    }
    if (!config.empty()) apply_config(job, config, *sub);

    json report;
    bool failed = false;
    if (job.command == "speeds") report = cmd_speeds(job);
    else if (job.command == "geometry") report = cmd_geometry(job);
    else if (job.command == "kdv") report = cmd_kdv(job);
    else if (job.command == "reciprocal") report = cmd_reciprocal(job);
    else if (job.command == "table") report = cmd_table(job);
    else if (job.command == "solve") report = cmd_solve(job);
    else report = cmd_verify(job, failed);

    if (!report.is_null()) {
      if (!job.out.empty() && job.command != "solve") {
        std::ofstream o(job.out);
        if (!o) throw DomainError("cannot write '" + job.out + "'");
        emit(report, job.format, o);
      } else {
        emit(report, job.format, std::cout);
      }
    }
    if (failed) {
      for (const auto& r : report["checks"])
        if (!r["pass"].get<bool>())
          std::cerr << "check failed: " << r["check"].get<std::string>() << " residual "
                    << cell(r["value"]) << "\n";
      return 3;
    }
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency check failed: " << e.check() << " residual " << num(e.residual(), 6) << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << " (estimate " << num(e.estimate(), 6) << ")\n";
    return 3;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
