#pragma once

// Verification suite: runs the checks enabled for each scenario, collects
// per-check records into a report and emits refinement tables.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "affgeo/certificate.hpp"
#include "affgeo/charts.hpp"
#include "affgeo/connections.hpp"
#include "affgeo/curvature.hpp"
#include "affgeo/harmonic.hpp"
#include "affgeo/hypersurface.hpp"
#include "affgeo/mesh.hpp"
#include "affgeo/parallel.hpp"
#include "affgeo/polynomial.hpp"
#include "affgeo/reilly.hpp"
#include "affgeo/scenario.hpp"
#include "affgeo/weights.hpp"

#ifndef AFFGEO_VERSION
#define AFFGEO_VERSION "unknown"
#endif

namespace affgeo {

struct CheckRecord {
  std::string id;
  std::string anchor;
  Json values = Json::object();
  Json thresholds = Json::object();
  bool pass = false;
  std::string error_kind;  // empty when the check ran to completion
  std::string error_message;
};

inline Json to_json(const CheckRecord& r) {
  Json j{{"id", r.id},
         {"anchor", r.anchor},
         {"values", r.values},
         {"thresholds", r.thresholds},
         {"pass", r.pass}};
  if (!r.error_kind.empty()) j["error"] = {{"kind", r.error_kind}, {"message", r.error_message}};
  return j;
}

struct ScenarioReport {
  Scenario scenario;
  std::vector<CheckRecord> checks;
  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
  }
};

struct Report {
  std::vector<ScenarioReport> scenarios;
  bool pass() const {
    return std::all_of(scenarios.begin(), scenarios.end(), [](const ScenarioReport& s) { return s.pass(); });
  }
};

inline Json to_json(const Report& r) {
  Json arr = Json::array();
  for (const auto& s : r.scenarios) {
    Json checks = Json::array();
    for (const auto& c : s.checks) checks.push_back(to_json(c));
    arr.push_back({{"scenario", to_json(s.scenario)}, {"checks", checks}, {"pass", s.pass()}});
  }
  return {{"environment", {{"version", AFFGEO_VERSION}, {"precision", "binary64"}}},
          {"scenarios", arr},
          {"pass", r.pass()}};
}

inline std::string report_text(const Report& r) { return to_json(r).dump(2) + "\n"; }

inline const char* check_anchor(const std::string& id) {
  if (id == "duality") return "X gbar(Y,Z) = gbar(D_X Y, Z) + gbar(Y, D*_X Z), gbar = e^{(alpha-beta)u} g";
  if (id == "statistical") return "D gbar totally symmetric and equal to -(alpha+beta) sym(du (x) gbar)";
  if (id == "equiaffine") return "D(V^tau dv_g) = 0 with tau = (n+1) alpha + beta";
  if (id == "curvature_oracles") return "Ric^D(0,1) = static Ricci; Ric^D(1/(n-1),0) = Ric_f^1 with f = -u";
  if (id == "weighted_ricci") return "Ric_f^N = Ric + Hess f - df (x) df / (N - n)";
  if (id == "curvature_scan") return "Ric^D >= K e^{(alpha-beta)u} g on the sample set";
  if (id == "d_minimal") return "H^D = H + (n-1) alpha u_nu = 0";
  if (id == "reilly") return "weighted Reilly formula for Delta^D";
  if (id == "choi_wang") return "lambda_1(Delta^D_Sigma) >= K/2 for D-minimal Sigma";
  if (id == "harmonic_extension") return "Delta^D phi = 0 in Omega, phi = psi on the boundary; intermediate quantity <= 0";
  if (id == "const_reduction") return "u constant: D = Levi-Civita, Ric^D = Ric";
  return "";
}

namespace suite_detail {

inline constexpr double kDualityTol = 1e-9;
inline constexpr double kSensitivityFloor = 1e-4;
inline constexpr double kStatisticalTol = 1e-10;
inline constexpr double kEquiaffineTol = 1e-9;
inline constexpr double kEquiaffineFloor = 1e-5;
inline constexpr double kOracleTol = 1e-9;
inline constexpr double kFrameTol = 1e-11;
inline constexpr double kConstTol = 1e-10;
inline constexpr double kRefinementOrder = 2.0;
inline constexpr double kHarmonicTol = 1e-6;
inline constexpr double kIntermediateTol = 1e-4;

template <int N>
ChartedManifold<N> build_chart(const Scenario& s) {
  ChartedManifold<N> base;
  if (s.chart.kind == "euclidean") {
    base = euclidean_chart<N>();
  } else if (s.chart.kind == "round-sphere") {
    base = round_sphere_chart<N>(s.chart.radius);
  } else if constexpr (N == 2) {
    base = stereographic_sphere_chart();
  } else {
    throw Error(ErrorKind::ConfigInvalid, "stereographic chart is two-dimensional");
  }
  return with_weight<N>(base, s.weight);
}

template <int N>
Vec<double, N> box_centre(const ChartedManifold<N>& m) {
  Vec<double, N> c;
  for (int i = 0; i < N; ++i) {
    const auto& a = m.box().axes[i];
    c[i] = 0.5 * (a.admissible_lower() + a.admissible_upper());
  }
  return c;
}

template <int N>
ScalarField<N> named_function(const std::string& name, const ChartedManifold<N>& m) {
  if (name == "chart-x") return ScalarField<N>([](const auto& x) { return x[0]; });
  if (name == "cubic") return ScalarField<N>([](const auto& x) { return x[0] * x[0] * x[1] - 0.5 * x[1] * x[1]; });
  if (name == "wave") return ScalarField<N>([](const auto& x) { return exp(0.3 * x[0]) * sin(x[1] + 0.2); });
  if (m.embedding().empty()) throw Error(ErrorKind::ConfigInvalid, "test function '" + name + "' needs an embedding");
  const ScalarField<N> z = m.embedding().back();
  if (name == "height") return z;
  const ScalarField<N> x = m.embedding()[0];
  return ScalarField<N>([x, z](const auto& p) { return z(p) + 0.1 * x(p); });
}

template <int N>
Hypersurface<N> build_hypersurface(const Scenario& s, const ChartedManifold<N>& m) {
  return latitude_hypersurface<N>(m, s.hypersurface.theta);
}

// Mesh of a latitude, in the embedding coordinates used by the weight families.
inline SurfaceMesh latitude_mesh(const Scenario& s, int level) {
  const double r = s.chart.radius * std::sin(s.hypersurface.theta);
  const double z = s.chart.radius * std::cos(s.hypersurface.theta);
  SurfaceMesh m = s.chart.dim == 2 ? circle_mesh(level, r, 3) : icosphere_mesh(level, r, 4);
  for (auto& v : m.vertices) v[m.embed_dim - 1] = z;
  return m;
}

inline DomainRegion<2> build_region(const Scenario& s, const ChartedManifold<2>& m) {
  const auto& r = s.region;
  return disk_region(m, {r.center[0], r.center[1]}, r.radius, r.order, r.cells);
}

template <class F>
double max_over(std::size_t count, int workers, F&& f) {
  const auto v = parallel_map<double>(count, workers, std::forward<F>(f));
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

template <int N>
double max_entry_diff(const Mat<double, N>& a, const Mat<double, N>& b) {
  double m = 0.0;
  for (int i = 0; i < N * N; ++i) m = std::max(m, std::abs(a.a[i] - b.a[i]));
  return m;
}

template <int N>
void run_duality(const Scenario& s, const ChartedManifold<N>& m, int workers, CheckRecord& r) {
  const auto pts = sample_points<N>(m, s.resolutions.sample_points);
  const auto triples = polynomial_triples<N>(s.resolutions.field_triples, box_centre<N>(m));
  ConnectionSpec bad = ConnectionSpec::dual(s.params);
  bad.perturbation = CoeffPerturbation{0, 0, 1, 0.01};
  const std::size_t total = pts.size() * triples.size();
  auto residual = [&](const ConnectionSpec& dual) {
    return max_over(total, workers, [&](std::size_t k) {
      const auto& t = triples[k / pts.size()];
      return duality_residual<N>(m, s.params, pts[k % pts.size()], t.X, t.Y, t.Z, dual);
    });
  };
  const double res = residual(ConnectionSpec::dual(s.params));
  const double pert = residual(bad);
  r.values = {{"max_residual", res}, {"perturbed_residual", pert}, {"samples", total}};
  r.thresholds = {{"max_residual", kDualityTol}, {"perturbed_residual_min", kSensitivityFloor}};
  r.pass = res <= kDualityTol && pert > kSensitivityFloor;
}

template <int N>
void run_statistical(const Scenario& s, const ChartedManifold<N>& m, int workers, CheckRecord& r) {
  const auto pts = sample_points<N>(m, s.resolutions.sample_points);
  struct Item {
    double asym, diff, size;
  };
  const auto items = parallel_map<Item>(pts.size(), workers, [&](std::size_t i) {
    const auto C = amari_chentsov<N>(m, s.params, pts[i]);
    const auto Cc = amari_chentsov_closed_form<N>(m, s.params, pts[i]);
    return Item{C.max_asymmetry(), C.max_abs_diff(Cc), C.max_abs()};
  });
  double asym = 0, diff = 0, size = 0;
  for (const auto& it : items) {
    asym = std::max(asym, it.asym);
    diff = std::max(diff, it.diff);
    size = std::max(size, it.size);
  }
  const bool vanishing = s.params.alpha + s.params.beta == 0.0;
  r.values = {{"max_asymmetry", asym}, {"max_closed_form_diff", diff}, {"max_abs", size}};
  r.thresholds = {{"max_asymmetry", kStatisticalTol}, {"max_closed_form_diff", kStatisticalTol}};
  if (vanishing) r.thresholds["max_abs"] = kStatisticalTol;
  r.pass = asym <= kStatisticalTol && diff <= kStatisticalTol && (!vanishing || size <= kStatisticalTol);
}

template <int N>
void run_equiaffine(const Scenario& s, const ChartedManifold<N>& m, int workers, CheckRecord& r) {
  const auto pts = sample_points<N>(m, s.resolutions.sample_points);
  const auto X = polynomial_triples<N>(1, box_centre<N>(m)).front().X;
  auto residual = [&](double e) {
    return max_over(pts.size(), workers, [&](std::size_t i) { return equiaffine_residual<N>(m, s.params, pts[i], X, e); });
  };
  const double tau = s.params.tau(N);
  const double res = residual(tau);
  const double pert = std::min(residual(tau + 0.1), residual(tau - 0.1));
  const bool weighted = !s.weight.is_constant();
  r.values = {{"tau", tau}, {"max_residual", res}, {"perturbed_residual", pert}};
  r.thresholds = {{"max_residual", kEquiaffineTol}};
  if (weighted) r.thresholds["perturbed_residual_min"] = kEquiaffineFloor;
  r.pass = res <= kEquiaffineTol && (!weighted || pert > kEquiaffineFloor);
}

template <int N>
void run_curvature_oracles(const Scenario& s, const ChartedManifold<N>& m, int workers, CheckRecord& r) {
  const auto pts = sample_points<N>(m, s.resolutions.sample_points);
  const ScalarField<N> u = m.weight();
  const ScalarField<N> f([u](const auto& x) { return -u(x); });
  const WeightParams wy{1.0 / (N - 1), 0.0};
  struct Item {
    double stat, wyd, frame, asym, asym_dual;
  };
  const auto items = parallel_map<Item>(pts.size(), workers, [&](std::size_t i) {
    const auto& x = pts[i];
    Item it{};
    it.stat = max_entry_diff<N>(ricci_matrix<N>(ConnectionSpec::lixia({0.0, 1.0}), m, x), static_ricci_matrix<N>(m, x));
    it.wyd = max_entry_diff<N>(ricci_matrix<N>(ConnectionSpec::lixia(wy), m, x), weighted_ricci_matrix<N>(m, f, 1.0, x));
    const auto spec = ConnectionSpec::lixia(s.params);
    const Mat<double, N> ric = ricci_matrix<N>(spec, m, x);
    it.frame = max_entry_diff<N>(ric, ricci_frame_sum<N>(spec, m, x));
    it.asym = asymmetry<N>(ric);
    it.asym_dual = asymmetry<N>(ricci_matrix<N>(ConnectionSpec::dual(s.params), m, x));
    return it;
  });
  Item w{};
  for (const auto& it : items) {
    w.stat = std::max(w.stat, it.stat);
    w.wyd = std::max(w.wyd, it.wyd);
    w.frame = std::max(w.frame, it.frame);
    w.asym = std::max(w.asym, it.asym);
    w.asym_dual = std::max(w.asym_dual, it.asym_dual);
  }
  r.values = {{"static_ricci_diff", w.stat},
              {"wylie_yeroshkin_diff", w.wyd},
              {"frame_vs_coordinate", w.frame},
              {"ricci_asymmetry", w.asym},
              {"dual_ricci_asymmetry", w.asym_dual}};
  r.thresholds = {{"static_ricci_diff", kOracleTol},
                  {"wylie_yeroshkin_diff", kOracleTol},
                  {"frame_vs_coordinate", kFrameTol},
                  {"ricci_asymmetry", kOracleTol},
                  {"dual_ricci_asymmetry", kOracleTol}};
  r.pass = w.stat <= kOracleTol && w.wyd <= kOracleTol && w.frame <= kFrameTol && w.asym <= kOracleTol &&
           w.asym_dual <= kOracleTol;
}

// Ric_f^N against the Li-Xia route: Ric_f^N = Ric^D(1/(n-1),0)|_{u=-f} + c df⊗df
// with c = 1/(1-n) − 1/(N-n).
template <int N>
void run_weighted_ricci(const Scenario& s, const ChartedManifold<N>& m, int workers, CheckRecord& r) {
  const double n_eff = s.weighted_ricci_N;
  const auto pts = sample_points<N>(m, s.resolutions.sample_points);
  const ScalarField<N> u = m.weight();
  const ScalarField<N> f([u](const auto& x) { return -u(x); });
  const double c = 1.0 / (1.0 - N) - (std::isfinite(n_eff) && n_eff != N ? 1.0 / (n_eff - N) : 0.0);
  const WeightParams wy{1.0 / (N - 1), 0.0};
  const double diff = max_over(pts.size(), workers, [&](std::size_t i) {
    const auto& x = pts[i];
    const Mat<double, N> w = weighted_ricci_matrix<N>(m, f, n_eff, x);
    Mat<double, N> ref = ricci_matrix<N>(ConnectionSpec::lixia(wy), m, x);
    const Vec<double, N> df = gradient<double, N>(f, x);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b) ref(a, b) += c * df[a] * df[b];
    return max_entry_diff<N>(w, ref);
  });
  r.values = {{"N", detail::write_extended_real(n_eff)}, {"max_diff", diff}};
  r.thresholds = {{"max_diff", kOracleTol}};
  r.pass = diff <= kOracleTol;
}

template <int N>
CurvatureReport<N> scan(const Scenario& s, const ChartedManifold<N>& m, int workers) {
  return curvature_bound_scan<N>(m, s.params, s.resolutions.scan_points, workers);
}

template <int N>
void run_curvature_scan(const Scenario& s, const ChartedManifold<N>& m, int workers, CheckRecord& r) {
  const auto rep = scan<N>(s, m, workers);
  Json argmin = Json::array();
  for (double v : rep.argmin) argmin.push_back(v);
  r.values = {{"K_best", rep.K_best}, {"asymmetry", rep.asymmetry}, {"argmin", argmin},
              {"samples", rep.points.size()}};
  r.thresholds = {{"asymmetry", kOracleTol}};
  r.pass = rep.asymmetry <= kOracleTol && std::isfinite(rep.K_best);
}

template <int N>
void run_d_minimal(const Scenario& s, const ChartedManifold<N>& m, int, CheckRecord& r) {
  const double res = d_minimal_residual<N>(build_hypersurface<N>(s, m), s.params);
  r.values = {{"max_abs_H_D", res}};
  r.thresholds = {{"max_abs_H_D", kDMinimalTolerance}};
  r.pass = res <= kDMinimalTolerance;
}

template <int N>
void run_choi_wang(const Scenario& s, const ChartedManifold<N>& m, int workers, CheckRecord& r) {
  const auto rep = scan<N>(s, m, workers);
  const auto c = choi_wang_certificate<N>(rep.K_best, build_hypersurface<N>(s, m), s.params,
                                          latitude_mesh(s, s.hypersurface.mesh_level), ambient_weight(s.weight),
                                          1e-3, workers);
  r.values = {{"K_best", c.K_best},
              {"lambda1", c.lambda1},
              {"margin", c.margin},
              {"d_minimal_residual", c.d_minimal_residual},
              {"eigen_residual", c.eigen_residual},
              {"method", c.method}};
  r.thresholds = {{"margin_min", -c.tolerance}, {"d_minimal_residual", kDMinimalTolerance}};
  r.pass = c.pass;
}

template <int N>
void run_reilly(const Scenario& s, const ChartedManifold<N>& m, int workers, CheckRecord& r) {
  if constexpr (N != 2) {
    throw Error(ErrorKind::UnsupportedKind, "Reilly regions are two-dimensional");
  } else {
    const auto region = build_region(s, m);
    const auto phi = named_function<2>(s.region.function, m);
    const auto ref = reilly_residual<2>(region, s.params, phi, workers);
    r.values = {{"lhs", ref.lhs}, {"rhs", ref.rhs}, {"residual", ref.residual}};
    r.thresholds = {{"residual", s.region.tolerance}};
    r.pass = ref.residual <= s.region.tolerance;
    if (!s.region.refinement_cells.empty()) {
      const auto levels =
          reilly_refinement<2>(region, s.params, phi, s.region.refinement_order, s.region.refinement_cells, workers);
      double order = std::numeric_limits<double>::infinity();
      Json errs = Json::array();
      for (const auto& lv : levels) {
        errs.push_back(lv.error);
        if (!std::isnan(lv.observed_order)) order = std::min(order, lv.observed_order);
      }
      r.values["refinement_residuals"] = errs;
      r.values["observed_order"] = order;
      r.thresholds["observed_order_min"] = kRefinementOrder;
      r.pass = r.pass && order >= kRefinementOrder;
    }
  }
}

template <int N>
void run_harmonic(const Scenario& s, const ChartedManifold<N>& m, int workers, CheckRecord& r) {
  if constexpr (N != 2) {
    throw Error(ErrorKind::MeshNotTwoDim, "harmonic extension is implemented for two-dimensional regions");
  } else {
    const auto region = build_region(s, m);
    const auto psi = named_function<2>(s.region.boundary_data, m);
    const int level = s.region.harmonic_level;
    r.pass = true;
    if (s.region.boundary_data_exact) {
      const auto h = harmonic_extension_2d(region, s.params, psi, level, workers);
      r.values["max_nodal_error"] = max_nodal_error(h, psi);
      r.thresholds["max_nodal_error"] = kHarmonicTol;
      r.pass = r.values["max_nodal_error"].get<double>() <= kHarmonicTol;
    }
    const double K = scan<2>(s, m, workers).K_best;
    r.values["K_best"] = K;
    if (K > 0.0) {
      const auto q = choi_wang_intermediate(region, s.params, psi, K, level, kIntermediateTol, workers);
      r.values["energy"] = q.energy;
      r.values["ii_term"] = q.ii_term;
      r.values["flux_term"] = q.flux_term;
      r.values["intermediate"] = q.value;
      r.values["scale"] = q.scale;
      r.thresholds["intermediate_max_relative"] = kIntermediateTol;
      r.pass = r.pass && q.nonpositive;
    }
  }
}

template <int N>
void run_const_reduction(const Scenario& s, const ChartedManifold<N>& m, int workers, CheckRecord& r) {
  const auto pts = sample_points<N>(m, s.resolutions.sample_points);
  const auto mc = m.with_weight(constant_field<N>(0.7));
  const double diff = max_over(pts.size(), workers, [&](std::size_t i) {
    const auto& x = pts[i];
    const auto lx = coefficients<double, N>(ConnectionSpec::lixia(s.params), mc, x);
    const auto lc = coefficients<double, N>(ConnectionSpec::levi_civita(), mc, x);
    double d = 0.0;
    for (int k = 0; k < N; ++k) d = std::max(d, max_entry_diff<N>(lx[k], lc[k]));
    return std::max(d, max_entry_diff<N>(ricci_matrix<N>(ConnectionSpec::lixia(s.params), mc, x),
                                         ricci_matrix<N>(ConnectionSpec::levi_civita(), mc, x)));
  });
  r.values = {{"max_diff", diff}};
  r.thresholds = {{"max_diff", kConstTol}};
  r.pass = diff <= kConstTol;
}

template <int N>
std::vector<CheckRecord> run_checks(const Scenario& s, int workers) {
  const auto m = build_chart<N>(s);
  using Runner = std::function<void(const Scenario&, const ChartedManifold<N>&, int, CheckRecord&)>;
  auto runner = [](const std::string& id) -> Runner {
    if (id == "duality") return run_duality<N>;
    if (id == "statistical") return run_statistical<N>;
    if (id == "equiaffine") return run_equiaffine<N>;
    if (id == "curvature_oracles") return run_curvature_oracles<N>;
    if (id == "weighted_ricci") return run_weighted_ricci<N>;
    if (id == "curvature_scan") return run_curvature_scan<N>;
    if (id == "d_minimal") return run_d_minimal<N>;
    if (id == "reilly") return run_reilly<N>;
    if (id == "choi_wang") return run_choi_wang<N>;
    if (id == "harmonic_extension") return run_harmonic<N>;
    if (id == "const_reduction") return run_const_reduction<N>;
    throw Error(ErrorKind::ConfigInvalid, "unknown check id '" + id + "'");
  };
  std::vector<CheckRecord> out;
  for (const auto& id : s.checks) {
    CheckRecord r;
    r.id = id;
    r.anchor = check_anchor(id);
    try {
      runner(id)(s, m, workers, r);
    } catch (const Error& e) {
      r.pass = false;
      r.error_kind = std::string(to_string(e.kind()));
      r.error_message = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace suite_detail

inline ScenarioReport run_scenario(const Scenario& s, int workers = 1) {
  ScenarioReport rep;
  rep.scenario = s;
  rep.checks = s.chart.dim == 2 ? suite_detail::run_checks<2>(s, workers) : suite_detail::run_checks<3>(s, workers);
  std::sort(rep.checks.begin(), rep.checks.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return rep;
}

inline Report run_suite(const SuiteConfig& cfg, int workers = 1) {
  Report r;
  for (const auto& s : cfg.scenarios) r.scenarios.push_back(run_scenario(s, workers));
  std::sort(r.scenarios.begin(), r.scenarios.end(),
            [](const auto& a, const auto& b) { return a.scenario.name < b.scenario.name; });
  return r;
}

// ---- scenario listing ----

inline std::string list_scenarios(const std::string& filter = "") {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-30s %-4s %s\n", "name", "dim", "hypotheses");
  os << buf;
  for (const auto& s : builtin_scenarios()) {
    if (!filter.empty() && s.name.find(filter) == std::string::npos) continue;
    std::string hyp;
    for (const auto& h : s.hypotheses) hyp += (hyp.empty() ? "" : "; ") + h;
    std::snprintf(buf, sizeof buf, "%-30s %-4d %s\n", s.name.c_str(), s.chart.dim, hyp.c_str());
    os << buf;
  }
  return os.str();
}

// ---- convergence tables ----

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  double value = 0.0;
  double error = 0.0;
  std::optional<double> observed_order;
};

namespace suite_detail {

// λ₁ of Σ when u is constant on it: m / r² scaled by e^{(β−α)u}.
inline std::optional<double> exact_lambda1(const Scenario& s) {
  const auto mesh = latitude_mesh(s, 0);
  const auto u = ambient_weight(s.weight);
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    lo = std::min(lo, u(mesh.vertex(i)));
    hi = std::max(hi, u(mesh.vertex(i)));
  }
  if (hi - lo > 1e-14) return std::nullopt;
  const double r = s.chart.radius * std::sin(s.hypersurface.theta);
  return (s.chart.dim - 1) / (r * r) * std::exp((s.params.beta - s.params.alpha) * lo);
}

}  // namespace suite_detail

inline std::vector<ConvergenceRow> emit_convergence(const Scenario& s, const std::string& check, int first, int last,
                                                    int workers = 1) {
  if (first < 0 || last < first) throw Error(ErrorKind::ConfigInvalid, "levels must satisfy 0 <= a <= b");
  std::vector<ConvergenceRow> rows;
  if (check == "choi_wang") {
    if (s.hypersurface.kind == "none") throw Error(ErrorKind::CheckNotRefinable, "scenario has no hypersurface");
    const auto exact = suite_detail::exact_lambda1(s);
    for (int l = first; l <= last; ++l) {
      const auto mesh = suite_detail::latitude_mesh(s, l);
      const auto prob = assemble(mesh, ambient_weight(s.weight), s.params, workers);
      ConvergenceRow row;
      row.level = l;
      row.h = std::pow(static_cast<double>(mesh.cell_count()), -1.0 / mesh.dim());
      row.value = smallest_nonzero_eigenvalue(prob).lambda;
      if (exact) row.error = std::abs(row.value - *exact);
      rows.push_back(row);
    }
    if (!exact)
      for (auto& row : rows) row.error = std::abs(row.value - rows.back().value);
  } else if (check == "reilly") {
    if (s.chart.dim != 2 || s.region.kind == "none") throw Error(ErrorKind::CheckNotRefinable, "scenario has no region");
    const auto m = suite_detail::build_chart<2>(s);
    const auto region = suite_detail::build_region(s, m);
    const auto phi = suite_detail::named_function<2>(s.region.function, m);
    for (int l = first; l <= last; ++l) {
      auto d = region;
      d.order = s.region.refinement_order;
      d.cells = 1 << l;
      const auto res = reilly_residual<2>(d, s.params, phi, workers);
      rows.push_back({l, 1.0 / d.cells, res.lhs, res.residual, std::nullopt});
    }
  } else if (check == "const_reduction") {
    for (int l = first; l <= last; ++l) {
      Scenario t = s;
      t.resolutions.sample_points = 1 << l;
      CheckRecord r;
      if (t.chart.dim == 2)
        suite_detail::run_const_reduction<2>(t, suite_detail::build_chart<2>(t), workers, r);
      else
        suite_detail::run_const_reduction<3>(t, suite_detail::build_chart<3>(t), workers, r);
      const double d = r.values["max_diff"].get<double>();
      rows.push_back({l, 1.0 / t.resolutions.sample_points, d, d, std::nullopt});
    }
  } else {
    throw Error(ErrorKind::CheckNotRefinable, "check '" + check + "' has no refinement parameter");
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& p = rows[i - 1];
    auto& c = rows[i];
    if (p.error > 1e-13 && c.error > 1e-13) c.observed_order = std::log(p.error / c.error) / std::log(p.h / c.h);
  }
  return rows;
}

inline std::string csv_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// RFC 4180: CRLF line ends; no field needs quoting.
inline std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "level,h,value,error,observed_order\r\n";
  for (const auto& r : rows) {
    out += std::to_string(r.level) + "," + csv_number(r.h) + "," + csv_number(r.value) + "," + csv_number(r.error) +
           "," + (r.observed_order ? csv_number(*r.observed_order) : std::string()) + "\r\n";
  }
  return out;
}

}  // namespace affgeo
