#pragma once

// Scenario descriptions, the built-in registry and the JSON configuration
// format. Unknown keys are rejected everywhere.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "affgeo/charts.hpp"
#include "affgeo/connections.hpp"
#include "affgeo/errors.hpp"
#include "affgeo/weights.hpp"

namespace affgeo {

using Json = nlohmann::json;

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> ids = {
      "choi_wang",  "const_reduction",    "curvature_oracles", "curvature_scan", "d_minimal", "duality",
      "equiaffine", "harmonic_extension", "reilly",            "statistical",    "weighted_ricci"};
  return ids;
}

struct ChartSpec {
  std::string kind = "round-sphere";  // round-sphere | stereographic-sphere | euclidean
  int dim = 2;
  double radius = 1.0;
};

struct HypersurfaceSpec {
  std::string kind = "none";  // none | latitude
  double theta = kPi / 2;
  int mesh_level = 6;
};

struct RegionSpec {
  std::string kind = "none";  // none | disk
  std::array<double, 2> center{0.0, 0.0};
  double radius = 1.0;
  int order = 8;
  int cells = 8;
  double tolerance = 1e-5;
  std::string function = "height";  // Reilly test function: height | tilted-height | cubic | chart-x | wave
  int refinement_order = 2;
  std::vector<int> refinement_cells;  // empty: no refinement study
  std::string boundary_data = "chart-x";
  bool boundary_data_exact = false;  // boundary data extends to the same chart function
  int harmonic_level = 5;
};

struct Resolutions {
  int sample_points = 50;
  int field_triples = 3;
  int scan_points = 64;
};

struct Scenario {
  std::string name;
  std::string description;
  std::vector<std::string> hypotheses;
  ChartSpec chart;
  WeightSpec weight;
  WeightParams params;
  HypersurfaceSpec hypersurface;
  RegionSpec region;
  Resolutions resolutions;
  double weighted_ricci_N = 1.0;
  std::vector<std::string> checks;
};

namespace detail {

inline void reject_unknown(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigInvalid, where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      throw Error(ErrorKind::ConfigInvalid, "unknown key '" + k + "' in " + where);
  }
}

template <class T>
void read(const Json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::ConfigInvalid, std::string("bad value for '") + key + "' in " + where);
  }
}

// Reals that may be infinite are written as numbers or "inf" / "-inf".
inline double read_extended_real(const Json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v == "inf") return std::numeric_limits<double>::infinity();
  if (v == "-inf") return -std::numeric_limits<double>::infinity();
  throw Error(ErrorKind::ConfigInvalid, "expected a number, \"inf\" or \"-inf\" in " + where);
}

inline Json write_extended_real(double x) {
  if (std::isinf(x)) return x > 0 ? Json("inf") : Json("-inf");
  return x;
}

}  // namespace detail

inline Json to_json(const Scenario& s) {
  Json j;
  j["name"] = s.name;
  j["description"] = s.description;
  j["hypotheses"] = s.hypotheses;
  j["chart"] = {{"kind", s.chart.kind}, {"dim", s.chart.dim}, {"radius", s.chart.radius}};
  j["weight"] = {{"family", s.weight.family}, {"a", s.weight.a}, {"k", s.weight.k}, {"axis", s.weight.axis}};
  j["params"] = {{"alpha", s.params.alpha}, {"beta", s.params.beta}};
  j["hypersurface"] = {
      {"kind", s.hypersurface.kind}, {"theta", s.hypersurface.theta}, {"mesh_level", s.hypersurface.mesh_level}};
  const auto& r = s.region;
  j["region"] = {{"kind", r.kind},
                 {"center", r.center},
                 {"radius", r.radius},
                 {"order", r.order},
                 {"cells", r.cells},
                 {"tolerance", r.tolerance},
                 {"function", r.function},
                 {"refinement_order", r.refinement_order},
                 {"refinement_cells", r.refinement_cells},
                 {"boundary_data", r.boundary_data},
                 {"boundary_data_exact", r.boundary_data_exact},
                 {"harmonic_level", r.harmonic_level}};
  j["resolutions"] = {{"sample_points", s.resolutions.sample_points},
                      {"field_triples", s.resolutions.field_triples},
                      {"scan_points", s.resolutions.scan_points}};
  j["weighted_ricci_N"] = detail::write_extended_real(s.weighted_ricci_N);
  j["checks"] = s.checks;
  return j;
}

inline void validate(const Scenario& s) {
  auto bad = [&](const std::string& m) { throw Error(ErrorKind::ConfigInvalid, "scenario '" + s.name + "': " + m); };
  if (s.name.empty()) throw Error(ErrorKind::ConfigInvalid, "scenario name must not be empty");
  const auto& c = s.chart;
  if (c.kind != "round-sphere" && c.kind != "stereographic-sphere" && c.kind != "euclidean")
    bad("unknown chart kind '" + c.kind + "'");
  if (c.dim != 2 && c.dim != 3) bad("chart dim must be 2 or 3");
  if (c.kind == "stereographic-sphere" && c.dim != 2) bad("stereographic chart is two-dimensional");
  if (c.kind == "stereographic-sphere" && c.radius != 1.0) bad("stereographic chart has unit radius");
  if (!(c.radius > 0.0)) bad("chart radius must be positive");
  validate(s.weight, c.kind == "euclidean" ? c.dim : c.dim + 1);
  if (s.hypersurface.kind != "none" && s.hypersurface.kind != "latitude") bad("unknown hypersurface kind");
  if (s.hypersurface.kind == "latitude" && c.kind != "round-sphere") bad("latitudes need a round-sphere chart");
  if (s.hypersurface.mesh_level < 0) bad("mesh_level must be >= 0");
  const auto& r = s.region;
  if (r.kind != "none" && r.kind != "disk") bad("unknown region kind");
  if (r.kind == "disk" && c.dim != 2) bad("disk regions need a two-dimensional chart");
  if (r.order < 1 || r.cells < 1 || r.refinement_order < 1 || r.harmonic_level < 0) bad("resolutions must be positive");
  if (!(r.radius > 0.0)) bad("region radius must be positive");
  for (int cc : r.refinement_cells)
    if (cc < 1) bad("refinement cells must be positive");
  if (r.function != "height" && r.function != "tilted-height" && r.function != "cubic" && r.function != "chart-x" &&
      r.function != "wave")
    bad("unknown test function '" + r.function + "'");
  if (r.boundary_data != "chart-x" && r.boundary_data != "height") bad("unknown boundary data '" + r.boundary_data + "'");
  const auto& q = s.resolutions;
  if (q.sample_points < 1 || q.field_triples < 1 || q.scan_points < 1) bad("resolutions must be positive");
  const auto& ids = known_checks();
  for (const auto& id : s.checks) {
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) bad("unknown check id '" + id + "'");
    if ((id == "d_minimal" || id == "choi_wang") && s.hypersurface.kind == "none") bad(id + " needs a hypersurface");
    if (id == "reilly" && r.kind == "none") bad("reilly needs a region");
    if (id == "harmonic_extension" && r.kind == "none" && c.dim == 2) bad("harmonic_extension needs a region");
  }
  if (std::isnan(s.weighted_ricci_N)) bad("weighted_ricci_N must be a number");
}

// Scenario fields from JSON, on top of `base`.
inline Scenario scenario_from_json(const Json& j, Scenario base) {
  using detail::read;
  using detail::reject_unknown;
  const std::string where = "scenario";
  reject_unknown(j,
                 {"builtin", "name", "description", "hypotheses", "chart", "weight", "params", "hypersurface", "region",
                  "resolutions", "weighted_ricci_N", "checks"},
                 where);
  Scenario s = std::move(base);
  read(j, "name", s.name, where);
  read(j, "description", s.description, where);
  read(j, "hypotheses", s.hypotheses, where);
  read(j, "checks", s.checks, where);
  if (j.contains("chart")) {
    const auto& c = j["chart"];
    reject_unknown(c, {"kind", "dim", "radius"}, "chart");
    read(c, "kind", s.chart.kind, "chart");
    read(c, "dim", s.chart.dim, "chart");
    read(c, "radius", s.chart.radius, "chart");
  }
  if (j.contains("weight")) {
    const auto& w = j["weight"];
    reject_unknown(w, {"family", "a", "k", "axis"}, "weight");
    read(w, "family", s.weight.family, "weight");
    read(w, "a", s.weight.a, "weight");
    read(w, "k", s.weight.k, "weight");
    read(w, "axis", s.weight.axis, "weight");
  }
  if (j.contains("params")) {
    const auto& p = j["params"];
    reject_unknown(p, {"alpha", "beta"}, "params");
    read(p, "alpha", s.params.alpha, "params");
    read(p, "beta", s.params.beta, "params");
  }
  if (j.contains("hypersurface")) {
    const auto& h = j["hypersurface"];
    reject_unknown(h, {"kind", "theta", "mesh_level"}, "hypersurface");
    read(h, "kind", s.hypersurface.kind, "hypersurface");
    read(h, "theta", s.hypersurface.theta, "hypersurface");
    read(h, "mesh_level", s.hypersurface.mesh_level, "hypersurface");
  }
  if (j.contains("region")) {
    const auto& r = j["region"];
    reject_unknown(r,
                   {"kind", "center", "radius", "order", "cells", "tolerance", "function", "refinement_order",
                    "refinement_cells", "boundary_data", "boundary_data_exact", "harmonic_level"},
                   "region");
    auto& o = s.region;
    read(r, "kind", o.kind, "region");
    read(r, "center", o.center, "region");
    read(r, "radius", o.radius, "region");
    read(r, "order", o.order, "region");
    read(r, "cells", o.cells, "region");
    read(r, "tolerance", o.tolerance, "region");
    read(r, "function", o.function, "region");
    read(r, "refinement_order", o.refinement_order, "region");
    read(r, "refinement_cells", o.refinement_cells, "region");
    read(r, "boundary_data", o.boundary_data, "region");
    read(r, "boundary_data_exact", o.boundary_data_exact, "region");
    read(r, "harmonic_level", o.harmonic_level, "region");
  }
  if (j.contains("resolutions")) {
    const auto& q = j["resolutions"];
    reject_unknown(q, {"sample_points", "field_triples", "scan_points"}, "resolutions");
    read(q, "sample_points", s.resolutions.sample_points, "resolutions");
    read(q, "field_triples", s.resolutions.field_triples, "resolutions");
    read(q, "scan_points", s.resolutions.scan_points, "resolutions");
  }
  if (j.contains("weighted_ricci_N")) s.weighted_ricci_N = detail::read_extended_real(j["weighted_ricci_N"], where);
  std::sort(s.checks.begin(), s.checks.end());
  s.checks.erase(std::unique(s.checks.begin(), s.checks.end()), s.checks.end());
  validate(s);
  return s;
}

inline std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;
  auto add = [&](Scenario s) {
    std::sort(s.checks.begin(), s.checks.end());
    validate(s);
    out.push_back(std::move(s));
  };
  const std::vector<std::string> connection_checks = {"duality", "statistical", "equiaffine", "curvature_oracles",
                                                      "const_reduction"};
  auto with = [&](std::vector<std::string> extra) {
    extra.insert(extra.end(), connection_checks.begin(), connection_checks.end());
    return extra;
  };

  Scenario s;
  s.name = "euclidean-flat";
  s.description = "flat plane, u = 0; classical Reilly formula and harmonic reproduction on the unit disk";
  s.hypotheses = {"Reilly formula (classical)", "harmonic extension"};
  s.chart = {"euclidean", 2, 1.0};
  s.params = {0.5, 0.3};
  s.region.kind = "disk";
  s.region.function = "cubic";
  s.region.tolerance = 1e-8;
  s.region.boundary_data_exact = true;
  s.checks = with({"reilly", "harmonic_extension"});
  add(s);

  s = {};
  s.name = "euclidean-radial";
  s.description = "flat plane with u = |x|^2/2";
  s.hypotheses = {"static Ricci equivalence", "Wylie-Yeroshkin equivalence"};
  s.chart = {"euclidean", 2, 1.0};
  s.weight = {"radial", 1.0, 1, 0};
  s.params = {0.5, 0.3};
  s.checks = with({"weighted_ricci", "curvature_scan"});
  add(s);

  s = {};
  s.name = "s2-classical";
  s.description = "unit S^2, u = 0, equator; lambda_1 = 1, K = 1";
  s.hypotheses = {"Choi-Wang bound (u = 0)"};
  s.chart = {"round-sphere", 2, 1.0};
  s.params = {1.0, 0.0};
  s.hypersurface = {"latitude", kPi / 2, 6};
  s.checks = with({"curvature_scan", "d_minimal", "choi_wang"});
  add(s);

  s = {};
  s.name = "s3-classical";
  s.description = "unit S^3, u = 0, equatorial S^2; lambda_1 = 2, K = 2";
  s.hypotheses = {"Choi-Wang bound (u = 0)"};
  s.chart = {"round-sphere", 3, 1.0};
  s.params = {1.0, 0.0};
  s.hypersurface = {"latitude", kPi / 2, 5};
  s.resolutions.sample_points = 30;
  s.checks = with({"curvature_scan", "d_minimal", "choi_wang"});
  add(s);

  s = {};
  s.name = "s2-weighted-quadratic";
  s.description = "unit S^2, u = 0.1 z^2, (alpha, beta) = (1, 0), D-minimal equator";
  s.hypotheses = {"Choi-Wang bound", "duality", "equiaffinity"};
  s.chart = {"round-sphere", 2, 1.0};
  s.weight = {"zpow", 0.1, 2, 0};
  s.params = {1.0, 0.0};
  s.hypersurface = {"latitude", kPi / 2, 6};
  s.checks = with({"curvature_scan", "d_minimal", "choi_wang", "weighted_ricci"});
  add(s);

  s = {};
  s.name = "s2-substatic";
  s.description = "unit S^2, u = 0.3 z, (alpha, beta) = (0, 1)";
  s.hypotheses = {"static Ricci equivalence", "duality"};
  s.chart = {"round-sphere", 2, 1.0};
  s.weight = {"zpow", 0.3, 1, 0};
  s.params = {0.0, 1.0};
  s.checks = with({"curvature_scan"});
  add(s);

  s = {};
  s.name = "s2-wylie-yeroshkin";
  s.description = "unit S^2, u = 0.3 z, (alpha, beta) = (1, 0) = (1/(n-1), 0)";
  s.hypotheses = {"Wylie-Yeroshkin equivalence", "duality"};
  s.chart = {"round-sphere", 2, 1.0};
  s.weight = {"zpow", 0.3, 1, 0};
  s.params = {1.0, 0.0};
  s.checks = with({"weighted_ricci", "curvature_scan"});
  add(s);

  s = {};
  s.name = "s3-weighted";
  s.description = "unit S^3, u = 0.2 z^2, (alpha, beta) = (0.5, 0.3)";
  s.hypotheses = {"duality", "equiaffinity", "curvature equivalences"};
  s.chart = {"round-sphere", 3, 1.0};
  s.weight = {"zpow", 0.2, 2, 0};
  s.params = {0.5, 0.3};
  s.hypersurface = {"latitude", kPi / 2, 3};
  s.resolutions.sample_points = 30;
  s.checks = with({"weighted_ricci", "curvature_scan", "d_minimal"});
  add(s);

  s = {};
  s.name = "hemisphere-classical";
  s.description = "upper hemisphere of unit S^2 in a stereographic chart, u = 0";
  s.hypotheses = {"Reilly formula (classical)", "Choi-Wang boundary problem"};
  s.chart = {"stereographic-sphere", 2, 1.0};
  s.params = {1.0, 0.0};
  s.region.kind = "disk";
  s.region.function = "wave";
  s.region.tolerance = 1e-6;
  s.region.boundary_data_exact = true;
  s.region.harmonic_level = 6;
  s.checks = {"reilly", "harmonic_extension", "curvature_scan", "const_reduction"};
  add(s);

  s = {};
  s.name = "weighted-hemisphere";
  s.description = "upper hemisphere of unit S^2, u = 0.2 z, (alpha, beta) = (0.5, 0.3)";
  s.hypotheses = {"Reilly formula"};
  s.chart = {"stereographic-sphere", 2, 1.0};
  s.weight = {"zpow", 0.2, 1, 0};
  s.params = {0.5, 0.3};
  s.region.kind = "disk";
  s.region.function = "tilted-height";
  s.region.tolerance = 1e-5;
  s.region.refinement_cells = {8, 16, 32};
  s.checks = with({"reilly"});
  add(s);

  s = {};
  s.name = "weighted-hemisphere-quadratic";
  s.description = "upper hemisphere of unit S^2, u = 0.2 z^2, (alpha, beta) = (1, 0)";
  s.hypotheses = {"Choi-Wang boundary problem"};
  s.chart = {"stereographic-sphere", 2, 1.0};
  s.weight = {"zpow", 0.2, 2, 0};
  s.params = {1.0, 0.0};
  s.region.kind = "disk";
  s.region.harmonic_level = 6;
  s.checks = with({"harmonic_extension", "curvature_scan"});
  add(s);

  std::sort(out.begin(), out.end(), [](const Scenario& a, const Scenario& b) { return a.name < b.name; });
  return out;
}

inline Scenario builtin_scenario(const std::string& name) {
  for (auto& s : builtin_scenarios())
    if (s.name == name) return s;
  throw Error(ErrorKind::ConfigInvalid, "unknown built-in scenario '" + name + "'");
}

struct SuiteConfig {
  std::vector<Scenario> scenarios;
};

// {"scenarios": [ "name" | {"builtin": "name", ...overrides} | {full scenario} ]}
inline SuiteConfig parse_config(const Json& j) {
  detail::reject_unknown(j, {"scenarios"}, "config");
  if (!j.contains("scenarios") || !j["scenarios"].is_array() || j["scenarios"].empty())
    throw Error(ErrorKind::ConfigInvalid, "config needs a non-empty 'scenarios' array");
  SuiteConfig cfg;
  std::set<std::string> names;
  for (const auto& e : j["scenarios"]) {
    Scenario s;
    if (e.is_string()) {
      s = builtin_scenario(e.get<std::string>());
    } else if (e.is_object()) {
      Scenario base;
      if (e.contains("builtin")) {
        if (!e["builtin"].is_string()) throw Error(ErrorKind::ConfigInvalid, "'builtin' must be a string");
        base = builtin_scenario(e["builtin"].get<std::string>());
      } else if (!e.contains("name")) {
        throw Error(ErrorKind::ConfigInvalid, "scenario objects need 'name' or 'builtin'");
      }
      s = scenario_from_json(e, base);
    } else {
      throw Error(ErrorKind::ConfigInvalid, "scenario entries must be names or objects");
    }
    if (!names.insert(s.name).second) throw Error(ErrorKind::ConfigInvalid, "duplicate scenario '" + s.name + "'");
    cfg.scenarios.push_back(std::move(s));
  }
  std::sort(cfg.scenarios.begin(), cfg.scenarios.end(),
            [](const Scenario& a, const Scenario& b) { return a.name < b.name; });
  return cfg;
}

inline SuiteConfig parse_config_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

// Normalized form: every scenario written out in full.
inline Json to_json(const SuiteConfig& c) {
  Json arr = Json::array();
  for (const auto& s : c.scenarios) arr.push_back(to_json(s));
  return Json{{"scenarios", arr}};
}

}  // namespace affgeo
