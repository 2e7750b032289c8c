// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "affgeo/eigen_solvers.hpp"
#include "affgeo/fem.hpp"
#include "affgeo/harmonic.hpp"
#include "affgeo/mesh.hpp"
#include "affgeo/scenario.hpp"
#include "affgeo/suite.hpp"

using namespace affgeo;

namespace {

// Tolerances.
constexpr double kDuality = 1e-9;
constexpr double kDualitySensitivity = 1e-4;
constexpr double kStatistical = 1e-10;
constexpr double kEquiaffine = 1e-9;
constexpr double kEquiaffineSensitivity = 1e-5;
constexpr double kOracle = 1e-9;
constexpr double kReillyWeighted = 1e-5;
constexpr double kReillyOrder = 2.0;
constexpr double kReillyFlat = 1e-8;
constexpr double kCertRelative = 1e-3;
constexpr double kS3Lambda = 5e-3;
constexpr double kDMinimal = 1e-8;
constexpr double kHarmonic = 1e-6;
constexpr double kIntermediate = 1e-4;
constexpr double kCircleLevel6 = 1e-4;
constexpr double kSphereLevel5 = 5e-3;
constexpr double kDenseIterative = 1e-8;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [violated]");
  }
};

std::string num(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", x);
  return b;
}

CheckRecord record(const ScenarioReport& r, const std::string& id) {
  for (const auto& c : r.checks)
    if (c.id == id) return c;
  throw std::runtime_error("missing record " + id);
}

double value(const CheckRecord& c, const char* key) {
  if (!c.error_kind.empty()) throw std::runtime_error(c.id + ": " + c.error_message);
  return c.values.at(key).get<double>();
}

ScenarioReport run_only(const std::string& name, std::vector<std::string> checks,
                        const std::function<void(Scenario&)>& tweak = {}) {
  Scenario s = builtin_scenario(name);
  s.checks = std::move(checks);
  if (tweak) tweak(s);
  validate(s);
  return run_scenario(s);
}

const std::vector<std::string> kWeighted = {"s2-weighted-quadratic", "s2-substatic", "s2-wylie-yeroshkin",
                                            "s3-weighted"};

Outcome duality() {
  Outcome o;
  for (const auto& name : kWeighted) {
    const auto r = run_only(name, {"duality"}, [](Scenario& s) {
      s.resolutions.sample_points = 50;
      s.resolutions.field_triples = 3;
    });
    const auto& c = record(r, "duality");
    o.require(value(c, "max_residual") <= kDuality, name + " residual " + num(value(c, "max_residual")));
    o.require(value(c, "perturbed_residual") > kDualitySensitivity,
              name + " perturbed " + num(value(c, "perturbed_residual")));
  }
  return o;
}

Outcome statistical() {
  Outcome o;
  for (const auto& name : kWeighted) {
    const auto& c = record(run_only(name, {"statistical"}), "statistical");
    o.require(value(c, "max_asymmetry") <= kStatistical && value(c, "max_closed_form_diff") <= kStatistical,
              name + " sym " + num(value(c, "max_asymmetry")) + " closed " + num(value(c, "max_closed_form_diff")));
  }
  const auto r = run_only("s2-weighted-quadratic", {"statistical"}, [](Scenario& s) { s.params = {0.4, -0.4}; });
  const auto& c = record(r, "statistical");
  o.require(value(c, "max_abs") <= kStatistical, "alpha+beta=0 max " + num(value(c, "max_abs")));
  return o;
}

Outcome equiaffine() {
  Outcome o;
  for (const auto& name : {std::string("s3-weighted"), std::string("weighted-hemisphere")}) {
    const auto& c = record(run_only(name, {"equiaffine"}), "equiaffine");
    o.require(value(c, "max_residual") <= kEquiaffine, name + " residual " + num(value(c, "max_residual")));
    o.require(value(c, "perturbed_residual") > kEquiaffineSensitivity,
              name + " tau+-0.1 " + num(value(c, "perturbed_residual")));
  }
  return o;
}

Outcome curvature_oracles() {
  Outcome o;
  int count = 0;
  for (const auto& s : builtin_scenarios()) {
    if (s.weight.is_constant()) continue;
    ++count;
    const auto& c = record(run_only(s.name, {"curvature_oracles"}), "curvature_oracles");
    const double a = value(c, "static_ricci_diff"), b = value(c, "wylie_yeroshkin_diff");
    o.require(a <= kOracle && b <= kOracle, s.name + " " + num(a) + "/" + num(b));
  }
  o.require(count >= 4, std::to_string(count) + " weighted scenarios");
  return o;
}

Outcome reilly() {
  Outcome o;
  const auto& w = record(run_only("weighted-hemisphere", {"reilly"}), "reilly");
  o.require(value(w, "residual") <= kReillyWeighted, "weighted residual " + num(value(w, "residual")));
  o.require(w.values.at("refinement_residuals").size() >= 3 && value(w, "observed_order") >= kReillyOrder,
            "order " + num(value(w, "observed_order")));
  const auto& f = record(run_only("euclidean-flat", {"reilly"}), "reilly");
  o.require(value(f, "residual") <= kReillyFlat, "flat residual " + num(value(f, "residual")));
  return o;
}

Outcome choi_wang() {
  Outcome o;
  for (const auto& name : {std::string("s2-classical"), std::string("s3-classical"),
                           std::string("s2-weighted-quadratic")}) {
    const auto& c = record(run_only(name, {"choi_wang"}), "choi_wang");
    const double K = value(c, "K_best"), lam = value(c, "lambda1"), margin = value(c, "margin");
    o.require(margin >= -kCertRelative * K, name + " margin " + num(margin));
    o.require(value(c, "d_minimal_residual") <= kDMinimal, name + " H^D " + num(value(c, "d_minimal_residual")));
    if (name == "s2-classical") o.require(std::abs(K - 1) <= 1e-9 && std::abs(lam - 1) <= 1e-4, "K=1, lambda1=1");
    if (name == "s3-classical")
      o.require(std::abs(K - 2) <= 1e-9 && std::abs(lam - 2) / 2 <= kS3Lambda, "K=2, lambda1 " + num(lam));
  }
  return o;
}

Outcome proof_chain() {
  Outcome o;
  const auto flat = builtin_scenario("euclidean-flat");
  const auto& f = record(run_only("euclidean-flat", {"harmonic_extension"}, [](Scenario& s) {
                           s.region.harmonic_level = 5;
                         }),
                         "harmonic_extension");
  o.require(flat.region.boundary_data_exact && value(f, "max_nodal_error") <= kHarmonic,
            "flat disk error " + num(value(f, "max_nodal_error")));
  for (const auto& name : {std::string("hemisphere-classical"), std::string("weighted-hemisphere-quadratic")}) {
    const auto& c = record(run_only(name, {"harmonic_extension"}), "harmonic_extension");
    const double q = value(c, "intermediate"), scale = value(c, "scale");
    o.require(q <= kIntermediate * scale, name + " Q " + num(q) + " scale " + num(scale));
  }
  return o;
}

Outcome spectral() {
  Outcome o;
  const auto zero = ambient_weight(WeightSpec{});
  const auto c6 = smallest_nonzero_eigenvalue(assemble(circle_mesh(6), zero, {}));
  o.require(std::abs(c6.lambda - 1.0) <= kCircleLevel6, "circle L6 " + num(std::abs(c6.lambda - 1.0)));
  const auto s5 = smallest_nonzero_eigenvalue(assemble(icosphere_mesh(5), zero, {}));
  o.require(std::abs(s5.lambda - 2.0) / 2.0 <= kSphereLevel5, "S2 L5 " + num(std::abs(s5.lambda - 2.0) / 2.0));
  const auto u = ambient_weight(WeightSpec{"zpow", 0.3, 1, 0});
  double worst = 0.0;
  for (const auto& mesh : {icosphere_mesh(3), circle_mesh(6)})
    for (const WeightParams p : {WeightParams{}, WeightParams{0.5, 0.3}}) {
      const auto prob = assemble(mesh, u, p);
      if (prob.size() >= kDenseLimit) continue;
      const double d = dense_first_nonzero(prob).lambda, l = lanczos_first_nonzero(prob).lambda;
      worst = std::max(worst, std::abs(d - l) / std::abs(d));
    }
  o.require(worst <= kDenseIterative, "dense vs lanczos " + num(worst));
  return o;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const auto cfg = parse_config_text(read_file(AFFGEO_CONFIG_DIR "/default.json"));
  const auto a = report_text(run_suite(cfg, 1));
  const auto b = report_text(run_suite(cfg, 1));
  const auto c = report_text(run_suite(cfg, 4));
  o.require(a == b, "rerun identical");
  o.require(a == c, "workers 1 vs 4 identical");
  o.require(Json::parse(a).at("pass").get<bool>(), "default suite passes");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"duality", duality},
      {"statistical structure", statistical},
      {"equiaffinity", equiaffine},
      {"curvature oracles", curvature_oracles},
      {"Reilly formula", reilly},
      {"Choi-Wang inequality", choi_wang},
      {"proof chain at n=2", proof_chain},
      {"spectral solver", spectral},
      {"determinism", determinism},
  };
  int failures = 0;
  int idx = 0;
  for (const auto& [name, fn] : criteria) {
    ++idx;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", idx, name, o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
