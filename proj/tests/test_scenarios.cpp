#include <catch_amalgamated.hpp>

#include <algorithm>
#include <string>

#include "affgeo/scenario.hpp"
#include "affgeo/suite.hpp"

using namespace affgeo;
using Catch::Approx;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::ConfigInvalid;
}

const CheckRecord& find_check(const ScenarioReport& r, const std::string& id) {
  const auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const auto& c) { return c.id == id; });
  REQUIRE(it != r.checks.end());
  return *it;
}

}  // namespace

TEST_CASE("registry contents", "[scenarios]") {
  const auto all = builtin_scenarios();
  CHECK(all.size() >= 6);
  for (const char* name : {"s2-classical", "s3-classical", "s2-weighted-quadratic", "s2-substatic",
                           "s2-wylie-yeroshkin", "euclidean-flat"})
    CHECK(std::any_of(all.begin(), all.end(), [&](const Scenario& s) { return s.name == name; }));
  CHECK(std::is_sorted(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.name < b.name; }));
  const auto sub = builtin_scenario("s2-substatic");
  CHECK(sub.params.alpha == 0.0);
  CHECK(sub.params.beta == 1.0);
  const auto wy = builtin_scenario("s2-wylie-yeroshkin");
  CHECK(wy.params.alpha == 1.0);
  CHECK(wy.chart.dim == 2);
}

TEST_CASE("scenario listing", "[scenarios][list]") {
  const auto full = list_scenarios();
  const auto rows = std::count(full.begin(), full.end(), '\n') - 1;
  CHECK(rows == static_cast<long>(builtin_scenarios().size()));
  CHECK(list_scenarios("") == full);
  const auto none = list_scenarios("no-such-scenario");
  CHECK(std::count(none.begin(), none.end(), '\n') == 1);
  const auto s3 = list_scenarios("s3-");
  CHECK(s3.find("s3-classical") != std::string::npos);
  CHECK(s3.find("s2-classical") == std::string::npos);
}

TEST_CASE("config parsing is strict", "[scenarios][config]") {
  CHECK(kind_of([] { parse_config_text(R"({"scenarios": ["s2-classical"], "extra": 1})"); }) ==
        ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { parse_config_text(R"({"scenarios": [{"builtin": "s2-classical", "colour": 3}]})"); }) ==
        ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { parse_config_text(R"({"scenarios": [{"builtin": "s2-classical", "params": {"gamma": 1}}]})"); }) ==
        ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { parse_config_text(R"({"scenarios": ["nope"]})"); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { parse_config_text(R"({"scenarios": []})"); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { parse_config_text("{not json"); }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] { parse_config_text(R"({"scenarios": ["s2-classical", "s2-classical"]})"); }) ==
        ErrorKind::ConfigInvalid);
  CHECK(kind_of([] {
          parse_config_text(R"({"scenarios": [{"builtin": "s2-classical", "checks": ["warp_drive"]}]})");
        }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] {
          parse_config_text(R"({"scenarios": [{"builtin": "s2-classical", "resolutions": {"scan_points": 0}}]})");
        }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] {
          parse_config_text(R"({"scenarios": [{"builtin": "s2-classical", "weight": {"family": "cosmic"}}]})");
        }) == ErrorKind::ConfigInvalid);
  CHECK(kind_of([] {
          parse_config_text(R"({"scenarios": [{"builtin": "s2-substatic", "checks": ["choi_wang"]}]})");
        }) == ErrorKind::ConfigInvalid);
}

TEST_CASE("config round trip", "[scenarios][config]") {
  const auto cfg = parse_config_text(R"({"scenarios": [
      "s3-classical",
      {"builtin": "s2-weighted-quadratic", "name": "custom", "params": {"alpha": 0.7}, "weighted_ricci_N": "inf"},
      {"name": "flat3", "chart": {"kind": "euclidean", "dim": 3}, "weight": {"family": "coord", "a": 0.2, "axis": 2},
       "checks": ["duality", "statistical"]}]})");
  REQUIRE(cfg.scenarios.size() == 3);
  CHECK(cfg.scenarios[0].name == "custom");
  CHECK(cfg.scenarios[0].params.alpha == 0.7);
  CHECK(cfg.scenarios[0].params.beta == 0.0);
  CHECK(std::isinf(cfg.scenarios[0].weighted_ricci_N));
  const Json once = to_json(cfg);
  const Json twice = to_json(parse_config(once));
  CHECK(once == twice);
  CHECK(once.dump() == twice.dump());
}

TEST_CASE("suite records", "[scenarios][suite]") {
  SECTION("s3-classical passes with margin about 1") {
    const auto r = run_scenario(builtin_scenario("s3-classical"));
    CHECK(r.pass());
    CHECK(find_check(r, "choi_wang").values["margin"].get<double>() == Approx(1.0).margin(5e-3));
  }
  SECTION("s2-weighted-quadratic passes") {
    const auto r = run_scenario(builtin_scenario("s2-weighted-quadratic"));
    CHECK(r.pass());
    CHECK(find_check(r, "curvature_scan").values["K_best"].get<double>() == Approx(0.8).margin(1e-12));
  }
  SECTION("excluded N is recorded and the suite continues") {
    const auto cfg = parse_config_text(R"({"scenarios": [
        {"builtin": "s2-wylie-yeroshkin", "name": "bad-N", "weighted_ricci_N": 1.5,
         "checks": ["weighted_ricci", "duality"]}]})");
    const auto rep = run_suite(cfg);
    CHECK_FALSE(rep.pass());
    const auto& w = find_check(rep.scenarios[0], "weighted_ricci");
    CHECK_FALSE(w.pass);
    CHECK(w.error_kind == "InvalidN");
    CHECK(find_check(rep.scenarios[0], "duality").pass);
  }
  SECTION("three-dimensional harmonic extension is rejected per check") {
    const auto cfg = parse_config_text(R"({"scenarios": [
        {"builtin": "s3-weighted", "name": "h3", "checks": ["harmonic_extension"]}]})");
    const auto rep = run_suite(cfg);
    CHECK(rep.scenarios[0].checks[0].error_kind == "MeshNotTwoDim");
  }
  SECTION("weighted Ricci at N = inf and N = 0") {
    for (const char* n : {R"("inf")", "0.0", "-3.0"}) {
      const auto cfg = parse_config_text(std::string(R"({"scenarios": [{"builtin": "s3-weighted", "name": "w",
        "checks": ["weighted_ricci"], "weighted_ricci_N": )") + n + "}]}");
      CHECK(run_suite(cfg).pass());
    }
  }
}

TEST_CASE("reports are deterministic", "[scenarios][determinism]") {
  const auto cfg = parse_config_text(R"({"scenarios": ["weighted-hemisphere", "s2-weighted-quadratic"]})");
  const auto a = report_text(run_suite(cfg, 1));
  const auto b = report_text(run_suite(cfg, 1));
  const auto c = report_text(run_suite(cfg, 4));
  CHECK(a == b);
  CHECK(a == c);
  const Json j = Json::parse(a);
  CHECK(j["scenarios"][0]["scenario"]["name"] == "s2-weighted-quadratic");
  CHECK_FALSE(j["environment"].contains("workers"));
}

TEST_CASE("convergence tables", "[scenarios][convergence]") {
  SECTION("circle eigenvalue at second order") {
    const auto rows = emit_convergence(builtin_scenario("s2-classical"), "choi_wang", 3, 6);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].error < rows[i - 1].error);
      CHECK(*rows[i].observed_order == Approx(2.0).margin(0.05));
    }
  }
  SECTION("Reilly residual at grids 32, 64, 128") {
    const auto rows = emit_convergence(builtin_scenario("weighted-hemisphere"), "reilly", 4, 6);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(*rows[i].observed_order >= 2.0);
  }
  SECTION("exact check gives a zero column") {
    const auto rows = emit_convergence(builtin_scenario("s2-weighted-quadratic"), "const_reduction", 2, 4);
    for (const auto& r : rows) CHECK(r.error <= 1e-12);
  }
  SECTION("non-refinable check") {
    CHECK(kind_of([] { emit_convergence(builtin_scenario("s2-classical"), "duality", 1, 2); }) ==
          ErrorKind::CheckNotRefinable);
  }
  SECTION("CSV layout") {
    const auto csv = convergence_csv({{1, 0.5, 2.0, 0.25, std::nullopt}, {2, 0.25, 2.0, 0.0625, 2.0}});
    CHECK(csv == "level,h,value,error,observed_order\r\n1,0.5,2,0.25,\r\n2,0.25,2,0.0625,2\r\n");
  }
}
