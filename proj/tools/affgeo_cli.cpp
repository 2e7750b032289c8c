// affgeo command-line driver: verify | list | converge | mesh.
// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration or usage error.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>

#include "affgeo/mesh.hpp"
#include "affgeo/scenario.hpp"
#include "affgeo/suite.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw affgeo::Error(affgeo::ErrorKind::ConfigInvalid, "cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::pair<int, int> parse_levels(const std::string& text) {
  static const std::regex re(R"((\d+)\.\.(\d+))");
  std::smatch m;
  if (!std::regex_match(text, m, re))
    throw affgeo::Error(affgeo::ErrorKind::ConfigInvalid, "levels must look like a..b");
  return {std::stoi(m[1]), std::stoi(m[2])};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of weighted affine-connection geometry"};
  app.require_subcommand(1);
  int workers = 1;
  bool seedless = false;
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  // Every sample is drawn from Halton sequences, so this flag only documents intent.
  app.add_flag("--seedless", seedless, "Use deterministic low-discrepancy sampling only (always on)");

  auto* verify = app.add_subcommand("verify", "Run the verification suite for a config");
  std::string config_path, out_path;
  verify->add_option("--config", config_path, "JSON config")->required();
  verify->add_option("--out", out_path, "Also write the report to this file");

  auto* list = app.add_subcommand("list", "List built-in scenarios");
  std::string filter;
  list->add_option("--filter", filter, "Substring filter on scenario names");

  auto* converge = app.add_subcommand("converge", "Emit a refinement table as CSV");
  std::string scenario_name, check_id, levels_text, converge_config;
  converge->add_option("--scenario", scenario_name, "Scenario name")->required();
  converge->add_option("--check", check_id, "Check id")->required();
  converge->add_option("--levels", levels_text, "Level range a..b")->required();
  converge->add_option("--config", converge_config, "Config holding the scenario (default: built-in registry)");

  auto* mesh = app.add_subcommand("mesh", "Dump a mesh as plain text");
  std::string mesh_kind = "icosphere";
  int mesh_level = 0;
  mesh->add_option("--kind", mesh_kind, "circle | icosphere");
  mesh->add_option("--level", mesh_level, "Subdivision level");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*verify) {
      const auto cfg = affgeo::parse_config_text(read_file(config_path));
      const auto report = affgeo::run_suite(cfg, workers);
      const std::string text = affgeo::report_text(report);
      std::cout << text;
      if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw affgeo::Error(affgeo::ErrorKind::ConfigInvalid, "cannot write '" + out_path + "'");
        out << text;
      }
      return report.pass() ? kExitPass : kExitFail;
    }
    if (*list) {
      std::cout << affgeo::list_scenarios(filter);
      return kExitPass;
    }
    if (*converge) {
      affgeo::Scenario s;
      if (converge_config.empty()) {
        s = affgeo::builtin_scenario(scenario_name);
      } else {
        const auto cfg = affgeo::parse_config_text(read_file(converge_config));
        const auto it = std::find_if(cfg.scenarios.begin(), cfg.scenarios.end(),
                                     [&](const auto& sc) { return sc.name == scenario_name; });
        if (it == cfg.scenarios.end())
          throw affgeo::Error(affgeo::ErrorKind::ConfigInvalid, "scenario '" + scenario_name + "' not in config");
        s = *it;
      }
      const auto [a, b] = parse_levels(levels_text);
      std::cout << affgeo::convergence_csv(affgeo::emit_convergence(s, check_id, a, b, workers));
      return kExitPass;
    }
    if (*mesh) {
      affgeo::write_mesh(std::cout, affgeo::build_mesh(mesh_kind, mesh_level));
      return kExitPass;
    }
  } catch (const affgeo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
