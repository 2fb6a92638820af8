#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "g2lab/scenario.hpp"

namespace {

int print_checks(const std::vector<g2lab::CheckResult>& results) {
  for (const auto& r : results)
    std::printf("%s  %s  (%s)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
  return g2lab::all_passed(results) ? 0 : 1;
}

void print_summary(const g2lab::ScenarioResult& res, std::FILE* out) {
  for (const auto& c : res.checks)
    std::fprintf(out, "%s  %s  (%s)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
  if (!res.message.empty()) std::fprintf(out, "%s", res.message.c_str());
  if (res.exit_code != 2) {
    const auto& a = res.report.agg;
    std::fprintf(out, "max: r_conf=%.3g tau_norm=%.3g a_eta=%.3g cW=%.3g c3=%.3g w_defect=%.3g\n", a.max[0], a.max[1],
                 a.max[2], a.max[3], a.max[4], a.max[5]);
    std::fprintf(out, "zero tolerance %.3g, %d samples, %d degenerate\n", res.report.zero_tol, a.samples,
                 a.degenerate);
    std::fprintf(out, "verdict: %s\n", g2lab::verdict_name(res.report.verdict).c_str());
  }
}

struct Overrides {
  std::optional<int> grid;
  std::optional<double> step;
  std::optional<std::string> out;
};

void apply(const Overrides& o, g2lab::ScenarioConfig& cfg) {
  if (o.grid) {
    if (*o.grid < 4) throw g2lab::ConfigError("--grid: grid must be ≥ 4 per axis");
    cfg.nu = cfg.nv = *o.grid;
  }
  if (o.step) {
    if (!(*o.step > 0.0)) throw g2lab::ConfigError("--step: must be positive");
    cfg.fd_step = *o.step;
  }
  if (o.out) cfg.output = *o.out;
}

int execute(g2lab::ScenarioConfig cfg, const Overrides& o) {
  apply(o, cfg);
  // without an output path the CSV goes to stdout and the summary to stderr
  const bool csv_to_stdout = cfg.output.empty();
  const g2lab::ScenarioResult res = g2lab::run_scenario(cfg, g2lab::threads_from_env());
  if (csv_to_stdout && res.exit_code != 2) g2lab::emit_report(res.report, std::cout);
  std::cout.flush();
  print_summary(res, csv_to_stdout ? stderr : stdout);
  return res.exit_code;
}

const std::map<std::string, g2lab::Verdict>& baked_cases() {
  static const std::map<std::string, g2lab::Verdict> cases{
      {"plane", g2lab::Verdict::HolomorphicLift},
      {"scaled_plane", g2lab::Verdict::NonConformal},
      {"holomorphic_graph", g2lab::Verdict::HolomorphicLift},
      {"sphere", g2lab::Verdict::ConformalNotHarmonic},
      {"catenoid", g2lab::Verdict::HypothesisViolated},
  };
  return cases;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for surfaces in flat G2 backgrounds"};
  app.require_subcommand(1);

  auto* algebra = app.add_subcommand("algebra-selftest", "Check the octonionic algebra layer");
  auto* grassmann = app.add_subcommand("grassmann-selftest", "Check the plane splitting and holomorphy components");

  auto* run = app.add_subcommand("run", "Run a scenario from a JSON config");
  std::string config_path;
  Overrides overrides;
  run->add_option("config", config_path, "Scenario config (JSON)")->required();
  run->add_option("--grid", overrides.grid, "Samples per axis");
  run->add_option("--step", overrides.step, "Finite-difference step");
  run->add_option("--out", overrides.out, "CSV output path");

  auto* theorem = app.add_subcommand("theorem-check", "Run a built-in case and assert its expected verdict");
  std::string case_name;
  Overrides case_overrides;
  theorem->add_option("--case", case_name, "Case name")
      ->required()
      ->check(CLI::IsMember({"plane", "scaled_plane", "holomorphic_graph", "sphere", "catenoid"}));
  theorem->add_option("--grid", case_overrides.grid, "Samples per axis");
  theorem->add_option("--step", case_overrides.step, "Finite-difference step");
  theorem->add_option("--out", case_overrides.out, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*algebra) return print_checks(g2lab::algebra_selftest());
    if (*grassmann) return print_checks(g2lab::grassmann_selftest());
    if (*run) return execute(g2lab::load_config(config_path), overrides);
    if (*theorem) {
      g2lab::ScenarioConfig cfg;
      const g2lab::CatalogEntry* entry = g2lab::find_catalog_entry(case_name);
      cfg.surface.name = case_name;
      cfg.model = entry->model;
      cfg.checks = {g2lab::Check::Theorem, g2lab::Check::WBundle};
      cfg.expect = baked_cases().at(case_name);
      apply(case_overrides, cfg);
      const g2lab::ScenarioResult res = g2lab::run_scenario(cfg, g2lab::threads_from_env());
      print_summary(res, stdout);
      return res.exit_code;
    }
  } catch (const g2lab::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const g2lab::DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
