#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "g2lab/scenario.hpp"

using namespace g2lab;

namespace {

std::string config_error(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string csv(const DefectReport& r) {
  std::ostringstream out;
  emit_report(r, out);
  return out.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

ScenarioConfig theorem_only(const std::string& surface, int n) {
  ScenarioConfig cfg;
  cfg.surface.name = surface;
  if (const CatalogEntry* e = find_catalog_entry(surface)) cfg.model = e->model;
  cfg.nu = cfg.nv = n;
  cfg.checks = {Check::Theorem};
  return cfg;
}

}  // namespace

TEST_CASE("minimal config gets the defaults") {
  const ScenarioConfig cfg = parse_config(R"({"surface": {"name": "plane"}})");
  CHECK(cfg.model == "flat_r7");
  CHECK(cfg.surface.name == "plane");
  CHECK(cfg.nu == 64);
  CHECK(cfg.nv == 64);
  CHECK(cfg.fd_step == 1e-3);
  CHECK(!cfg.domain);
  CHECK(cfg.output.empty());
  CHECK(cfg.checks.size() == 4);
  CHECK(!cfg.expect);
}

TEST_CASE("full config round trip") {
  const ScenarioConfig cfg = parse_config(R"({
    "model": "cy_x_s1",
    "surface": {"name": "holomorphic_graph", "params": {"k": 3}},
    "domain": {"u": [-0.25, 0.25], "v": [0, 0.5]},
    "grid": [8, 12], "fd_step": 5e-4, "output": "out.csv",
    "checks": ["theorem", "w_bundle", "theorem"], "expect": "holomorphic-lift"})");
  CHECK(cfg.model == "cy_x_s1");
  CHECK(cfg.surface.params.at("k") == 3.0);
  REQUIRE(cfg.domain);
  CHECK(cfg.domain->u0 == -0.25);
  CHECK(cfg.domain->v1 == 0.5);
  CHECK(cfg.nu == 8);
  CHECK(cfg.nv == 12);
  CHECK(cfg.fd_step == 5e-4);
  CHECK(cfg.output == "out.csv");
  CHECK(cfg.checks == std::vector<Check>{Check::Theorem, Check::WBundle});
  CHECK(cfg.expect == Verdict::HolomorphicLift);
}

TEST_CASE("config errors name the offending field") {
  CHECK(config_error(R"({"surface": {"name": "plane"}, "metrics": 1})").find("metrics") != std::string::npos);
  CHECK(config_error(R"({"surface": {"name": "plane"}, "grid": 0})").find("grid must be ≥ 4 per axis") !=
        std::string::npos);
  CHECK(config_error(R"({"surface": {"name": "plane"}, "grid": [0, 0]})").find("grid must be ≥ 4 per axis") !=
        std::string::npos);
  CHECK(config_error(R"({"surface": {"name": "plane", "colour": 1}})").find("surface.colour") != std::string::npos);
  CHECK(config_error(R"({"surface": {"name": "sphere", "params": {"R": 2}}})").find("surface.params.R") !=
        std::string::npos);
  CHECK(config_error(R"({"surface": {"name": "holomorphic_graph", "params": {"k": 1.5}}})")
            .find("surface.params.k") != std::string::npos);
  CHECK(config_error(R"({"surface": {"name": "klein_bottle"}})").find("surface.name") != std::string::npos);
  CHECK(config_error(R"({"model": "g2_cone", "surface": {"name": "plane"}})").find("model") != std::string::npos);
  CHECK(config_error(R"({"surface": {"name": "plane"}, "domain": {"u": [1, 0], "v": [0, 1]}})")
            .find("domain.u") != std::string::npos);
  CHECK(config_error(R"({"surface": {"name": "plane"}, "fd_step": -1})").find("fd_step") != std::string::npos);
  CHECK(config_error(R"({"surface": {"name": "plane"}, "checks": ["speed"]})").find("checks[0]") !=
        std::string::npos);
  CHECK(config_error(R"({"surface": {"name": "plane"}, "expect": "maybe"})").find("expect") != std::string::npos);
  CHECK(config_error(R"({"grid": 8})").find("surface") != std::string::npos);
  CHECK(config_error("{\"surface\": ").find("invalid JSON") != std::string::npos);
  const std::string bad_expr = config_error(
      R"({"surface": {"name": "custom", "expressions": ["u", "v", "w", "0", "0", "0", "0"]}})");
  CHECK(bad_expr.find("component 3") != std::string::npos);
  CHECK(config_error(R"({"surface": {"name": "custom", "expressions": ["u", "v"]}})").find("surface.expressions") !=
        std::string::npos);
}

TEST_CASE("missing config file is an error") {
  CHECK_THROWS_AS(load_config("/nonexistent/g2lab/config.json"), ConfigError);
}

TEST_CASE("complex powers expand correctly") {
  CHECK(complex_power_strings(1) == std::pair<std::string, std::string>{"u", "v"});
  CHECK(complex_power_strings(2) == std::pair<std::string, std::string>{"u^2 - v^2", "2*u*v"});
  CHECK(complex_power_strings(3) == std::pair<std::string, std::string>{"u^3 - 3*u*v^2", "3*u^2*v - v^3"});
  for (int k = 1; k <= 8; ++k) {
    const auto [re, im] = complex_power_strings(k);
    const Expr pr = parse_expression(re, {}), pi = parse_expression(im, {});
    for (double u : {-0.7, 0.3, 1.1})
      for (double v : {-0.4, 0.9}) {
        const std::complex<double> z = std::pow(std::complex<double>(u, v), k);
        CHECK(pr.evaluate(u, v, {}) == doctest::Approx(z.real()).epsilon(1e-12));
        CHECK(pi.evaluate(u, v, {}) == doctest::Approx(z.imag()).epsilon(1e-12));
      }
  }
}

TEST_CASE("catalog surfaces match their inline expressions") {
  for (const char* name : {"sphere", "catenoid", "torus", "holomorphic_graph"}) {
    CAPTURE(name);
    ScenarioConfig catalog = theorem_only(name, 12);
    ScenarioConfig inline_cfg = catalog;
    const auto [components, params] = resolve_surface(catalog.surface);
    inline_cfg.surface = SurfaceSpec{"custom", params, components};
    inline_cfg.domain = find_catalog_entry(name)->domain;
    const ScenarioResult a = run_scenario(catalog), b = run_scenario(inline_cfg);
    REQUIRE(a.report.rows.size() == b.report.rows.size());
    for (std::size_t k = 0; k < a.report.rows.size(); ++k) {
      const auto ca = report_columns(a.report.rows[k]), cb = report_columns(b.report.rows[k]);
      for (int c = 0; c < kReportColumns; ++c) CHECK(std::abs(ca[c] - cb[c]) <= 1e-12);
    }
    CHECK(a.report.verdict == b.report.verdict);
  }
}

TEST_CASE("4x4 plane run gives 16 rows of zeros") {
  const ScenarioResult res = run_scenario(theorem_only("plane", 4));
  CHECK(res.exit_code == 0);
  const auto ls = lines(csv(res.report));
  REQUIRE(ls.size() == 1 + 16 + 5);
  CHECK(ls[0] == "u,v,r_conf,tau_norm,a_eta,cW,c3,w_defect,flag");
  for (int k = 1; k <= 16; ++k) {
    const std::string& row = ls[k];
    CHECK(row.substr(row.size() - 14) == ",0,0,0,0,0,0,0");
  }
  CHECK(ls[1].rfind("-0.75,-0.75,", 0) == 0);
  CHECK(ls[2].rfind("-0.75,-0.25,", 0) == 0);
  for (std::size_t k = 17; k < ls.size(); ++k) CHECK(ls[k].rfind("#agg,", 0) == 0);
  CHECK(ls.back() == "#agg,verdict,holomorphic-lift");
}

TEST_CASE("empty grid emits the header and aggregate rows only") {
  DefectReport empty;
  empty.agg = aggregate({});
  const auto ls = lines(csv(empty));
  REQUIRE(!ls.empty());
  CHECK(ls[0] == "u,v,r_conf,tau_norm,a_eta,cW,c3,w_defect,flag");
  for (std::size_t k = 1; k < ls.size(); ++k) CHECK(ls[k].rfind("#agg,", 0) == 0);
}

TEST_CASE("floats are written with nine significant digits") {
  ScenarioConfig cfg = theorem_only("scaled_plane", 4);
  const ScenarioResult res = run_scenario(cfg);
  const auto ls = lines(csv(res.report));
  CHECK(ls[1].find(",0.600000000,") == std::string::npos);
  CHECK(ls[1].find(",0.6,") != std::string::npos);
  cfg.surface.params["a"] = std::sqrt(2.0);
  const auto ls2 = lines(csv(run_scenario(cfg).report));
  // r_conf = |E - G| / (E + G) = 1/3
  CHECK(ls2[1].find(",0.333333333,") != std::string::npos);
}

TEST_CASE("identical configs give byte-identical reports regardless of threads") {
  for (const char* name : {"sphere", "holomorphic_graph"}) {
    ScenarioConfig cfg = theorem_only(name, 16);
    cfg.checks = {Check::Theorem, Check::WBundle};
    const std::string a = csv(run_scenario(cfg, 1).report);
    const std::string b = csv(run_scenario(cfg, 4).report);
    const std::string c = csv(run_scenario(cfg, 1).report);
    CHECK(a == b);
    CHECK(a == c);
  }
}

TEST_CASE("scenario exit codes") {
  ScenarioConfig ok = theorem_only("holomorphic_graph", 8);
  ok.expect = Verdict::HolomorphicLift;
  CHECK(run_scenario(ok).exit_code == 0);

  ScenarioConfig wrong = ok;
  wrong.expect = Verdict::NonConformal;
  CHECK(run_scenario(wrong).exit_code == 1);

  ScenarioConfig wrong_model = theorem_only("holomorphic_graph", 8);
  wrong_model.model = "flat_r7";
  wrong_model.expect = Verdict::HolomorphicLift;
  CHECK(run_scenario(wrong_model).exit_code == 1);

  ScenarioConfig coarse_step = ok;
  coarse_step.fd_step = 0.05;
  CHECK(run_scenario(coarse_step).exit_code == 2);

  ScenarioConfig degenerate = theorem_only("custom", 5);
  degenerate.surface.expressions = std::array<std::string, kDim>{"u^5", "v^5", "0", "0", "0", "0", "0"};
  degenerate.domain = Rect{-1.5, 1.5, -1.5, 1.5};
  const ScenarioResult d = run_scenario(degenerate);
  CHECK(d.exit_code == 2);
  CHECK(!d.report.valid);
}

TEST_CASE("scenario writes the CSV to the configured path") {
  const std::string path = "g2lab_scenario_test.csv";
  ScenarioConfig cfg = theorem_only("plane", 4);
  cfg.output = path;
  const ScenarioResult res = run_scenario(cfg);
  std::ifstream in(path);
  std::ostringstream text;
  text << in.rdbuf();
  CHECK(text.str() == csv(res.report));
  std::remove(path.c_str());
}

TEST_CASE("all checks pass on the default catalog runs") {
  for (const char* name : {"plane", "holomorphic_graph", "sphere", "catenoid", "torus", "scaled_plane"}) {
    CAPTURE(name);
    ScenarioConfig cfg = theorem_only(name, 12);
    cfg.checks = {Check::Theorem, Check::WBundle};
    const ScenarioResult res = run_scenario(cfg);
    for (const auto& c : res.checks) {
      CAPTURE(c.name);
      CAPTURE(c.detail);
      CHECK(c.pass);
    }
    CHECK(res.exit_code == 0);
  }
}
