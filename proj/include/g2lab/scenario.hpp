// Scenario configuration (JSON), the built-in surface catalog, scenario
// execution and CSV report emission.
#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "g2lab/bundle.hpp"
#include "g2lab/expression.hpp"
#include "g2lab/selftest.hpp"
#include "g2lab/surface.hpp"

namespace g2lab {

/// Configuration problem; the message starts with the offending field path.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

enum class Check { Algebra, Grassmann, Theorem, WBundle };

std::string check_name(Check c);

struct SurfaceSpec {
  std::string name = "plane";
  Parameters params;                                       // catalog parameters or expression bindings
  std::optional<std::array<std::string, kDim>> expressions;  // set for "custom"
};

struct ScenarioConfig {
  std::string model = "flat_r7";
  SurfaceSpec surface;
  std::optional<Rect> domain;  // catalog default when absent
  int nu = 64, nv = 64;
  double fd_step = 1e-3;
  std::string output;  // CSV path; empty means no file
  std::vector<Check> checks{Check::Algebra, Check::Grassmann, Check::Theorem, Check::WBundle};
  std::optional<Verdict> expect;
};

ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

// ---------------------------------------------------------------------------
// Catalog

struct CatalogEntry {
  std::string name;
  Parameters defaults;
  Rect domain;
  std::string model;  // model the entry is meant for
  std::function<std::array<std::string, kDim>(const Parameters&)> expressions;
};

const std::vector<CatalogEntry>& surface_catalog();
const CatalogEntry* find_catalog_entry(const std::string& name);

/// Expands (u + i v)^k into its real and imaginary parts as polynomials.
std::pair<std::string, std::string> complex_power_strings(int k);

/// Immersion from seven component expressions, carrying the exact jet.
ParametricImmersion make_immersion(const std::array<std::string, kDim>& components, const Parameters& params,
                                   const Rect& domain, int nu, int nv, double h);

/// The immersion described by a config (catalog or custom expressions).
ParametricImmersion build_immersion(const ScenarioConfig& cfg);

/// Component expressions and parameter bindings a config resolves to.
std::pair<std::array<std::string, kDim>, Parameters> resolve_surface(const SurfaceSpec& spec);

// ---------------------------------------------------------------------------
// Execution

struct ScenarioResult {
  DefectReport report;
  std::optional<BundleReport> bundle;
  std::vector<CheckResult> checks;
  int exit_code = 0;  // 0 pass, 1 check failure, 2 configuration or degeneracy abort
  std::string message;
};

/// Threads: 1 = serial, 0 = hardware concurrency.
ScenarioResult run_scenario(const ScenarioConfig& cfg, int threads = 1);

/// Thread count from G2LAB_THREADS (unset or 0 = auto).
int threads_from_env();

void emit_report(const DefectReport& report, std::ostream& out);
void emit_report(const DefectReport& report, const std::string& path);

}  // namespace g2lab
