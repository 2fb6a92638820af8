#include "g2lab/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

#include "g2lab/parallel.hpp"

namespace g2lab {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) config_fail(path.empty() ? key : path + "." + key, "unknown key '" + key + "'");
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) config_fail(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) config_fail(path, "expected a finite number");
  return x;
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) config_fail(path, "expected a string");
  return j.get<std::string>();
}

std::pair<double, double> get_interval(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) config_fail(path, "expected [lo, hi]");
  const double lo = get_number(j[0], path + "[0]"), hi = get_number(j[1], path + "[1]");
  if (!(hi > lo)) config_fail(path, "interval must satisfy lo < hi");
  return {lo, hi};
}

int get_grid_axis(const json& j, const std::string& path) {
  if (!j.is_number_integer()) config_fail(path, "expected an integer");
  const long long n = j.get<long long>();
  if (n < 4) config_fail(path, "grid must be ≥ 4 per axis");
  if (n > 100000) config_fail(path, "grid is unreasonably large");
  return static_cast<int>(n);
}

std::string binomial_term(long long coeff, int pu, int pv, bool first) {
  std::string s;
  if (coeff < 0) s += first ? "-" : " - ";
  else if (!first) s += " + ";
  const long long a = std::llabs(coeff);
  std::string body;
  auto power = [](const char* var, int p) { return p == 1 ? std::string(var) : std::string(var) + "^" + std::to_string(p); };
  if (a != 1 || (pu == 0 && pv == 0)) body = std::to_string(a);
  for (auto [var, p] : {std::pair{"u", pu}, std::pair{"v", pv}}) {
    if (p == 0) continue;
    if (!body.empty()) body += "*";
    body += power(var, p);
  }
  return s + body;
}

const CatalogEntry& entry_or_fail(const std::string& name) {
  const CatalogEntry* e = find_catalog_entry(name);
  if (!e) {
    std::string names;
    for (const auto& c : surface_catalog()) names += (names.empty() ? "" : ", ") + c.name;
    config_fail("surface.name", "unknown surface '" + name + "' (known: " + names + ", custom)");
  }
  return *e;
}

std::string fmt9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

}  // namespace

std::string check_name(Check c) {
  switch (c) {
    case Check::Algebra: return "algebra";
    case Check::Grassmann: return "grassmann";
    case Check::Theorem: return "theorem";
    case Check::WBundle: return "w_bundle";
  }
  return "?";
}

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("<root>: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) config_fail("<root>", "expected a JSON object");
  reject_unknown_keys(root, "", {"model", "surface", "domain", "grid", "fd_step", "output", "checks", "expect"});

  ScenarioConfig cfg;
  if (root.contains("model")) {
    cfg.model = get_string(root["model"], "model");
    if (cfg.model != "flat_r7" && cfg.model != "cy_x_s1")
      config_fail("model", "unknown model '" + cfg.model + "' (known: flat_r7, cy_x_s1)");
  }

  if (!root.contains("surface")) config_fail("surface", "missing required key");
  const json& s = root["surface"];
  if (!s.is_object()) config_fail("surface", "expected an object");
  reject_unknown_keys(s, "surface", {"name", "params", "expressions"});
  if (!s.contains("name")) config_fail("surface.name", "missing required key");
  cfg.surface.name = get_string(s["name"], "surface.name");
  if (s.contains("params")) {
    if (!s["params"].is_object()) config_fail("surface.params", "expected an object");
    for (const auto& [k, v] : s["params"].items()) cfg.surface.params[k] = get_number(v, "surface.params." + k);
  }
  if (cfg.surface.name == "custom") {
    if (!s.contains("expressions")) config_fail("surface.expressions", "required for a custom surface");
    const json& ex = s["expressions"];
    if (!ex.is_array() || ex.size() != kDim) config_fail("surface.expressions", "expected an array of 7 strings");
    std::array<std::string, kDim> comps;
    for (int i = 0; i < kDim; ++i) comps[i] = get_string(ex[i], "surface.expressions[" + std::to_string(i) + "]");
    cfg.surface.expressions = comps;
  } else {
    if (s.contains("expressions")) config_fail("surface.expressions", "only allowed for a custom surface");
    const CatalogEntry& e = entry_or_fail(cfg.surface.name);
    for (const auto& [k, _] : cfg.surface.params)
      if (!e.defaults.count(k)) config_fail("surface.params." + k, "unknown parameter '" + k + "' for " + e.name);
  }
  // validate the expressions early so errors point at the config
  try {
    (void)resolve_surface(cfg.surface);
  } catch (const ParseError& e) {
    config_fail("surface.expressions", e.what());
  }

  if (root.contains("domain")) {
    const json& d = root["domain"];
    if (!d.is_object()) config_fail("domain", "expected an object with keys u and v");
    reject_unknown_keys(d, "domain", {"u", "v"});
    if (!d.contains("u") || !d.contains("v")) config_fail("domain", "needs both u and v intervals");
    const auto [u0, u1] = get_interval(d["u"], "domain.u");
    const auto [v0, v1] = get_interval(d["v"], "domain.v");
    cfg.domain = Rect{u0, u1, v0, v1};
  }

  if (root.contains("grid")) {
    const json& g = root["grid"];
    if (g.is_array()) {
      if (g.size() != 2) config_fail("grid", "expected N or [N, M]");
      cfg.nu = get_grid_axis(g[0], "grid[0]");
      cfg.nv = get_grid_axis(g[1], "grid[1]");
    } else {
      cfg.nu = cfg.nv = get_grid_axis(g, "grid");
    }
  }

  if (root.contains("fd_step")) {
    cfg.fd_step = get_number(root["fd_step"], "fd_step");
    if (!(cfg.fd_step > 0.0)) config_fail("fd_step", "must be positive");
  }
  if (root.contains("output")) cfg.output = get_string(root["output"], "output");

  if (root.contains("checks")) {
    const json& c = root["checks"];
    if (!c.is_array()) config_fail("checks", "expected an array");
    cfg.checks.clear();
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string path = "checks[" + std::to_string(i) + "]";
      const std::string name = get_string(c[i], path);
      std::optional<Check> found;
      for (Check k : {Check::Algebra, Check::Grassmann, Check::Theorem, Check::WBundle})
        if (check_name(k) == name) found = k;
      if (!found) config_fail(path, "unknown check '" + name + "' (known: algebra, grassmann, theorem, w_bundle)");
      if (std::find(cfg.checks.begin(), cfg.checks.end(), *found) == cfg.checks.end()) cfg.checks.push_back(*found);
    }
  }

  if (root.contains("expect")) {
    const std::string name = get_string(root["expect"], "expect");
    cfg.expect = verdict_from_name(name);
    if (!cfg.expect) config_fail("expect", "unknown verdict '" + name + "'");
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::pair<std::string, std::string> complex_power_strings(int k) {
  if (k < 1) throw DomainError("complex power must be at least 1");
  // (u + i v)^k = sum_j C(k, j) u^(k-j) (i v)^j
  std::string re, im;
  long long binom = 1;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) binom = binom * (k - j + 1) / j;
    const long long sign = (j / 2) % 2 == 0 ? 1 : -1;
    std::string& target = j % 2 == 0 ? re : im;
    target += binomial_term(sign * binom, k - j, j, target.empty());
  }
  return {re, im.empty() ? "0" : im};
}

const std::vector<CatalogEntry>& surface_catalog() {
  static const std::vector<CatalogEntry> catalog = [] {
    std::vector<CatalogEntry> c;
    c.push_back({"plane", {}, {-1, 1, -1, 1}, "flat_r7",
                 [](const Parameters&) { return std::array<std::string, kDim>{"u", "v", "0", "0", "0", "0", "0"}; }});
    c.push_back({"scaled_plane", {{"a", 2.0}, {"b", 1.0}}, {-1, 1, -1, 1}, "flat_r7", [](const Parameters&) {
                   return std::array<std::string, kDim>{"a*u", "b*v", "0", "0", "0", "0", "0"};
                 }});
    c.push_back({"holomorphic_graph", {{"k", 2.0}, {"t0", 0.0}}, {-0.5, 0.5, -0.5, 0.5}, "cy_x_s1",
                 [](const Parameters& p) {
                   const double k = p.at("k");
                   if (k != std::round(k) || k < 1 || k > 12)
                     config_fail("surface.params.k", "must be an integer between 1 and 12");
                   const auto [re, im] = complex_power_strings(static_cast<int>(k));
                   return std::array<std::string, kDim>{"u", "v", re, im, "0", "0", "t0"};
                 }});
    c.push_back({"sphere", {{"r", 1.0}}, {0, 3, -1.5, 1.5}, "flat_r7", [](const Parameters&) {
                   // Mercator chart, conformal with factor r^2 / cosh(v)^2
                   return std::array<std::string, kDim>{"r*cos(u)/cosh(v)", "r*sin(u)/cosh(v)",
                                                        "r*sinh(v)/cosh(v)", "0", "0", "0", "0"};
                 }});
    c.push_back({"catenoid", {{"c", 1.0}}, {0, 3, -1, 1}, "flat_r7", [](const Parameters&) {
                   return std::array<std::string, kDim>{"c*cosh(v)*cos(u)", "c*cosh(v)*sin(u)", "c*v", "0", "0", "0",
                                                        "0"};
                 }});
    c.push_back({"torus", {{"R", 2.0}, {"r", 1.0}}, {0, 3, 0, 3}, "flat_r7", [](const Parameters&) {
                   return std::array<std::string, kDim>{"(R + r*cos(v))*cos(u)", "(R + r*cos(v))*sin(u)", "r*sin(v)",
                                                        "0", "0", "0", "0"};
                 }});
    return c;
  }();
  return catalog;
}

const CatalogEntry* find_catalog_entry(const std::string& name) {
  for (const auto& e : surface_catalog())
    if (e.name == name) return &e;
  return nullptr;
}

std::pair<std::array<std::string, kDim>, Parameters> resolve_surface(const SurfaceSpec& spec) {
  if (spec.name == "custom") {
    if (!spec.expressions) config_fail("surface.expressions", "required for a custom surface");
    // parse now so a bad expression surfaces as a ParseError
    ImmersionExpr check(*spec.expressions, spec.params);
    return {*spec.expressions, spec.params};
  }
  const CatalogEntry& e = entry_or_fail(spec.name);
  Parameters params = e.defaults;
  for (const auto& [k, v] : spec.params) params[k] = v;
  return {e.expressions(params), params};
}

ParametricImmersion make_immersion(const std::array<std::string, kDim>& components, const Parameters& params,
                                   const Rect& domain, int nu, int nv, double h) {
  auto expr = std::make_shared<const ImmersionExpr>(components, params);
  return ParametricImmersion(
      domain, nu, nv, h, [expr](double u, double v) { return expr->evaluate(u, v); },
      [expr](double u, double v) {
        const auto j = expr->exact_jet(u, v);
        return JetSample{u, v, j.f, j.fu, j.fv, j.fuu, j.fuv, j.fvv};
      });
}

ParametricImmersion build_immersion(const ScenarioConfig& cfg) {
  const auto [components, params] = resolve_surface(cfg.surface);
  Rect domain{-1, 1, -1, 1};
  if (cfg.domain) domain = *cfg.domain;
  else if (const CatalogEntry* e = find_catalog_entry(cfg.surface.name)) domain = e->domain;
  const double half_u = 0.5 * (domain.u1 - domain.u0) / cfg.nu, half_v = 0.5 * (domain.v1 - domain.v0) / cfg.nv;
  if (2.0 * cfg.fd_step > std::min(half_u, half_v))
    config_fail("fd_step", "2h must not exceed half a grid cell so every sample keeps its stencil inside the domain");
  return make_immersion(components, params, domain, cfg.nu, cfg.nv, cfg.fd_step);
}

int threads_from_env() {
  const char* s = std::getenv("G2LAB_THREADS");
  if (!s || !*s) return 0;
  char* end = nullptr;
  const long n = std::strtol(s, &end, 10);
  if (*end != '\0' || n < 0) return 0;
  return static_cast<int>(n);
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, int threads) {
  ScenarioResult res;
  auto has = [&](Check c) { return std::find(cfg.checks.begin(), cfg.checks.end(), c) != cfg.checks.end(); };
  std::ostringstream msg;

  if (has(Check::Algebra))
    for (auto& r : algebra_selftest()) res.checks.push_back({"algebra: " + r.name, r.pass, r.detail});
  if (has(Check::Grassmann))
    for (auto& r : grassmann_selftest()) res.checks.push_back({"grassmann: " + r.name, r.pass, r.detail});

  try {
    const AmbientModel model = model_by_name(cfg.model);
    const ParametricImmersion f = build_immersion(cfg);
    res.report = theorem_report(f, model, threads);
    if (!res.report.valid) {
      msg << "run invalid: " << res.report.agg.degenerate << " of " << res.report.rows.size()
          << " samples are degenerate (limit 1%)\n";
      res.exit_code = 2;
      res.message = msg.str();
      return res;
    }
    const double tol = res.report.zero_tol;

    if (has(Check::Theorem)) {
      double tangency = 0.0;
      for (const SampleRow& r : res.report.rows)
        if (!(r.flag & kFlagDegenerate)) tangency = std::max(tangency, r.tangency);
      res.checks.push_back({"theorem: tangency to the distribution", tangency < 1e-8,
                            "max residual " + fmt9(tangency)});
      const Verdict v = res.report.verdict;
      if (cfg.expect)
        res.checks.push_back({"theorem: verdict", v == *cfg.expect,
                              verdict_name(v) + " (expected " + verdict_name(*cfg.expect) + ")"});
      else
        res.checks.push_back({"theorem: verdict", v != Verdict::Inconsistent && v != Verdict::Invalid,
                              verdict_name(v)});
    }

    if (has(Check::WBundle)) {
      BundleReport b = w_bundle_report(f, model, threads);
      int crossed = 0;
      double agreement = 0.0, nabla_f = 0.0;
      for (std::size_t k = 0; k < b.samples.size(); ++k) {
        SampleRow& row = res.report.rows[k];
        if (row.flag & kFlagDegenerate) continue;
        const BundleSample& s = b.samples[k];
        row.w_defect = s.hermitian_defect;
        if (b.field.frames[k].jump) row.flag |= kFlagFrameJump;
        if ((s.hermitian_defect < tol) != (row.a_eta < tol)) ++crossed;
        agreement = std::max(agreement, s.agreement);
        nabla_f = std::max(nabla_f, s.nabla_f);
      }
      finalize_report(res.report);
      res.checks.push_back({"w_bundle: hermitian defect vanishes exactly where B is orthogonal to eta", crossed == 0,
                            std::to_string(crossed) + " crossed samples"});
      res.checks.push_back({"w_bundle: finite differences match -<A^eta X x v, w>", agreement < tol,
                            "max difference " + fmt9(agreement)});
      res.checks.push_back({"w_bundle: F maps T^{1,0} into Lambda^{2,0}", b.max_type_defect < 1e-10,
                            "max defect " + fmt9(b.max_type_defect)});
      res.checks.push_back({"w_bundle: F is injective", b.min_injectivity > 0.1,
                            "min |F(Y)|/|Y| " + fmt9(b.min_injectivity)});
      if (res.report.agg.max[2] < tol)
        res.checks.push_back({"w_bundle: F is parallel", nabla_f < tol, "max |nabla F| " + fmt9(nabla_f)});
      else
        msg << "note: B is not orthogonal to eta, so nabla F is not expected to vanish (max |nabla F| "
            << fmt9(nabla_f) << ")\n";
      res.bundle = std::move(b);
    }
  } catch (const FrameAlignmentError& e) {
    msg << "aborted: " << e.what() << "\n";
    res.exit_code = 2;
    res.message = msg.str();
    return res;
  } catch (const ConfigError& e) {
    msg << "configuration error: " << e.what() << "\n";
    res.exit_code = 2;
    res.message = msg.str();
    return res;
  }

  if (!cfg.output.empty()) emit_report(res.report, cfg.output);
  for (const CheckResult& c : res.checks)
    if (!c.pass) res.exit_code = 1;
  res.message = msg.str();
  return res;
}

void emit_report(const DefectReport& report, std::ostream& out) {
  out << "u,v,r_conf,tau_norm,a_eta,cW,c3,w_defect,flag\n";
  for (const SampleRow& r : report.rows) {
    out << fmt9(r.u) << ',' << fmt9(r.v);
    for (double x : report_columns(r)) out << ',' << fmt9(x);
    out << ',' << r.flag << '\n';
  }
  out << "#agg,max";
  for (double x : report.agg.max) out << ',' << fmt9(x);
  out << "\n#agg,mean";
  for (double x : report.agg.mean) out << ',' << fmt9(x);
  out << "\n#agg,samples," << report.agg.samples << ",degenerate," << report.agg.degenerate << '\n';
  out << "#agg,zero_tol," << fmt9(report.zero_tol) << '\n';
  out << "#agg,verdict," << verdict_name(report.verdict) << '\n';
}

void emit_report(const DefectReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  emit_report(report, out);
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace g2lab
