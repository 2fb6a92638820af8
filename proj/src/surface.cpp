#include "g2lab/surface.hpp"

#include <cmath>
#include <limits>

#include "g2lab/parallel.hpp"

namespace g2lab {

namespace {

JetSample jet_unchecked(const ParametricImmersion& f, double u, double v, double h) {
  JetSample j;
  j.u = u;
  j.v = v;
  j.f = f(u, v);
  const Vector7 up = f(u + h, v), um = f(u - h, v), vp = f(u, v + h), vm = f(u, v - h);
  const Vector7 pp = f(u + h, v + h), pm = f(u + h, v - h), mp = f(u - h, v + h), mm = f(u - h, v - h);
  const double inv2h = 1.0 / (2.0 * h), invh2 = 1.0 / (h * h);
  j.fu = inv2h * (up - um);
  j.fv = inv2h * (vp - vm);
  j.fuu = invh2 * (up - 2.0 * j.f + um);
  j.fvv = invh2 * (vp - 2.0 * j.f + vm);
  j.fuv = (0.25 * invh2) * (pp - pm - mp + mm);
  return j;
}

// Component of x normal to span(fu, fv).
Vector7 normal_part(const Vector7& x, const JetSample& j, double E, double F, double G) {
  const double det = E * G - F * F;
  const double pu = dot(x, j.fu), pv = dot(x, j.fv);
  const double a = (G * pu - F * pv) / det;
  const double b = (E * pv - F * pu) / det;
  return x - a * j.fu - b * j.fv;
}

Vector7 eta_of(const JetSample& j, const AmbientModel& model) {
  const OrientedPlane2 xi = OrientedPlane2::from_vectors(j.fu, j.fv);
  return model.structure().cross(xi.e1(), xi.e2());
}

Vector7 reject(const Vector7& x, const Vector7& unit) { return x - dot(x, unit) * unit; }

LiftSample lift_from_stencil(const JetStencil& s, const AmbientModel& model) {
  const OrientedPlane2 xi = OrientedPlane2::from_vectors(s.c.fu, s.c.fv);
  const Vector7 eta = model.structure().cross(xi.e1(), xi.e2());
  const double inv2h = 1.0 / (2.0 * s.h);
  const Vector7 du = reject(inv2h * (eta_of(s.up, model) - eta_of(s.um, model)), eta);
  const Vector7 dv = reject(inv2h * (eta_of(s.vp, model) - eta_of(s.vm, model)), eta);
  return LiftSample{xi, eta, {du, dv}, {s.c.fu, s.c.fv}, {du, dv}};
}

using Metric = std::array<double, 3>;  // E, F, G
Metric metric_of(const JetSample& j) { return {dot(j.fu, j.fu), dot(j.fu, j.fv), dot(j.fv, j.fv)}; }
double metric_entry(const Metric& m, int a, int b) { return a + b == 0 ? m[0] : a + b == 1 ? m[1] : m[2]; }

HolomorphyDefect holomorphy_from_stencil(const JetStencil& s, const AmbientModel& model) {
  const G2Structure& g = model.structure();
  const double inv2h = 1.0 / (2.0 * s.h);
  const SurfaceFrame fc = surface_frame(s.c);
  const SurfaceFrame fup = surface_frame(s.up), fum = surface_frame(s.um);
  const SurfaceFrame fvp = surface_frame(s.vp), fvm = surface_frame(s.vm);

  // alpha = (grad_{e1} - i grad_{e2}) (e1 ^ e2)
  auto xi = [](const SurfaceFrame& fr) { return wedge2(fr.e1, fr.e2); };
  const Bivector7 dxi_u = inv2h * (xi(fup) - xi(fum));
  const Bivector7 dxi_v = inv2h * (xi(fvp) - xi(fvm));
  const Bivector7 d_e1 = fc.d1[0] * dxi_u + fc.d1[1] * dxi_v;
  const Bivector7 d_e2 = fc.d2[0] * dxi_u + fc.d2[1] * dxi_v;
  const ComplexBivector7 alpha{d_e1, -1.0 * d_e2};

  const PlaneSplitting split = plane_split(OrientedPlane2::from_frame(fc.e1, fc.e2), g);
  const HolomorphyComponents comps = holomorphy_components(split, alpha, g);

  HolomorphyDefect out;
  out.c_w = comps.c_w;
  out.c3 = comps.c3;
  out.cw_norm = norm(comps.c_w);
  out.c3_norm = std::abs(comps.c3);

  const FundamentalData fd = fundamental_data(s.c, model);
  out.r_conf = fd.r_conf;
  const auto [b11, b12, b22] = frame_second_form(fd, fc);
  // B(eps, eps) = B11 - B22 - 2i B12
  const Complex c3_closed = Complex(0.0, 1.0) * Complex(dot(b11 - b22, split.eta), -2.0 * dot(b12, split.eta));
  out.c3_identity = std::abs(comps.c3 - c3_closed);
  const ComplexVector7 cw_closed = project_w10(split, ComplexVector7{Vector7{}, -1.0 * fd.H}, g);
  out.cw_identity = norm(comps.c_w - cw_closed);

  // Frame route: the ambient derivative of e_j along e_i minus its tangential
  // part from the Christoffel symbols of I must be B(e_i, e_j).
  const Metric mc = metric_of(s.c);
  const Metric m_u = [&] {
    const Metric p = metric_of(s.up), m = metric_of(s.um);
    return Metric{inv2h * (p[0] - m[0]), inv2h * (p[1] - m[1]), inv2h * (p[2] - m[2])};
  }();
  const Metric m_v = [&] {
    const Metric p = metric_of(s.vp), m = metric_of(s.vm);
    return Metric{inv2h * (p[0] - m[0]), inv2h * (p[1] - m[1]), inv2h * (p[2] - m[2])};
  }();
  const double det = mc[0] * mc[2] - mc[1] * mc[1];
  const double ginv[2][2] = {{mc[2] / det, -mc[1] / det}, {-mc[1] / det, mc[0] / det}};
  auto dmetric = [&](int a, int b, int c) { return metric_entry(a == 0 ? m_u : m_v, b, c); };
  double gamma[2][2][2];  // gamma[k][a][b] = Gamma^k_ab
  for (int k = 0; k < 2; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double sum = 0.0;
        for (int d = 0; d < 2; ++d) sum += ginv[k][d] * (dmetric(a, b, d) + dmetric(b, a, d) - dmetric(d, a, b));
        gamma[k][a][b] = 0.5 * sum;
      }

  const std::array<double, 2> dc[2] = {fc.d1, fc.d2};
  const std::array<double, 2> dup[2] = {fup.d1, fup.d2}, dum[2] = {fum.d1, fum.d2};
  const std::array<double, 2> dvp[2] = {fvp.d1, fvp.d2}, dvm[2] = {fvm.d1, fvm.d2};
  const Vector7 ec_u[2] = {inv2h * (fup.e1 - fum.e1), inv2h * (fup.e2 - fum.e2)};
  const Vector7 ec_v[2] = {inv2h * (fvp.e1 - fvm.e1), inv2h * (fvp.e2 - fvm.e2)};
  const Vector7 partial[2] = {s.c.fu, s.c.fv};
  const Vector7 bframe[2][2] = {{b11, b12}, {b12, b22}};
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Vector7 ambient = dc[i][0] * ec_u[j] + dc[i][1] * ec_v[j];
      Vector7 tangential;
      for (int b = 0; b < 2; ++b) {
        double coeff = dc[i][0] * inv2h * (dup[j][b] - dum[j][b]) + dc[i][1] * inv2h * (dvp[j][b] - dvm[j][b]);
        for (int a = 0; a < 2; ++a)
          for (int c = 0; c < 2; ++c) coeff += dc[i][a] * dc[j][c] * gamma[b][a][c];
        tangential += coeff * partial[b];
      }
      worst = std::max(worst, norm(ambient - tangential - bframe[i][j]));
    }
  out.frame_identity = worst;
  return out;
}

}  // namespace

ParametricImmersion::ParametricImmersion(Rect domain, int nu, int nv, double fd_step, SurfaceMap map,
                                         JetMap exact_jet)
    : domain_(domain), nu_(nu), nv_(nv), h_(fd_step), map_(std::move(map)), exact_(std::move(exact_jet)) {
  if (!(h_ > 0.0)) throw DomainError("finite-difference step must be positive");
  if (nu_ < 0 || nv_ < 0) throw DomainError("grid size must be non-negative");
  if (!(domain_.u1 > domain_.u0) || !(domain_.v1 > domain_.v0)) throw DomainError("empty domain rectangle");
  if (!map_) throw DomainError("immersion needs a component map");
}

std::pair<double, double> ParametricImmersion::grid_point(int i, int j) const {
  const double du = (domain_.u1 - domain_.u0) / nu_, dv = (domain_.v1 - domain_.v0) / nv_;
  return {domain_.u0 + (i + 0.5) * du, domain_.v0 + (j + 0.5) * dv};
}

JetSample ParametricImmersion::exact_jet(double u, double v) const {
  if (!exact_) throw DomainError("immersion carries no exact jet");
  return exact_(u, v);
}

ParametricImmersion ParametricImmersion::with_step(double h) const {
  ParametricImmersion out = *this;
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  out.h_ = h;
  return out;
}

ParametricImmersion ParametricImmersion::with_grid(int nu, int nv) const {
  return ParametricImmersion(domain_, nu, nv, h_, map_, exact_);
}

ParametricImmersion ParametricImmersion::with_domain(const Rect& domain) const {
  return ParametricImmersion(domain, nu_, nv_, h_, map_, exact_);
}

JetSample sample_jet(const ParametricImmersion& f, double u, double v, double h) {
  const Rect& d = f.domain();
  const double margin = 2.0 * h;
  if (u - d.u0 < margin || d.u1 - u < margin || v - d.v0 < margin || d.v1 - v < margin)
    throw DomainError("sample point (" + std::to_string(u) + ", " + std::to_string(v) +
                      ") is closer than 2h to the domain boundary");
  return jet_unchecked(f, u, v, h);
}

JetSample sample_jet(const ParametricImmersion& f, double u, double v) {
  return sample_jet(f, u, v, f.fd_step());
}

JetStencil jet_stencil(const ParametricImmersion& f, double u, double v) {
  const double h = f.fd_step();
  return {h, sample_jet(f, u, v, h), jet_unchecked(f, u + h, v, h), jet_unchecked(f, u - h, v, h),
          jet_unchecked(f, u, v + h, h), jet_unchecked(f, u, v - h, h)};
}

double area_element(const JetSample& jet) { return norm(wedge2(jet.fu, jet.fv)); }

FundamentalData fundamental_data(const JetSample& jet, const AmbientModel& model) {
  FundamentalData fd;
  fd.E = dot(jet.fu, jet.fu);
  fd.F = dot(jet.fu, jet.fv);
  fd.G = dot(jet.fv, jet.fv);
  const double det = fd.E * fd.G - fd.F * fd.F;
  if (!(det >= 1e-12)) throw DomainError("degenerate first fundamental form");
  // nabla_{d_a} f_b; coordinate second partials plus connection terms
  const Vector7 nuu = covariant_derivative(model, jet.fuu, jet.fu, jet.fu);
  const Vector7 nuv = covariant_derivative(model, jet.fuv, jet.fu, jet.fv);
  const Vector7 nvv = covariant_derivative(model, jet.fvv, jet.fv, jet.fv);
  fd.B_uu = normal_part(nuu, jet, fd.E, fd.F, fd.G);
  fd.B_uv = normal_part(nuv, jet, fd.E, fd.F, fd.G);
  fd.B_vv = normal_part(nvv, jet, fd.E, fd.F, fd.G);
  fd.H = (1.0 / det) * (fd.G * fd.B_uu - 2.0 * fd.F * fd.B_uv + fd.E * fd.B_vv);
  fd.tau = nuu + nvv;
  fd.r_conf = (std::abs(fd.E - fd.G) + 2.0 * std::abs(fd.F)) / (fd.E + fd.G);
  fd.tau_norm = norm(fd.tau) / (0.5 * (fd.E + fd.G));
  return fd;
}

SurfaceFrame surface_frame(const JetSample& jet) {
  SurfaceFrame fr;
  const double nu = norm(jet.fu);
  fr.e1 = (1.0 / nu) * jet.fu;
  const double c = dot(jet.fv, fr.e1);
  const Vector7 rest = jet.fv - c * fr.e1;
  const double n2 = norm(rest);
  if (!(nu > 0.0) || !(n2 > 0.0)) throw DomainError("degenerate tangent plane");
  fr.e2 = (1.0 / n2) * rest;
  fr.d1 = {1.0 / nu, 0.0};
  fr.d2 = {-c / (nu * n2), 1.0 / n2};
  return fr;
}

std::array<Vector7, 3> frame_second_form(const FundamentalData& fd, const SurfaceFrame& fr) {
  auto B = [&](const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return (a[0] * b[0]) * fd.B_uu + (a[0] * b[1] + a[1] * b[0]) * fd.B_uv + (a[1] * b[1]) * fd.B_vv;
  };
  return {B(fr.d1, fr.d1), B(fr.d1, fr.d2), B(fr.d2, fr.d2)};
}

LiftSample gauss_lift(const ParametricImmersion& f, double u, double v, const AmbientModel& model) {
  return lift_from_stencil(jet_stencil(f, u, v), model);
}

double tangency_residual(const LiftSample& lift) {
  double worst = 0.0;
  for (const Vector7& x : lift.horiz) worst = std::max(worst, std::abs(dot(x, lift.eta)) / norm(x));
  return worst;
}

double horizontal_j_defect(const LiftSample& lift, const AmbientModel& model) {
  const Vector7 j_fu = model.structure().cross(lift.eta, lift.horiz[0]);
  return norm(lift.horiz[1] - j_fu) / norm(lift.horiz[0]);
}

double a_eta_residual(const FundamentalData& fd, const LiftSample& lift) {
  double worst = 0.0;
  for (const Vector7* b : {&fd.B_uu, &fd.B_uv, &fd.B_vv}) {
    const double nb = norm(*b);
    if (nb == 0.0) continue;
    worst = std::max(worst, std::abs(dot(*b, lift.eta)) / (nb + kAEtaFloor));
  }
  return worst;
}

HolomorphyDefect holomorphy_defect(const ParametricImmersion& f, double u, double v, const AmbientModel& model) {
  return holomorphy_from_stencil(jet_stencil(f, u, v), model);
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::HolomorphicLift: return "holomorphic-lift";
    case Verdict::ConformalNotHarmonic: return "conformal-not-harmonic";
    case Verdict::NonConformal: return "non-conformal";
    case Verdict::HypothesisViolated: return "hypothesis-violated";
    case Verdict::Inconsistent: return "inconsistent";
    case Verdict::Invalid: return "invalid";
  }
  return "invalid";
}

std::optional<Verdict> verdict_from_name(const std::string& name) {
  for (Verdict v : {Verdict::HolomorphicLift, Verdict::ConformalNotHarmonic, Verdict::NonConformal,
                    Verdict::HypothesisViolated, Verdict::Inconsistent, Verdict::Invalid})
    if (verdict_name(v) == name) return v;
  return std::nullopt;
}

SampleRow evaluate_sample(const ParametricImmersion& f, double u, double v, const AmbientModel& model) {
  SampleRow row;
  row.u = u;
  row.v = v;
  const JetSample centre = sample_jet(f, u, v);  // margin violations propagate
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto mark_degenerate = [&] {
    row.flag = kFlagDegenerate;
    row.r_conf = row.tau_norm = row.a_eta = row.cw = row.c3 = row.w_defect = nan;
    row.h_norm = row.b_scale = row.tangency = row.horizontal_j = nan;
    row.c3_identity = row.cw_identity = row.frame_identity = nan;
    return row;
  };
  if (area_element(centre) < kDegenerateArea) return mark_degenerate();
  try {
    const JetStencil s = jet_stencil(f, u, v);
    const FundamentalData fd = fundamental_data(s.c, model);
    const LiftSample lift = lift_from_stencil(s, model);
    const HolomorphyDefect hd = holomorphy_from_stencil(s, model);
    const auto bf = frame_second_form(fd, surface_frame(s.c));
    row.r_conf = fd.r_conf;
    row.tau_norm = fd.tau_norm;
    row.a_eta = a_eta_residual(fd, lift);
    row.cw = hd.cw_norm;
    row.c3 = hd.c3_norm;
    row.h_norm = norm(fd.H);
    row.b_scale = std::max({norm(bf[0]), norm(bf[1]), norm(bf[2])});
    row.tangency = tangency_residual(lift);
    row.horizontal_j = horizontal_j_defect(lift, model);
    row.c3_identity = hd.c3_identity;
    row.cw_identity = hd.cw_identity;
    row.frame_identity = hd.frame_identity;
  } catch (const DomainError&) {
    return mark_degenerate();
  }
  return row;
}

std::array<double, kReportColumns> report_columns(const SampleRow& r) {
  return {r.r_conf, r.tau_norm, r.a_eta, r.cw, r.c3, r.w_defect};
}

Aggregates aggregate(const std::vector<SampleRow>& rows) {
  Aggregates agg;
  for (const SampleRow& r : rows) {
    if (r.flag & kFlagDegenerate) {
      ++agg.degenerate;
      continue;
    }
    ++agg.samples;
    const auto cols = report_columns(r);
    for (int k = 0; k < kReportColumns; ++k) {
      agg.max[k] = std::max(agg.max[k], cols[k]);
      agg.mean[k] += cols[k];
    }
  }
  if (agg.samples > 0)
    for (double& m : agg.mean) m /= agg.samples;
  return agg;
}

Verdict classify(const Aggregates& agg, double tol) {
  const auto& m = agg.max;
  if (m[0] >= tol) return Verdict::NonConformal;
  if (m[1] >= tol) return Verdict::ConformalNotHarmonic;
  if (m[2] >= tol) return Verdict::HypothesisViolated;
  if (m[3] < tol && m[4] < tol) return Verdict::HolomorphicLift;
  return Verdict::Inconsistent;
}

void finalize_report(DefectReport& report) {
  report.agg = aggregate(report.rows);
  double scale = 0.0;
  for (const SampleRow& r : report.rows)
    if (!(r.flag & kFlagDegenerate)) scale = std::max(scale, r.b_scale);
  report.curvature_scale = scale + 1.0;
  report.zero_tol = 10.0 * report.fd_step * report.fd_step * report.curvature_scale;
  const std::size_t total = report.rows.size();
  report.valid = total == 0 || report.agg.degenerate * 100 <= static_cast<int>(total);
  report.verdict = report.valid && report.agg.samples > 0 ? classify(report.agg, report.zero_tol) : Verdict::Invalid;
}

DefectReport theorem_report(const ParametricImmersion& f, const AmbientModel& model, int threads) {
  DefectReport report;
  report.nu = f.nu();
  report.nv = f.nv();
  report.fd_step = f.fd_step();
  report.rows.resize(static_cast<std::size_t>(f.nu()) * f.nv());
  parallel_for(report.rows.size(), threads, [&](std::size_t k) {
    const int i = static_cast<int>(k / f.nv()), j = static_cast<int>(k % f.nv());
    const auto [u, v] = f.grid_point(i, j);
    report.rows[k] = evaluate_sample(f, u, v, model);
  });
  finalize_report(report);
  return report;
}

}  // namespace g2lab
