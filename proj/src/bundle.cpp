#include "g2lab/bundle.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "g2lab/parallel.hpp"

namespace g2lab {

namespace {

double determinant7(const std::array<Vector7, kDim>& cols) {
  Eigen::Matrix<double, kDim, kDim> m;
  for (int c = 0; c < kDim; ++c)
    for (int r = 0; r < kDim; ++r) m(r, c) = cols[c][r];
  return m.determinant();
}

// Parallel-transport style alignment: rotate `raw` inside its span to the
// frame closest to `ref` (orthogonal Procrustes restricted to SO(4)).
WFrame align(const WFrame& raw, const WFrame& ref) {
  Eigen::Matrix4d m;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m(a, b) = dot(raw[a], ref[b]);
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix4d u = svd.matrixU();
  if ((u * svd.matrixV().transpose()).determinant() < 0.0) u.col(3) *= -1.0;
  const Eigen::Matrix4d r = u * svd.matrixV().transpose();
  WFrame out{};
  for (int b = 0; b < 4; ++b)
    for (int a = 0; a < 4; ++a) out[b] += r(a, b) * raw[a];
  return out;
}

double frame_angle(const WFrame& w, const WFrame& ref) {
  double worst = 0.0;
  for (int b = 0; b < 4; ++b) worst = std::max(worst, std::acos(std::clamp(dot(w[b], ref[b]), -1.0, 1.0)));
  return worst;
}

struct LocalGeometry {
  SurfaceFrame frame;
  Vector7 eta;
  WFrame w;
};

LocalGeometry local_geometry(const JetSample& jet, const AmbientModel& model, const WFrame& reference) {
  const SurfaceFrame fr = surface_frame(jet);
  return {fr, model.structure().cross(fr.e1, fr.e2), w_frame_at(jet, model, &reference)};
}

std::array<Eigen::Matrix4d, 2> f_components(const LocalGeometry& l, const G2Structure& g) {
  std::array<Eigen::Matrix4d, 2> out;
  const Vector7 e[2] = {l.frame.e1, l.frame.e2};
  for (int i = 0; i < 2; ++i)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) out[i](a, b) = g.eval(e[i], l.w[a], l.w[b]);
  return out;
}

}  // namespace

WFrame w_frame_at(const JetSample& jet, const AmbientModel& model, const WFrame* reference) {
  const SurfaceFrame fr = surface_frame(jet);
  const Vector7 eta = model.structure().cross(fr.e1, fr.e2);
  WFrame raw = complement_frame({fr.e1, fr.e2, eta});
  if (determinant7({fr.e1, fr.e2, eta, raw[0], raw[1], raw[2], raw[3]}) < 0.0) raw[3] = -1.0 * raw[3];
  return reference ? align(raw, *reference) : raw;
}

Eigen::Matrix4d j_matrix(const Vector7& eta, const WFrame& w, const G2Structure& g) {
  Eigen::Matrix4d j;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) j(a, b) = g.eval(eta, w[a], w[b]);
  return j;
}

WFrameField w_frame_field(const ParametricImmersion& f, const AmbientModel& model) {
  WFrameField field;
  field.nu = f.nu();
  field.nv = f.nv();
  field.frames.resize(static_cast<std::size_t>(f.nu()) * f.nv());
  const G2Structure& g = model.structure();
  const WFrameSample* last_valid = nullptr;
  for (int i = 0; i < f.nu(); ++i)
    for (int j = 0; j < f.nv(); ++j) {
      WFrameSample& out = field.frames[static_cast<std::size_t>(i) * f.nv() + j];
      const auto [u, v] = f.grid_point(i, j);
      const JetSample jet = sample_jet(f, u, v);
      if (area_element(jet) < kDegenerateArea) continue;
      // previous sample in the row, or the start of the previous row
      const WFrameSample* ref = j > 0 ? &field.frames[static_cast<std::size_t>(i) * f.nv() + j - 1]
                                : i > 0 ? &field.frames[static_cast<std::size_t>(i - 1) * f.nv()]
                                        : nullptr;
      if (ref && !ref->valid) ref = last_valid;
      out.w = w_frame_at(jet, model, ref ? &ref->w : nullptr);
      const SurfaceFrame fr = surface_frame(jet);
      const Vector7 eta = g.cross(fr.e1, fr.e2);
      for (int b = 0; b < 4; ++b) {
        const Vector7 jw = g.cross(eta, out.w[b]);
        for (int a = 0; a < 4; ++a) out.j_w(a, b) = dot(jw, out.w[a]);
      }
      out.valid = true;
      if (ref) {
        out.angle = frame_angle(out.w, ref->w);
        out.jump = out.angle >= std::numbers::pi / 4.0;
        if (out.jump) ++field.flagged;
      }
      last_valid = &out;
    }
  const std::size_t total = field.frames.size();
  if (total > 0 && static_cast<std::size_t>(field.flagged) * 100 > total) {
    std::ostringstream msg;
    msg << "W frame alignment failed at " << field.flagged << " of " << total
        << " samples (neighbouring frames differ by at least pi/4)";
    throw FrameAlignmentError(msg.str());
  }
  return field;
}

BundleSample bundle_sample(const ParametricImmersion& f, double u, double v, const AmbientModel& model,
                           const WFrame& frame) {
  const G2Structure& g = model.structure();
  const JetStencil s = jet_stencil(f, u, v);
  const double inv2h = 1.0 / (2.0 * s.h);
  const LocalGeometry c{surface_frame(s.c), Vector7{}, frame};
  const Vector7 eta = g.cross(c.frame.e1, c.frame.e2);
  const LocalGeometry up = local_geometry(s.up, model, frame), um = local_geometry(s.um, model, frame);
  const LocalGeometry vp = local_geometry(s.vp, model, frame), vm = local_geometry(s.vm, model, frame);

  // coordinate-direction derivatives, index 0 = d/du, 1 = d/dv
  const LocalGeometry* plus[2] = {&up, &vp};
  const LocalGeometry* minus[2] = {&um, &vm};
  std::array<Eigen::Matrix4d, 2> gamma_c, dj_c, tangent_c;
  std::array<std::array<Eigen::Matrix4d, 2>, 2> df_c;
  const Eigen::Matrix4d j0 = j_matrix(eta, frame, g);
  const auto f0 = f_components(LocalGeometry{c.frame, eta, frame}, g);
  for (int d = 0; d < 2; ++d) {
    const LocalGeometry& p = *plus[d];
    const LocalGeometry& m = *minus[d];
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) gamma_c[d](a, b) = dot(inv2h * (p.w[a] - m.w[a]), frame[b]);
    dj_c[d] = inv2h * (j_matrix(p.eta, p.w, g) - j_matrix(m.eta, m.w, g));
    const Vector7 ep[2] = {p.frame.e1, p.frame.e2}, em[2] = {m.frame.e1, m.frame.e2};
    const Vector7 e0[2] = {c.frame.e1, c.frame.e2};
    tangent_c[d].setZero();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) tangent_c[d](i, j) = dot(inv2h * (ep[i] - em[i]), e0[j]);
    const auto fp = f_components(p, g), fm = f_components(m, g);
    for (int i = 0; i < 2; ++i) df_c[d][i] = inv2h * (fp[i] - fm[i]);
  }

  const FundamentalData fd = fundamental_data(s.c, model);
  const auto bf = frame_second_form(fd, c.frame);
  const Vector7 bframe[2][2] = {{bf[0], bf[1]}, {bf[1], bf[2]}};
  const std::array<double, 2> dk[2] = {c.frame.d1, c.frame.d2};
  const Vector7 e0[2] = {c.frame.e1, c.frame.e2};

  BundleSample out;
  for (int k = 0; k < 2; ++k) {
    const Eigen::Matrix4d gamma = dk[k][0] * gamma_c[0] + dk[k][1] * gamma_c[1];
    const Eigen::Matrix4d dj = dk[k][0] * dj_c[0] + dk[k][1] * dj_c[1];
    out.connection.gamma[k] = gamma;
    out.connection.metric_residual =
        std::max(out.connection.metric_residual, (gamma + gamma.transpose()).cwiseAbs().maxCoeff());

    const Eigen::Matrix4d nabla_j = dj - gamma * j0 - j0 * gamma.transpose();
    // closed form -<A^eta e_k x w_a, w_b>
    const Vector7 a_eta = dot(bframe[k][0], eta) * e0[0] + dot(bframe[k][1], eta) * e0[1];
    Eigen::Matrix4d closed;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) closed(a, b) = -dot(g.cross(a_eta, frame[a]), frame[b]);
    out.hermitian_defect = std::max(out.hermitian_defect, nabla_j.norm());
    out.closed_form = std::max(out.closed_form, closed.norm());
    out.agreement = std::max(out.agreement, (nabla_j - closed).norm());

    const Eigen::Matrix4d t = dk[k][0] * tangent_c[0] + dk[k][1] * tangent_c[1];
    double sq = 0.0;
    for (int i = 0; i < 2; ++i) {
      Eigen::Matrix4d r = dk[k][0] * df_c[0][i] + dk[k][1] * df_c[1][i];
      for (int j = 0; j < 2; ++j) r -= t(i, j) * f0[j];
      r -= gamma * f0[i] + f0[i] * gamma.transpose();
      sq += r.squaredNorm();
    }
    out.nabla_f = std::max(out.nabla_f, std::sqrt(sq));
  }

  const ComplexVector7 eps{c.frame.e1, -1.0 * c.frame.e2};
  const ComplexVector7 dirs[] = {{c.frame.e1, Vector7{}}, {c.frame.e2, Vector7{}}, eps,
                                 {(1.0 / std::sqrt(2.0)) * (c.frame.e1 + c.frame.e2), c.frame.e2}};
  out.injectivity = std::numeric_limits<double>::infinity();
  for (const ComplexVector7& y : dirs) out.injectivity = std::min(out.injectivity, two_form_norm(f_map(y, frame, g)) / norm(y));
  out.type_defect = f_map_type_defect(eps, frame, j0.transpose(), g);
  return out;
}

Eigen::Matrix4cd f_map(const ComplexVector7& y, const WFrame& w, const G2Structure& g) {
  Eigen::Matrix4cd m;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m(a, b) = Complex(g.eval(y.re, w[a], w[b]), g.eval(y.im, w[a], w[b]));
  return m;
}

Eigen::Matrix4cd f_map(const ComplexVector7& y, const PlaneSplitting& s, const G2Structure& g) {
  return f_map(y, s.w, g);
}

double two_form_norm(const Eigen::Matrix4cd& m) {
  double sq = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) sq += std::norm(m(a, b));
  return std::sqrt(sq);
}

double f_map_type_defect(const ComplexVector7& y, const WFrame& w, const Eigen::Matrix4d& j_w, const G2Structure& g) {
  const Eigen::Matrix4cd fm = f_map(y, w, g);
  std::array<Eigen::Vector4cd, 4> basis;
  for (int b = 0; b < 4; ++b) {
    basis[b] = Eigen::Vector4cd::Zero();
    basis[b](b) = 1.0;
    basis[b] += Complex(0.0, 1.0) * j_w.col(b).cast<Complex>();
  }
  double worst = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) worst = std::max(worst, std::abs((basis[a].transpose() * fm * basis[b])(0, 0)));
  return worst;
}

BundleReport w_bundle_report(const ParametricImmersion& f, const AmbientModel& model, int threads) {
  BundleReport report;
  report.field = w_frame_field(f, model);
  report.samples.resize(report.field.frames.size());
  parallel_for(report.samples.size(), threads, [&](std::size_t k) {
    const WFrameSample& fs = report.field.frames[k];
    if (!fs.valid) return;
    const auto [u, v] = f.grid_point(static_cast<int>(k / f.nv()), static_cast<int>(k % f.nv()));
    try {
      report.samples[k] = bundle_sample(f, u, v, model, fs.w);
    } catch (const DomainError&) {
      // a degenerate neighbour; leave the sample at zero
    }
  });
  report.min_injectivity = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t k = 0; k < report.samples.size(); ++k) {
    if (!report.field.frames[k].valid) continue;
    any = true;
    report.min_injectivity = std::min(report.min_injectivity, report.samples[k].injectivity);
    report.max_type_defect = std::max(report.max_type_defect, report.samples[k].type_defect);
  }
  if (!any) report.min_injectivity = 0.0;
  return report;
}

}  // namespace g2lab
