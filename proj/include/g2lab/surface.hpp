// Immersed surfaces f: [u0,u1] x [v0,v1] -> X sampled on a uniform grid:
// finite-difference jets, fundamental forms, the Gauss lift and the
// holomorphy defect of its derivative.
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "g2lab/algebra.hpp"
#include "g2lab/ambient.hpp"
#include "g2lab/grassmann.hpp"

namespace g2lab {

struct Rect {
  double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;
};

struct JetSample {
  double u = 0.0, v = 0.0;
  Vector7 f, fu, fv, fuu, fuv, fvv;
};

using SurfaceMap = std::function<Vector7(double, double)>;
using JetMap = std::function<JetSample(double, double)>;

class ParametricImmersion {
 public:
  ParametricImmersion(Rect domain, int nu, int nv, double fd_step, SurfaceMap map, JetMap exact_jet = {});

  Vector7 operator()(double u, double v) const { return map_(u, v); }

  const Rect& domain() const { return domain_; }
  int nu() const { return nu_; }
  int nv() const { return nv_; }
  double fd_step() const { return h_; }

  /// Cell-centred grid point (i, j), i along u.
  std::pair<double, double> grid_point(int i, int j) const;

  bool has_exact_jet() const { return static_cast<bool>(exact_); }
  JetSample exact_jet(double u, double v) const;

  ParametricImmersion with_step(double h) const;
  ParametricImmersion with_grid(int nu, int nv) const;
  ParametricImmersion with_domain(const Rect& domain) const;

 private:
  Rect domain_;
  int nu_, nv_;
  double h_;
  SurfaceMap map_;
  JetMap exact_;
};

/// Second-order central differences at (u, v); the point must sit at least
/// 2h inside the domain so that neighbouring jets stay inside as well.
JetSample sample_jet(const ParametricImmersion& f, double u, double v, double h);
JetSample sample_jet(const ParametricImmersion& f, double u, double v);

/// Jets at p and at its four axis neighbours p +- h (h = f.fd_step()); the
/// margin is checked at p only.
struct JetStencil {
  double h = 0.0;
  JetSample c, up, um, vp, vm;
};

JetStencil jet_stencil(const ParametricImmersion& f, double u, double v);

/// |f_u ^ f_v| below this marks a sample degenerate.
inline constexpr double kDegenerateArea = 1e-6;
double area_element(const JetSample& jet);

struct FundamentalData {
  double E = 0.0, F = 0.0, G = 0.0;
  Vector7 B_uu, B_uv, B_vv;  // normal projections of the second partials
  Vector7 H;                 // g^{ij} B_ij
  Vector7 tau;               // f_uu + f_vv, the tension for the chart's conformal structure
  double r_conf = 0.0;       // (|E - G| + 2|F|) / (E + G)
  double tau_norm = 0.0;     // |tau| / ((E + G) / 2); equals |H| on conformal samples
};

FundamentalData fundamental_data(const JetSample& jet, const AmbientModel& model);

/// Oriented orthonormal frame e1 = f_u/|f_u|, e2 = Gram-Schmidt of f_v, and
/// the parameter-space vectors d1, d2 with f_*(d_k) = e_k.
struct SurfaceFrame {
  Vector7 e1, e2;
  std::array<double, 2> d1{}, d2{};
};

SurfaceFrame surface_frame(const JetSample& jet);

/// B(e_i, e_j) as {B11, B12, B22}.
std::array<Vector7, 3> frame_second_form(const FundamentalData& fd, const SurfaceFrame& frame);

struct LiftSample {
  OrientedPlane2 xi;
  Vector7 eta;
  std::array<Vector7, 2> d_eta;  // along d/du, d/dv, projected to <eta>^perp
  std::array<Vector7, 2> horiz;  // f_* d/du, f_* d/dv
  std::array<Vector7, 2> vert;   // vertical part of the lift derivative
};

LiftSample gauss_lift(const ParametricImmersion& f, double u, double v, const AmbientModel& model);

double tangency_residual(const LiftSample& lift);

/// max over d/du of |f_*(J d/du) - J_eta f_*(d/du)| / |f_*(d/du)|, with J d/du = d/dv.
double horizontal_j_defect(const LiftSample& lift, const AmbientModel& model);

/// max |<B, eta>| / (|B| + floor) over the three coordinate values of B.
inline constexpr double kAEtaFloor = 1e-3;
double a_eta_residual(const FundamentalData& fd, const LiftSample& lift);

struct HolomorphyDefect {
  double cw_norm = 0.0;
  double c3_norm = 0.0;
  double r_conf = 0.0;
  ComplexVector7 c_w;
  Complex c3;
  // Agreement with the closed forms c3 = i<B(eps,eps), eta> and cW = W^{1,0}(-iH),
  // and of the frame-corrected derivative of the frame with B.
  double c3_identity = 0.0;
  double cw_identity = 0.0;
  double frame_identity = 0.0;
};

HolomorphyDefect holomorphy_defect(const ParametricImmersion& f, double u, double v, const AmbientModel& model);

// ---------------------------------------------------------------------------
// Grid report

enum class Verdict { HolomorphicLift, ConformalNotHarmonic, NonConformal, HypothesisViolated, Inconsistent, Invalid };

std::string verdict_name(Verdict v);
std::optional<Verdict> verdict_from_name(const std::string& name);

enum SampleFlag : int { kFlagOk = 0, kFlagDegenerate = 1, kFlagFrameJump = 2 };

struct SampleRow {
  double u = 0.0, v = 0.0;
  int flag = kFlagOk;
  double r_conf = 0.0, tau_norm = 0.0, a_eta = 0.0, cw = 0.0, c3 = 0.0;
  double w_defect = 0.0;
  // Diagnostics that are not part of the CSV.
  double h_norm = 0.0;
  double b_scale = 0.0;  // max |B(e_i, e_j)|
  double tangency = 0.0;
  double horizontal_j = 0.0;
  double c3_identity = 0.0, cw_identity = 0.0, frame_identity = 0.0;
};

SampleRow evaluate_sample(const ParametricImmersion& f, double u, double v, const AmbientModel& model);

inline constexpr int kReportColumns = 6;  // r_conf, tau_norm, a_eta, cW, c3, w_defect

struct Aggregates {
  std::array<double, kReportColumns> max{};
  std::array<double, kReportColumns> mean{};
  int samples = 0;     // non-degenerate rows
  int degenerate = 0;
};

std::array<double, kReportColumns> report_columns(const SampleRow& row);
Aggregates aggregate(const std::vector<SampleRow>& rows);

struct DefectReport {
  int nu = 0, nv = 0;
  double fd_step = 0.0;
  std::vector<SampleRow> rows;  // row-major: i along u outer, j along v inner
  Aggregates agg;
  double curvature_scale = 1.0;  // max |B| over the grid + 1
  double zero_tol = 0.0;         // 10 h^2 curvature_scale
  Verdict verdict = Verdict::Invalid;
  bool valid = true;             // false when more than 1% of samples are degenerate
};

/// Classifies aggregated residuals; a residual below tol counts as zero.
Verdict classify(const Aggregates& agg, double tol);

/// Evaluates every grid sample (concurrently when threads != 1; 0 = hardware
/// concurrency) and assembles rows in row-major order.
DefectReport theorem_report(const ParametricImmersion& f, const AmbientModel& model, int threads = 1);

/// Recomputes aggregates, tolerance and verdict after rows were edited.
void finalize_report(DefectReport& report);

}  // namespace g2lab
