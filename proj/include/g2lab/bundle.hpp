// The rank-2 complex bundle W = <e1, e2, eta>^perp over an immersed surface:
// frames, its induced connection, the parallelism of J_eta on W and the map
// F(Y) = (Y _| phi)|_W.
#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "g2lab/surface.hpp"

namespace g2lab {

using WFrame = std::array<Vector7, 4>;

class FrameAlignmentError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct WFrameSample {
  WFrame w{};
  Eigen::Matrix4d j_w = Eigen::Matrix4d::Zero();  // column b holds J w_b in the frame
  double angle = 0.0;  // largest angle between w_b and the predecessor's w_b
  bool jump = false;   // angle >= pi/4
  bool valid = false;  // false on degenerate samples
};

struct WFrameField {
  int nu = 0, nv = 0;
  std::vector<WFrameSample> frames;  // row-major like DefectReport
  int flagged = 0;
};

/// Frames from the ambient basis projected to W, oriented so that
/// (e1, e2, eta, w) is positive, then rotated inside W to the nearest frame
/// to the predecessor in the row-major sweep. Throws FrameAlignmentError if
/// more than 1% of the samples jump.
WFrameField w_frame_field(const ParametricImmersion& f, const AmbientModel& model);

/// Orthonormal frame of W at a sample, aligned with `reference` (when given)
/// by the closest rotation.
WFrame w_frame_at(const JetSample& jet, const AmbientModel& model, const WFrame* reference = nullptr);

/// J_ab = phi(eta, w_a, w_b) = <J w_a, w_b>.
Eigen::Matrix4d j_matrix(const Vector7& eta, const WFrame& w, const G2Structure& g);

/// Connection one-form of W in the frame along e1 and e2:
/// gamma[k](a, b) = <nabla_{e_k} w_a, w_b>.
struct ConnectionSample {
  std::array<Eigen::Matrix4d, 2> gamma;
  double metric_residual = 0.0;  // max |gamma + gamma^T|
};

/// Per-sample quantities of the W bundle.
struct BundleSample {
  ConnectionSample connection;
  double hermitian_defect = 0.0;  // max_k |(nabla_{e_k} J)| by finite differences
  double closed_form = 0.0;       // max_k |-<A^eta e_k x w_a, w_b>|
  double agreement = 0.0;         // max_k |FD - closed form|
  double nabla_f = 0.0;           // max_k |(nabla_{e_k} F)|
  double injectivity = 0.0;       // min |F(Y)| / |Y| over a few tangent Y
  double type_defect = 0.0;       // f_map_type_defect at Y = e1 - i e2
};

BundleSample bundle_sample(const ParametricImmersion& f, double u, double v, const AmbientModel& model,
                           const WFrame& frame);

/// F(Y)(w_a, w_b) = phi(Y, w_a, w_b), complex-linear in Y.
Eigen::Matrix4cd f_map(const ComplexVector7& y, const WFrame& w, const G2Structure& g);
Eigen::Matrix4cd f_map(const ComplexVector7& y, const PlaneSplitting& s, const G2Structure& g);

/// Norm of a 2-form given by its antisymmetric matrix: sqrt(sum_{a<b} |m_ab|^2).
double two_form_norm(const Eigen::Matrix4cd& m);

/// max |F(Y)(x, y)| over pairs x, y of the basis w_b + i J w_b of W^{0,1}.
double f_map_type_defect(const ComplexVector7& y, const WFrame& w, const Eigen::Matrix4d& j_w,
                         const G2Structure& g);

struct BundleReport {
  WFrameField field;
  std::vector<BundleSample> samples;  // row-major, zero on invalid frames
  double min_injectivity = 0.0;       // min |F(Y)| / |Y| over samples and test directions
  double max_type_defect = 0.0;
};

BundleReport w_bundle_report(const ParametricImmersion& f, const AmbientModel& model, int threads = 1);

}  // namespace g2lab
