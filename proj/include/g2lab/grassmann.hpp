// Oriented 2-planes in R^7 and the geometry attached to them by a G2 form:
// the normal eta = e1 x e2, the splitting <eta>^perp = xi + W, the complex
// structures J_eta on xi and W, and the type decomposition of tangent vectors
// to the Grassmannian G(2,7) inside Lambda_2 R^7.
#pragma once

#include <array>
#include <random>

#include <Eigen/Core>

#include "g2lab/algebra.hpp"

namespace g2lab {

class OrientedPlane2 {
 public:
  /// Accepts an oriented orthonormal frame; rejects anything off by more than tol.
  static OrientedPlane2 from_frame(const Vector7& e1, const Vector7& e2, double tol = 1e-10);
  /// Orientation-preserving Gram-Schmidt of (y, z); rejects |y^z| < 1e-8 |y||z|.
  static OrientedPlane2 from_vectors(const Vector7& y, const Vector7& z);

  const Vector7& e1() const { return e1_; }
  const Vector7& e2() const { return e2_; }
  Bivector7 bivector() const { return wedge2(e1_, e2_); }

 private:
  OrientedPlane2(const Vector7& e1, const Vector7& e2) : e1_(e1), e2_(e2) {}
  Vector7 e1_;
  Vector7 e2_;
};

struct PlaneSplitting {
  Vector7 eta;
  Vector7 e1;
  Vector7 e2;
  std::array<Vector7, 4> w;  // orthonormal frame of W = <e1, e2, eta>^perp
  Eigen::Matrix2d j_xi;      // column b holds J e_b in (e1, e2)
  Eigen::Matrix4d j_w;       // column b holds J w_b in w
};

PlaneSplitting plane_split(const OrientedPlane2& p, const G2Structure& g = standard_structure());

/// Orthonormal frame of span(fixed)^perp built from the ambient basis:
/// repeatedly take the projected basis vector of largest norm (lowest index on
/// ties) and Gram-Schmidt it against what is already chosen.
std::array<Vector7, 4> complement_frame(const std::array<Vector7, 3>& fixed);

/// omega(v, w) = phi(eta, v, w) on W, as a matrix in the w frame.
Eigen::Matrix4d fundamental_form_w(const PlaneSplitting& s, const G2Structure& g = standard_structure());

/// Pf of a 4x4 antisymmetric matrix; (omega ^ omega)(w1..w4) == 2 Pf(omega).
double pfaffian(const Eigen::Matrix4d& m);

// ---------------------------------------------------------------------------
// Tangent vectors to G(2,7)

struct GrassTangent {
  OrientedPlane2 base;
  Bivector7 value;
};

/// value == v1 ^ e1 + v2 ^ e2 + eta ^ (a e1 + b e2), with v1, v2 in W.
struct TangentComponents {
  Vector7 v1;
  Vector7 v2;
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;  // |value - reconstruction|
};

TangentComponents tangent_decompose(const PlaneSplitting& s, const Bivector7& value, double tol = 1e-8);
TangentComponents tangent_decompose(const GrassTangent& t, const G2Structure& g = standard_structure());

// ---------------------------------------------------------------------------
// Complex types. The (1,0) space of a J-invariant subspace is spanned by
// v - i J v, which is the +i eigenspace of the complex-linear extension of J.

/// J = eta x . extended complex-linearly.
ComplexVector7 apply_j(const PlaneSplitting& s, const ComplexVector7& v,
                       const G2Structure& g = standard_structure());

/// eps = e1 - i e2, spanning xi^{1,0}.
ComplexVector7 xi10(const PlaneSplitting& s);
/// w_k - i J w_k and w_k + i J w_k, k in 0..3.
ComplexVector7 w10(const PlaneSplitting& s, int k, const G2Structure& g = standard_structure());
ComplexVector7 w01(const PlaneSplitting& s, int k, const G2Structure& g = standard_structure());

/// Orthogonal projection onto W (complexified), then onto W^{1,0}: (w - iJw)/2.
ComplexVector7 project_w10(const PlaneSplitting& s, const ComplexVector7& v,
                           const G2Structure& g = standard_structure());

/// Components whose joint vanishing is equivalent to pi7(alpha) lying in E^{1,0}:
/// cW is the W^{1,0} part of conj(eps) _| alpha and c3 is <eps _| alpha, eta>,
/// with the contraction complex bilinear and eps = e1 - i e2.
struct HolomorphyComponents {
  ComplexVector7 c_w;
  Complex c3;
};

HolomorphyComponents holomorphy_components(const PlaneSplitting& s, const ComplexBivector7& alpha,
                                           const G2Structure& g = standard_structure());

/// pi7(alpha) as a complex vector, via lambda7_iso_inv on real and imaginary parts.
ComplexVector7 pi7_vector(const ComplexBivector7& alpha, const G2Structure& g = standard_structure());

/// |E^{0,1} part of v|, where E = <eta>^perp; zero iff v lies in E^{1,0} (given v _|_ eta).
double e01_defect(const PlaneSplitting& s, const ComplexVector7& v, const G2Structure& g = standard_structure());

// ---------------------------------------------------------------------------
// Invariants of the projections pi7, pi14 on G(2,7)

struct PiInvariants {
  double pi7_norm_sq = 0.0;         // |pi7(xi)|^2, 1/3 for every plane
  double eta_recovery_residual = 0.0;  // |lambda7_iso_inv(pi7(xi)) - eta|
};

PiInvariants pi_invariants(const OrientedPlane2& p, const G2Structure& g = standard_structure());

/// Smallest |pi14(xi) - pi14(xi')| / |xi - xi'| over random plane pairs, half
/// of them nearby pairs (random tangent perturbations of size ~1e-3).
double pi14_injectivity_ratio(int samples, unsigned long long seed = 7,
                              const G2Structure& g = standard_structure());

Vector7 random_unit_vector(std::mt19937_64& rng);
OrientedPlane2 random_plane(std::mt19937_64& rng);

}  // namespace g2lab
