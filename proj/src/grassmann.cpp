#include "g2lab/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace g2lab {

OrientedPlane2 OrientedPlane2::from_frame(const Vector7& e1, const Vector7& e2, double tol) {
  if (std::abs(norm(e1) - 1.0) > tol || std::abs(norm(e2) - 1.0) > tol || std::abs(dot(e1, e2)) > tol)
    throw DomainError("OrientedPlane2: frame is not orthonormal");
  return OrientedPlane2(e1, e2);
}

OrientedPlane2 OrientedPlane2::from_vectors(const Vector7& y, const Vector7& z) {
  const double ny = norm(y);
  const double nz = norm(z);
  if (ny == 0.0 || nz == 0.0 || norm(wedge2(y, z)) < 1e-8 * ny * nz)
    throw DomainError("OrientedPlane2: degenerate frame (|y^z| below 1e-8)");
  const Vector7 e1 = y / ny;
  const Vector7 e2 = normalized(z - dot(z, e1) * e1);
  return OrientedPlane2(e1, e2);
}

std::array<Vector7, 4> complement_frame(const std::array<Vector7, 3>& fixed) {
  std::array<Vector7, 4> out;
  std::array<bool, kDim> used{};
  auto project = [&](Vector7 x, int chosen) {
    for (const Vector7& f : fixed) x -= dot(x, f) * f;
    for (int c = 0; c < chosen; ++c) x -= dot(x, out[c]) * out[c];
    return x;
  };
  for (int chosen = 0; chosen < 4; ++chosen) {
    int best = -1;
    double best_norm = -1.0;
    Vector7 best_vec;
    for (int k = 0; k < kDim; ++k) {
      if (used[k]) continue;
      // Project twice for numerical orthogonality.
      const Vector7 x = project(project(Vector7::e(k + 1), chosen), chosen);
      const double n = norm(x);
      if (n > best_norm + 1e-12) {
        best = k;
        best_norm = n;
        best_vec = x;
      }
    }
    if (best < 0 || best_norm < 1e-8) throw DomainError("complement_frame: fixed vectors are not orthonormal");
    used[best] = true;
    out[chosen] = best_vec / best_norm;
  }
  return out;
}

PlaneSplitting plane_split(const OrientedPlane2& p, const G2Structure& g) {
  if (norm(p.bivector()) < 1e-8) throw DomainError("plane_split: degenerate frame");
  PlaneSplitting s;
  s.e1 = p.e1();
  s.e2 = p.e2();
  s.eta = g.cross(s.e1, s.e2);
  s.w = complement_frame({s.e1, s.e2, s.eta});
  const std::array<Vector7, 2> xi{s.e1, s.e2};
  for (int b = 0; b < 2; ++b) {
    const Vector7 jb = g.cross(s.eta, xi[b]);
    for (int a = 0; a < 2; ++a) s.j_xi(a, b) = dot(xi[a], jb);
  }
  for (int b = 0; b < 4; ++b) {
    const Vector7 jb = g.cross(s.eta, s.w[b]);
    for (int a = 0; a < 4; ++a) s.j_w(a, b) = dot(s.w[a], jb);
  }
  return s;
}

Eigen::Matrix4d fundamental_form_w(const PlaneSplitting& s, const G2Structure& g) {
  Eigen::Matrix4d m;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m(a, b) = g.eval(s.eta, s.w[a], s.w[b]);
  return m;
}

double pfaffian(const Eigen::Matrix4d& m) {
  return m(0, 1) * m(2, 3) - m(0, 2) * m(1, 3) + m(0, 3) * m(1, 2);
}

TangentComponents tangent_decompose(const PlaneSplitting& s, const Bivector7& value, double tol) {
  auto to_w = [&](Vector7 x) {
    x -= dot(x, s.e1) * s.e1;
    x -= dot(x, s.e2) * s.e2;
    x -= dot(x, s.eta) * s.eta;
    return x;
  };
  // e1 _| value = -v1 - a eta,  e2 _| value = -v2 - b eta
  const Vector7 c1 = interior(s.e1, value);
  const Vector7 c2 = interior(s.e2, value);
  TangentComponents t;
  t.v1 = -to_w(c1);
  t.v2 = -to_w(c2);
  t.a = -dot(c1, s.eta);
  t.b = -dot(c2, s.eta);
  const Bivector7 rebuilt =
      wedge2(t.v1, s.e1) + wedge2(t.v2, s.e2) + wedge2(s.eta, t.a * s.e1 + t.b * s.e2);
  t.residual = norm(value - rebuilt);
  if (t.residual > tol)
    throw DomainError("tangent_decompose: value is not tangent to G(2,7) (residual " +
                      std::to_string(t.residual) + ")");
  return t;
}

TangentComponents tangent_decompose(const GrassTangent& t, const G2Structure& g) {
  return tangent_decompose(plane_split(t.base, g), t.value);
}

ComplexVector7 apply_j(const PlaneSplitting& s, const ComplexVector7& v, const G2Structure& g) {
  return {g.cross(s.eta, v.re), g.cross(s.eta, v.im)};
}

ComplexVector7 xi10(const PlaneSplitting& s) { return {s.e1, -s.e2}; }

ComplexVector7 w10(const PlaneSplitting& s, int k, const G2Structure& g) {
  return {s.w.at(k), -g.cross(s.eta, s.w.at(k))};
}

ComplexVector7 w01(const PlaneSplitting& s, int k, const G2Structure& g) {
  return {s.w.at(k), g.cross(s.eta, s.w.at(k))};
}

ComplexVector7 project_w10(const PlaneSplitting& s, const ComplexVector7& v, const G2Structure& g) {
  auto to_w = [&](Vector7 x) {
    x -= dot(x, s.e1) * s.e1;
    x -= dot(x, s.e2) * s.e2;
    x -= dot(x, s.eta) * s.eta;
    return x;
  };
  const Vector7 x = to_w(v.re);
  const Vector7 y = to_w(v.im);
  const Vector7 jx = g.cross(s.eta, x);
  const Vector7 jy = g.cross(s.eta, y);
  return {0.5 * (x + jy), 0.5 * (y - jx)};
}

HolomorphyComponents holomorphy_components(const PlaneSplitting& s, const ComplexBivector7& alpha,
                                           const G2Structure& g) {
  const ComplexVector7 eps = xi10(s);
  const ComplexVector7 eta{s.eta, Vector7{}};
  HolomorphyComponents h;
  h.c3 = dot(interior(eps, alpha), eta);
  h.c_w = project_w10(s, interior(conj(eps), alpha), g);
  return h;
}

ComplexVector7 pi7_vector(const ComplexBivector7& alpha, const G2Structure& g) {
  return {g.form().contract(g.pi7(alpha.re)), g.form().contract(g.pi7(alpha.im))};
}

double e01_defect(const PlaneSplitting& s, const ComplexVector7& v, const G2Structure& g) {
  const Vector7 jx = g.cross(s.eta, v.re);
  const Vector7 jy = g.cross(s.eta, v.im);
  // (v + i J v) / 2
  return norm(ComplexVector7{0.5 * (v.re - jy), 0.5 * (v.im + jx)});
}

PiInvariants pi_invariants(const OrientedPlane2& p, const G2Structure& g) {
  const Bivector7 xi = p.bivector();
  const Bivector7 p7 = g.pi7(xi);
  PiInvariants r;
  r.pi7_norm_sq = dot(p7, p7);
  r.eta_recovery_residual = norm(g.lambda7_iso_inv(p7) - g.cross(p.e1(), p.e2()));
  return r;
}

Vector7 random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector7 v;
  for (double& x : v.c) x = gauss(rng);
  return normalized(v);
}

OrientedPlane2 random_plane(std::mt19937_64& rng) {
  const Vector7 y = random_unit_vector(rng);
  const Vector7 z = random_unit_vector(rng);
  return OrientedPlane2::from_vectors(y, z);
}

double pi14_injectivity_ratio(int samples, unsigned long long seed, const G2Structure& g) {
  std::mt19937_64 rng(seed);
  double worst = std::numeric_limits<double>::infinity();
  for (int n = 0; n < samples; ++n) {
    const OrientedPlane2 p = random_plane(rng);
    OrientedPlane2 q = p;
    if (n % 2 == 0) {
      q = random_plane(rng);
    } else {
      const Vector7 a = random_unit_vector(rng);
      const Vector7 b = random_unit_vector(rng);
      q = OrientedPlane2::from_vectors(p.e1() + 1e-3 * a, p.e2() + 1e-3 * b);
    }
    const double d = norm(p.bivector() - q.bivector());
    if (d < 1e-12) continue;
    worst = std::min(worst, norm(g.pi14(p.bivector()) - g.pi14(q.bivector())) / d);
  }
  return worst;
}

}  // namespace g2lab
