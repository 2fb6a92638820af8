#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "g2lab/algebra.hpp"
#include "oracles.hpp"

using namespace g2lab;

namespace {

Vector7 random_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector7 v;
  for (double& x : v.c) x = gauss(rng);
  return v;
}

Bivector7 random_bivector(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Bivector7 b;
  for (double& x : b.c) x = gauss(rng);
  return b;
}

double diff(const Vector7& a, const Vector7& b) { return norm(a - b); }
double diff(const Bivector7& a, const Bivector7& b) { return norm(a - b); }

Bivector7 b(int i, int j) { return Bivector7::e(i, j); }
Vector7 e(int k) { return Vector7::e(k); }

}  // namespace

TEST_CASE("wedge2 basis, antisymmetry and bilinearity") {
  CHECK(wedge2(e(1), e(2)) == b(1, 2));
  CHECK(norm(wedge2(e(5), e(5))) == 0.0);
  CHECK(diff(wedge2(e(1) + e(2), e(3)), b(1, 3) + b(2, 3)) == 0.0);
  CHECK(wedge2(e(2), e(1)).coeff(1, 2) == -1.0);
}

TEST_CASE("interior product of a vector into a bivector") {
  CHECK(interior(e(1), b(1, 2)) == e(2));
  CHECK(norm(interior(e(3), b(1, 2))) == 0.0);
  CHECK(interior(e(2), b(1, 2)) == -e(1));
}

TEST_CASE("phi0 coefficient table") {
  const ThreeForm7& phi = phi0();
  CHECK(phi.nonzero_count() == 7);
  CHECK(phi.coeff(1, 2, 3) == 1.0);
  CHECK(phi.coeff(1, 4, 5) == 1.0);
  CHECK(phi.coeff(1, 6, 7) == -1.0);
  CHECK(phi.coeff(2, 4, 6) == 1.0);
  CHECK(phi.coeff(2, 7, 5) == -1.0);
  CHECK(phi.coeff(2, 5, 7) == 1.0);
  CHECK(phi.coeff(3, 4, 7) == 1.0);
  CHECK(phi.coeff(3, 5, 6) == -1.0);
  CHECK(phi.coeff(4, 5, 6) == 0.0);
  // every entry agrees with the full-tensor oracle
  const auto t = oracle::phi0_tensor();
  for (int i = 1; i <= 7; ++i)
    for (int j = 1; j <= 7; ++j)
      for (int k = 1; k <= 7; ++k) CHECK(phi.coeff(i, j, k) == t[i - 1][j - 1][k - 1]);
}

TEST_CASE("phi_eval values and symmetry") {
  CHECK(phi_eval(e(1), e(2), e(3)) == 1.0);
  CHECK(phi_eval(e(2), e(1), e(3)) == -1.0);
  CHECK(phi_eval(e(1), e(2), e(4)) == 0.0);

  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int n = 0; n < 10000; ++n) {
    const Vector7 x = random_vector(rng), y = random_vector(rng), z = random_vector(rng);
    const double p = phi_eval(x, y, z);
    worst = std::max({worst, std::abs(p - phi_eval(y, z, x)), std::abs(p + phi_eval(y, x, z)),
                      std::abs(p - dot(x, cross(y, z)))});
  }
  CHECK(worst < 1e-14 * 50);  // values are O(10); 1e-14 relative
}

TEST_CASE("cross product table against brute-force contraction") {
  CHECK(cross(e(1), e(2)) == e(3));
  CHECK(cross(e(4), e(5)) == e(1));
  CHECK(norm(cross(e(6), e(6))) == 0.0);
  // all 49 basis pairs, hence the full 343-entry table
  for (int i = 1; i <= 7; ++i)
    for (int j = 1; j <= 7; ++j) CHECK(cross(e(i), e(j)) == oracle::cross(e(i), e(j)));
}

TEST_CASE("cross product identities on random samples") {
  std::mt19937_64 rng(12);
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const Vector7 y = random_vector(rng), z = random_vector(rng), w = random_vector(rng);
    const Vector7 yz = cross(y, z);
    const double lhs = dot(yz, cross(y, w));
    const double rhs = dot(y, y) * dot(z, w) - dot(y, z) * dot(y, w);
    const double scale = dot(y, y) * norm(z) * norm(w);
    worst = std::max({worst, std::abs(lhs - rhs) / scale, std::abs(norm(yz) - norm(wedge2(y, z))) / scale,
                      std::abs(dot(yz, y)) / scale, std::abs(dot(yz, z)) / scale});
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("curl_op examples") {
  const Bivector7 a7 = (1.0 / 3.0) * (b(1, 2) + b(4, 7) - b(5, 6));
  CHECK(diff(curl_op(a7), -2.0 * a7) < 1e-15);
  const Bivector7 a14 = 2.0 * b(1, 2) - b(4, 7) + b(5, 6);
  CHECK(diff(curl_op(a14), a14) < 1e-15);
  CHECK(diff(curl_op(b(1, 2)), -1.0 * b(4, 7) + b(5, 6)) < 1e-15);
}

TEST_CASE("curl_op agrees with the Levi-Civita oracle on every basis bivector") {
  for (int s = 0; s < kBivectorDim; ++s) {
    Bivector7 basis;
    basis[s] = 1.0;
    CHECK(diff(curl_op(basis), oracle::curl(basis)) < 1e-14);
  }
  std::mt19937_64 rng(3);
  const Bivector7 r = random_bivector(rng);
  CHECK(diff(curl_op(r), oracle::curl(r)) < 1e-12);
}

TEST_CASE("curl_op spectrum is -2 (x7) and +1 (x14)") {
  const auto m = curl_matrix();
  Eigen::Matrix<double, 21, 21> mat;
  for (int r = 0; r < 21; ++r)
    for (int c = 0; c < 21; ++c) mat(r, c) = m[r][c];
  CHECK((mat - mat.transpose()).norm() < 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 21, 21>> solver(mat);
  int minus_two = 0, plus_one = 0;
  for (int k = 0; k < 21; ++k) {
    const double ev = solver.eigenvalues()(k);
    CHECK(std::abs(ev - std::round(ev)) < 1e-10);
    if (std::round(ev) == -2.0) ++minus_two;
    if (std::round(ev) == 1.0) ++plus_one;
  }
  CHECK(minus_two == 7);
  CHECK(plus_one == 14);
}

TEST_CASE("project_split") {
  const auto [p7, p14] = project_split(b(1, 2));
  CHECK(diff(p7, (1.0 / 3.0) * (b(1, 2) + b(4, 7) - b(5, 6))) < 1e-15);
  CHECK(diff(p7 + p14, b(1, 2)) < 1e-15);

  std::mt19937_64 rng(13);
  double orth = 0.0, eig = 0.0, idem = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const Bivector7 a = random_bivector(rng);
    const auto [a7, a14] = project_split(a);
    orth = std::max(orth, std::abs(dot(a7, a14)));
    eig = std::max({eig, diff(curl_op(a7), -2.0 * a7), diff(curl_op(a14), a14), diff(a7 + a14, a)});
    const auto [a77, a7_14] = project_split(a7);
    idem = std::max({idem, diff(a77, a7), norm(a7_14)});
  }
  CHECK(orth < 1e-12);
  CHECK(eig < 1e-12);
  CHECK(idem < 1e-12);

  // an element of Lambda^2_7 splits as (alpha, 0)
  const Bivector7 in7 = (1.0 / 3.0) * phi0().contract(e(3));
  const auto [x7, x14] = project_split(in7);
  CHECK(diff(x7, in7) < 1e-15);
  CHECK(norm(x14) < 1e-15);
}

TEST_CASE("lambda7_iso and its inverse") {
  const Bivector7 l3 = lambda7_iso(e(3));
  CHECK(diff(l3, (1.0 / 3.0) * (b(1, 2) + b(4, 7) - b(5, 6))) < 1e-15);
  CHECK(std::abs(dot(l3, l3) - 1.0 / 3.0) < 1e-15);
  CHECK(diff(lambda7_iso_inv(project_split(b(1, 2)).first), e(3)) < 1e-15);

  std::mt19937_64 rng(14);
  double round_trip = 0.0, eigen = 0.0, scale = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const Vector7 x = random_vector(rng);
    const Bivector7 l = lambda7_iso(x);
    round_trip = std::max(round_trip, diff(lambda7_iso_inv(l), x));
    eigen = std::max(eigen, diff(curl_op(l), -2.0 * l));
    scale = std::max(scale, std::abs(norm(l) - norm(x) / std::sqrt(3.0)));
  }
  CHECK(round_trip < 1e-12);
  CHECK(eigen < 1e-12);
  CHECK(scale < 1e-12);

  CHECK_THROWS_AS(lambda7_iso_inv(b(1, 2)), DomainError);
}

TEST_CASE("jmap") {
  CHECK(jmap(e(3), e(1)) == e(2));
  CHECK(jmap(e(3), e(4)) == e(7));
  CHECK_THROWS_AS(jmap(e(3), e(3)), DomainError);
  CHECK_THROWS_AS(jmap(2.0 * e(3), e(1)), DomainError);

  std::mt19937_64 rng(15);
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const Vector7 eta = normalized(random_vector(rng));
    Vector7 v = random_vector(rng);
    v -= dot(v, eta) * eta;
    const Vector7 jv = jmap(eta, v);
    worst = std::max({worst, diff(jmap(eta, jv), -v), std::abs(dot(jv, eta)), std::abs(norm(jv) - norm(v))});
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("compat_check") {
  const CompatReport good = compat_check(phi0());
  CHECK(good.ok);
  CHECK(good.norm_residual < 1e-12);
  CHECK(good.j_squared_residual < 1e-12);

  const CompatReport zero = compat_check(ThreeForm7{});
  CHECK_FALSE(zero.ok);
  CHECK(zero.violated == "|y x z| = |y ^ z|");
  CHECK(zero.witness.has_value());

  CHECK_THROWS_AS(compat_check(phi0(), false), DomainError);
}

TEST_CASE("signed relabeling search finds the identity for phi0") {
  const auto rel = find_signed_relabeling(phi0());
  REQUIRE(rel.has_value());
  CHECK_FALSE(find_signed_relabeling(ThreeForm7{}).has_value());
}

TEST_CASE("Plucker condition distinguishes simple bivectors") {
  std::mt19937_64 rng(16);
  const Vector7 y = random_vector(rng), z = random_vector(rng);
  CHECK(plucker_defect(wedge2(y, z)) < 1e-12);
  CHECK(plucker_defect(b(1, 2) + b(3, 4)) > 1.0);
}
