#include "g2lab/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include <Eigen/Eigenvalues>

#include "g2lab/algebra.hpp"
#include "g2lab/grassmann.hpp"

namespace g2lab {

namespace {

std::string fmt(const char* pattern, double x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

Vector7 gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector7 v;
  for (double& x : v.c) x = g(rng);
  return v;
}

Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng)};
}

}  // namespace

bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

std::vector<CheckResult> algebra_selftest(unsigned long long seed) {
  std::vector<CheckResult> out;
  const G2Structure& g = standard_structure();

  {
    struct Term { int i, j, k; double w; };
    const Term table[] = {{1, 2, 3, 1}, {1, 4, 5, 1}, {1, 6, 7, -1}, {2, 4, 6, 1},
                          {2, 5, 7, 1}, {3, 4, 7, 1}, {3, 5, 6, -1}};
    ThreeForm7 expected;
    for (const Term& t : table) expected.add(t.i, t.j, t.k, t.w);
    out.push_back({"phi0 coefficient table", expected == phi0(), "7 nonzero terms"});
  }

  {
    const auto m = curl_matrix(g);
    Eigen::Matrix<double, kBivectorDim, kBivectorDim> mat;
    for (int r = 0; r < kBivectorDim; ++r)
      for (int c = 0; c < kBivectorDim; ++c) mat(r, c) = m[r][c];
    Eigen::SelfAdjointEigenSolver<decltype(mat)> solver(mat);
    int minus_two = 0, plus_one = 0;
    double off = 0.0;
    for (int k = 0; k < kBivectorDim; ++k) {
      const double ev = solver.eigenvalues()(k);
      off = std::max(off, std::abs(ev - std::round(ev)));
      minus_two += std::round(ev) == -2.0;
      plus_one += std::round(ev) == 1.0;
    }
    const bool pass = minus_two == 7 && plus_one == 14 && off < 1e-10 && (mat - mat.transpose()).norm() < 1e-12;
    out.push_back({"curl spectrum {-2 x7, +1 x14}", pass, fmt("max distance to integers %.3g", off)});
  }

  {
    const Bivector7 p7 = g.pi7(Bivector7::e(1, 2));
    Bivector7 expected = Bivector7::e(1, 2) + Bivector7::e(4, 7) - Bivector7::e(5, 6);
    expected = (1.0 / 3.0) * expected;
    const double err = norm(p7 - expected);
    out.push_back({"pi7(e1^e2) = (e12 + e47 - e56)/3", err < 1e-15, fmt("error %.3g", err)});
  }

  {
    std::mt19937_64 rng(seed);
    double j2 = 0.0, cross_norm = 0.0;
    for (int n = 0; n < 1000; ++n) {
      const Vector7 eta = normalized(gaussian(rng));
      Vector7 v = gaussian(rng);
      v -= dot(v, eta) * eta;
      j2 = std::max(j2, norm(g.jmap(eta, g.jmap(eta, v)) + v) / norm(v));
      const Vector7 y = normalized(gaussian(rng)), z = normalized(gaussian(rng));
      cross_norm = std::max(cross_norm, std::abs(norm(g.cross(y, z)) - norm(wedge2(y, z))));
    }
    out.push_back({"J^2 = -1 on 1000 samples", j2 < 1e-12, fmt("max residual %.3g", j2)});
    out.push_back({"|y x z| = |y ^ z| on 1000 samples", cross_norm < 1e-12, fmt("max residual %.3g", cross_norm)});
  }

  {
    const CompatReport rep = compat_check(phi0());
    out.push_back({"compat_check(phi0)", rep.ok, rep.ok ? "all identities hold" : rep.violated});
  }
  return out;
}

std::vector<CheckResult> grassmann_selftest(unsigned long long seed) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);

  double pi7_err = 0.0, eta_err = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const PiInvariants inv = pi_invariants(random_plane(rng));
    pi7_err = std::max(pi7_err, std::abs(inv.pi7_norm_sq - 1.0 / 3.0));
    eta_err = std::max(eta_err, inv.eta_recovery_residual);
  }
  out.push_back({"|pi7(xi)|^2 = 1/3 on 1000 planes", pi7_err < 1e-10, fmt("max error %.3g", pi7_err)});
  out.push_back({"lambda7_iso_inv(pi7(xi)) = eta", eta_err < 1e-10, fmt("max error %.3g", eta_err)});

  double zero = 0.0, fired = 1e300, kernel = 0.0;
  for (int n = 0; n < 200; ++n) {
    const PlaneSplitting s = plane_split(random_plane(rng));
    const ComplexVector7 eps = xi10(s);
    const ComplexVector7 eta{s.eta, Vector7{}};
    const int k = n % 4;
    const HolomorphyComponents h0 = holomorphy_components(s, wedge2(eta, eps));
    zero = std::max({zero, norm(h0.c_w), std::abs(h0.c3)});
    // a unit W^{1,0} vector wedge eps
    const ComplexVector7 w = Complex(1.0 / std::sqrt(2.0)) * w10(s, k);
    const HolomorphyComponents h1 = holomorphy_components(s, wedge2(w, eps));
    fired = std::min(fired, std::hypot(norm(h1.c_w), std::abs(h1.c3)));
    const ComplexBivector7 ker = random_complex(rng) * wedge2(w10(s, k), conj(eps)) +
                                 random_complex(rng) * wedge2(w01(s, (k + 1) % 4), eps);
    kernel = std::max(kernel, norm(pi7_vector(ker)));
  }
  out.push_back({"holomorphy components vanish on eta ^ xi^{1,0}", zero < 1e-12, fmt("max %.3g", zero)});
  out.push_back({"holomorphy components fire on W^{1,0} ^ xi^{1,0}", fired >= 1.0, fmt("min norm %.3g", fired)});
  out.push_back({"pi7 vanishes on W^{1,0}^xi^{0,1} + W^{0,1}^xi^{1,0}", kernel < 1e-10, fmt("max %.3g", kernel)});
  return out;
}

}  // namespace g2lab
