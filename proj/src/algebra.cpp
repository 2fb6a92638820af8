#include "g2lab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace g2lab {

namespace {

struct SlotTables {
  std::array<std::array<int, kDim>, kDim> pair{};
  std::array<std::pair<int, int>, kBivectorDim> pairs{};
  std::array<std::array<std::array<int, kDim>, kDim>, kDim> triple{};
  std::array<std::array<int, 3>, kThreeFormDim> triples{};

  SlotTables() {
    for (auto& row : pair) row.fill(-1);
    int s = 0;
    for (int i = 0; i < kDim; ++i)
      for (int j = i + 1; j < kDim; ++j) {
        pair[i][j] = s;
        pairs[s] = {i, j};
        ++s;
      }
    for (auto& a : triple)
      for (auto& b : a) b.fill(-1);
    s = 0;
    for (int i = 0; i < kDim; ++i)
      for (int j = i + 1; j < kDim; ++j)
        for (int k = j + 1; k < kDim; ++k) {
          triple[i][j][k] = s;
          triples[s] = {i, j, k};
          ++s;
        }
  }
};

const SlotTables& tables() {
  static const SlotTables t;
  return t;
}

void check_index(int i) {
  if (i < 1 || i > kDim) throw DomainError("basis index out of range 1..7: " + std::to_string(i));
}

// Parity (+1/-1) of a sequence of distinct integers relative to sorted order.
template <std::size_t N>
int parity(const std::array<int, N>& seq) {
  int inversions = 0;
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = a + 1; b < N; ++b)
      if (seq[a] > seq[b]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

// Sorts three 0-based indices, returning the permutation sign (0 if repeated).
int sort3(int& i, int& j, int& k) {
  if (i == j || j == k || i == k) return 0;
  int sign = 1;
  if (i > j) { std::swap(i, j); sign = -sign; }
  if (j > k) { std::swap(j, k); sign = -sign; }
  if (i > j) { std::swap(i, j); sign = -sign; }
  return sign;
}

}  // namespace

// ---------------------------------------------------------------------------
// Vector7

Vector7 Vector7::e(int k) {
  check_index(k);
  Vector7 v;
  v.c[k - 1] = 1.0;
  return v;
}

Vector7& Vector7::operator+=(const Vector7& o) {
  for (int i = 0; i < kDim; ++i) c[i] += o.c[i];
  return *this;
}
Vector7& Vector7::operator-=(const Vector7& o) {
  for (int i = 0; i < kDim; ++i) c[i] -= o.c[i];
  return *this;
}
Vector7& Vector7::operator*=(double s) {
  for (double& x : c) x *= s;
  return *this;
}

Vector7 operator+(Vector7 a, const Vector7& b) { return a += b; }
Vector7 operator-(Vector7 a, const Vector7& b) { return a -= b; }
Vector7 operator-(Vector7 a) { return a *= -1.0; }
Vector7 operator*(double s, Vector7 a) { return a *= s; }
Vector7 operator*(Vector7 a, double s) { return a *= s; }
Vector7 operator/(Vector7 a, double s) { return a *= 1.0 / s; }

double dot(const Vector7& a, const Vector7& b) {
  double s = 0.0;
  for (int i = 0; i < kDim; ++i) s += a.c[i] * b.c[i];
  return s;
}
double norm_squared(const Vector7& a) { return dot(a, a); }
double norm(const Vector7& a) { return std::sqrt(dot(a, a)); }
Vector7 normalized(const Vector7& a) {
  const double n = norm(a);
  if (n == 0.0) throw DomainError("cannot normalize the zero vector");
  return a / n;
}

// ---------------------------------------------------------------------------
// Bivector7

int pair_slot(int i, int j) {
  check_index(i);
  check_index(j);
  if (i >= j) throw DomainError("pair_slot requires i < j");
  return tables().pair[i - 1][j - 1];
}

std::pair<int, int> slot_pair(int slot) {
  const auto [i, j] = tables().pairs.at(static_cast<std::size_t>(slot));
  return {i + 1, j + 1};
}

Bivector7 Bivector7::e(int i, int j) {
  Bivector7 b;
  b.add(i, j, 1.0);
  return b;
}

double Bivector7::coeff(int i, int j) const {
  check_index(i);
  check_index(j);
  if (i == j) return 0.0;
  return i < j ? c[tables().pair[i - 1][j - 1]] : -c[tables().pair[j - 1][i - 1]];
}

void Bivector7::add(int i, int j, double value) {
  check_index(i);
  check_index(j);
  if (i == j) return;
  if (i < j)
    c[tables().pair[i - 1][j - 1]] += value;
  else
    c[tables().pair[j - 1][i - 1]] -= value;
}

Bivector7& Bivector7::operator+=(const Bivector7& o) {
  for (int s = 0; s < kBivectorDim; ++s) c[s] += o.c[s];
  return *this;
}
Bivector7& Bivector7::operator-=(const Bivector7& o) {
  for (int s = 0; s < kBivectorDim; ++s) c[s] -= o.c[s];
  return *this;
}
Bivector7& Bivector7::operator*=(double s) {
  for (double& x : c) x *= s;
  return *this;
}

Bivector7 operator+(Bivector7 a, const Bivector7& b) { return a += b; }
Bivector7 operator-(Bivector7 a, const Bivector7& b) { return a -= b; }
Bivector7 operator-(Bivector7 a) { return a *= -1.0; }
Bivector7 operator*(double s, Bivector7 a) { return a *= s; }
Bivector7 operator*(Bivector7 a, double s) { return a *= s; }

double dot(const Bivector7& a, const Bivector7& b) {
  double s = 0.0;
  for (int k = 0; k < kBivectorDim; ++k) s += a.c[k] * b.c[k];
  return s;
}
double norm(const Bivector7& a) { return std::sqrt(dot(a, a)); }

Bivector7 wedge2(const Vector7& y, const Vector7& z) {
  Bivector7 b;
  for (int s = 0; s < kBivectorDim; ++s) {
    const auto [i, j] = tables().pairs[s];
    b.c[s] = y.c[i] * z.c[j] - y.c[j] * z.c[i];
  }
  return b;
}

Vector7 interior(const Vector7& v, const Bivector7& b) {
  Vector7 out;
  for (int s = 0; s < kBivectorDim; ++s) {
    const auto [i, j] = tables().pairs[s];
    // v _| (e_i ^ e_j) = v_i e_j - v_j e_i
    out.c[j] += b.c[s] * v.c[i];
    out.c[i] -= b.c[s] * v.c[j];
  }
  return out;
}

double plucker_defect(const Bivector7& b) {
  // (b ^ b) on e_{ijkl}, i<j<k<l: 2 (b_ij b_kl - b_ik b_jl + b_il b_jk).
  double sum = 0.0;
  for (int i = 1; i <= kDim; ++i)
    for (int j = i + 1; j <= kDim; ++j)
      for (int k = j + 1; k <= kDim; ++k)
        for (int l = k + 1; l <= kDim; ++l) {
          const double w = 2.0 * (b.coeff(i, j) * b.coeff(k, l) - b.coeff(i, k) * b.coeff(j, l) +
                                  b.coeff(i, l) * b.coeff(j, k));
          sum += w * w;
        }
  return std::sqrt(sum);
}

// ---------------------------------------------------------------------------
// ThreeForm7

int triple_slot(int i, int j, int k) {
  check_index(i);
  check_index(j);
  check_index(k);
  if (!(i < j && j < k)) throw DomainError("triple_slot requires i < j < k");
  return tables().triple[i - 1][j - 1][k - 1];
}

double ThreeForm7::coeff(int i, int j, int k) const {
  check_index(i);
  check_index(j);
  check_index(k);
  int a = i - 1, b = j - 1, c = k - 1;
  const int sign = sort3(a, b, c);
  if (sign == 0) return 0.0;
  return sign * coeffs_[tables().triple[a][b][c]];
}

void ThreeForm7::add(int i, int j, int k, double value) {
  check_index(i);
  check_index(j);
  check_index(k);
  int a = i - 1, b = j - 1, c = k - 1;
  const int sign = sort3(a, b, c);
  if (sign == 0) return;
  coeffs_[tables().triple[a][b][c]] += sign * value;
}

double ThreeForm7::eval(const Vector7& x, const Vector7& y, const Vector7& z) const {
  double s = 0.0;
  for (int t = 0; t < kThreeFormDim; ++t) {
    const double w = coeffs_[t];
    if (w == 0.0) continue;
    const auto [i, j, k] = tables().triples[t];
    // determinant of the 3x3 minor of (x, y, z) on rows i, j, k
    const double det = x.c[i] * (y.c[j] * z.c[k] - y.c[k] * z.c[j]) -
                       x.c[j] * (y.c[i] * z.c[k] - y.c[k] * z.c[i]) +
                       x.c[k] * (y.c[i] * z.c[j] - y.c[j] * z.c[i]);
    s += w * det;
  }
  return s;
}

Bivector7 ThreeForm7::contract(const Vector7& x) const {
  Bivector7 b;
  for (int t = 0; t < kThreeFormDim; ++t) {
    const double w = coeffs_[t];
    if (w == 0.0) continue;
    const auto [i, j, k] = tables().triples[t];
    // x _| e^{ijk} = x_i e^{jk} - x_j e^{ik} + x_k e^{ij}
    b.c[tables().pair[j][k]] += w * x.c[i];
    b.c[tables().pair[i][k]] -= w * x.c[j];
    b.c[tables().pair[i][j]] += w * x.c[k];
  }
  return b;
}

Vector7 ThreeForm7::contract(const Bivector7& beta) const {
  Vector7 out;
  for (int t = 0; t < kThreeFormDim; ++t) {
    const double w = coeffs_[t];
    if (w == 0.0) continue;
    const auto [i, j, k] = tables().triples[t];
    // phi(beta, e_m) for beta = e_a ^ e_b picks the coefficient on (a, b, m)
    out.c[k] += w * beta.c[tables().pair[i][j]];
    out.c[j] -= w * beta.c[tables().pair[i][k]];
    out.c[i] += w * beta.c[tables().pair[j][k]];
  }
  return out;
}

int ThreeForm7::nonzero_count(double tol) const {
  return static_cast<int>(
      std::count_if(coeffs_.begin(), coeffs_.end(), [tol](double w) { return std::abs(w) > tol; }));
}

const ThreeForm7& phi0() {
  static const ThreeForm7 form = [] {
    ThreeForm7 f;
    f.add(1, 2, 3, 1.0);
    // eps^1 ^ eta^-_1, eta^-_1 = eps^45 - eps^67
    f.add(1, 4, 5, 1.0);
    f.add(1, 6, 7, -1.0);
    // eps^2 ^ eta^-_2, eta^-_2 = eps^46 - eps^75
    f.add(2, 4, 6, 1.0);
    f.add(2, 7, 5, -1.0);
    // eps^3 ^ eta^-_3, eta^-_3 = eps^47 - eps^56
    f.add(3, 4, 7, 1.0);
    f.add(3, 5, 6, -1.0);
    return f;
  }();
  return form;
}

// ---------------------------------------------------------------------------
// Complex types

ComplexVector7 operator+(const ComplexVector7& a, const ComplexVector7& b) {
  return {a.re + b.re, a.im + b.im};
}
ComplexVector7 operator-(const ComplexVector7& a, const ComplexVector7& b) {
  return {a.re - b.re, a.im - b.im};
}
ComplexVector7 operator*(Complex s, const ComplexVector7& a) {
  return {s.real() * a.re - s.imag() * a.im, s.real() * a.im + s.imag() * a.re};
}
ComplexVector7 conj(const ComplexVector7& a) { return {a.re, -a.im}; }
Complex dot(const ComplexVector7& a, const ComplexVector7& b) {
  return {dot(a.re, b.re) - dot(a.im, b.im), dot(a.re, b.im) + dot(a.im, b.re)};
}
double norm(const ComplexVector7& a) { return std::sqrt(norm_squared(a.re) + norm_squared(a.im)); }

ComplexBivector7 operator+(const ComplexBivector7& a, const ComplexBivector7& b) {
  return {a.re + b.re, a.im + b.im};
}
ComplexBivector7 operator*(Complex s, const ComplexBivector7& a) {
  return {s.real() * a.re - s.imag() * a.im, s.real() * a.im + s.imag() * a.re};
}
ComplexBivector7 wedge2(const ComplexVector7& y, const ComplexVector7& z) {
  return {wedge2(y.re, z.re) - wedge2(y.im, z.im), wedge2(y.re, z.im) + wedge2(y.im, z.re)};
}
ComplexVector7 interior(const ComplexVector7& v, const ComplexBivector7& b) {
  return {interior(v.re, b.re) - interior(v.im, b.im), interior(v.re, b.im) + interior(v.im, b.re)};
}
double norm(const ComplexBivector7& a) {
  return std::sqrt(dot(a.re, a.re) + dot(a.im, a.im));
}

// ---------------------------------------------------------------------------
// G2Structure

namespace {

// Columns of alpha -> *(phi ^ alpha) on the pair basis, by explicit wedge and
// Hodge star on index subsets (volume eps^{1..7}).
std::array<std::array<double, kBivectorDim>, kBivectorDim> build_curl(const ThreeForm7& phi) {
  std::array<std::array<double, kBivectorDim>, kBivectorDim> m{};
  const auto& t = tables();
  for (int col = 0; col < kBivectorDim; ++col) {
    const auto [p, q] = t.pairs[col];
    for (int tri = 0; tri < kThreeFormDim; ++tri) {
      const double w = phi.coefficients()[tri];
      if (w == 0.0) continue;
      const auto [i, j, k] = t.triples[tri];
      if (i == p || i == q || j == p || j == q || k == p || k == q) continue;
      // eps^{ijk} ^ eps^{pq} = parity(i,j,k,p,q) eps^{sorted}
      const std::array<int, 5> five{i, j, k, p, q};
      const int wedge_sign = parity(five);
      std::array<int, 5> sorted = five;
      std::sort(sorted.begin(), sorted.end());
      std::array<int, 2> rest{};
      int r = 0;
      for (int a = 0; a < kDim; ++a)
        if (std::find(sorted.begin(), sorted.end(), a) == sorted.end()) rest[r++] = a;
      // *eps^{I} = parity(I, J) eps^{J}
      const std::array<int, 7> full{sorted[0], sorted[1], sorted[2], sorted[3], sorted[4], rest[0], rest[1]};
      const int star_sign = parity(full);
      m[t.pair[rest[0]][rest[1]]][col] += w * wedge_sign * star_sign;
    }
  }
  return m;
}

}  // namespace

G2Structure::G2Structure(const ThreeForm7& phi) : phi_(phi), curl_(build_curl(phi)) {
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k) tensor_[(i * kDim + j) * kDim + k] = phi.coeff(i + 1, j + 1, k + 1);
}

double G2Structure::eval(const Vector7& x, const Vector7& y, const Vector7& z) const {
  return dot(x, cross(y, z));
}

Vector7 G2Structure::cross(const Vector7& y, const Vector7& z) const {
  Vector7 out;
  for (int k = 0; k < kDim; ++k) {
    double s = 0.0;
    const double* row = &tensor_[k * kDim * kDim];
    for (int i = 0; i < kDim; ++i) {
      if (y.c[i] == 0.0) continue;
      for (int j = 0; j < kDim; ++j) s += row[i * kDim + j] * y.c[i] * z.c[j];
    }
    out.c[k] = s;
  }
  return out;
}

Vector7 G2Structure::jmap(const Vector7& eta, const Vector7& v, double tol) const {
  if (std::abs(norm(eta) - 1.0) > tol) throw DomainError("jmap: eta must be a unit vector");
  const double overlap = dot(eta, v);
  if (std::abs(overlap) > tol * std::max(1.0, norm(v)))
    throw DomainError("jmap: v is not orthogonal to eta (|<v,eta>| = " + std::to_string(overlap) + ")");
  return cross(eta, v);
}

Bivector7 G2Structure::curl(const Bivector7& alpha) const {
  Bivector7 out;
  for (int r = 0; r < kBivectorDim; ++r) {
    double s = 0.0;
    for (int c = 0; c < kBivectorDim; ++c) s += curl_[r][c] * alpha.c[c];
    out.c[r] = s;
  }
  return out;
}

std::pair<Bivector7, Bivector7> G2Structure::project_split(const Bivector7& alpha) const {
  const Bivector7 k = curl(alpha);
  return {(1.0 / 3.0) * (alpha - k), (1.0 / 3.0) * (2.0 * alpha + k)};
}

Bivector7 G2Structure::pi7(const Bivector7& alpha) const { return project_split(alpha).first; }
Bivector7 G2Structure::pi14(const Bivector7& alpha) const { return project_split(alpha).second; }

Bivector7 G2Structure::lambda7_iso(const Vector7& x) const { return (1.0 / 3.0) * phi_.contract(x); }

Vector7 G2Structure::lambda7_iso_inv(const Bivector7& beta, double tol) const {
  const double residual = norm(pi14(beta));
  if (residual > tol * std::max(1.0, norm(beta)))
    throw DomainError("lambda7_iso_inv: input has a Lambda^2_14 component of norm " +
                      std::to_string(residual));
  // The images 1/3 (e_k _| phi) are orthogonal with squared norm 1/3.
  return phi_.contract(beta);
}

const G2Structure& standard_structure() {
  static const G2Structure s(phi0());
  return s;
}

double phi_eval(const Vector7& x, const Vector7& y, const Vector7& z) {
  return standard_structure().form().eval(x, y, z);
}
Vector7 cross(const Vector7& y, const Vector7& z) { return standard_structure().cross(y, z); }
Vector7 jmap(const Vector7& eta, const Vector7& v) { return standard_structure().jmap(eta, v); }
Bivector7 curl_op(const Bivector7& alpha) { return standard_structure().curl(alpha); }
std::pair<Bivector7, Bivector7> project_split(const Bivector7& alpha) {
  return standard_structure().project_split(alpha);
}
Bivector7 lambda7_iso(const Vector7& x) { return standard_structure().lambda7_iso(x); }
Vector7 lambda7_iso_inv(const Bivector7& beta) { return standard_structure().lambda7_iso_inv(beta); }

std::array<std::array<double, kBivectorDim>, kBivectorDim> curl_matrix(const G2Structure& s) {
  std::array<std::array<double, kBivectorDim>, kBivectorDim> m{};
  for (int c = 0; c < kBivectorDim; ++c) {
    Bivector7 b;
    b.c[c] = 1.0;
    const Bivector7 col = s.curl(b);
    for (int r = 0; r < kBivectorDim; ++r) m[r][c] = col.c[r];
  }
  return m;
}

// ---------------------------------------------------------------------------
// Compatibility

CompatReport compat_check(const ThreeForm7& phi, bool g_is_euclidean, int samples, double tol,
                          unsigned long long seed) {
  if (!g_is_euclidean) throw DomainError("compat_check: only the Euclidean metric is supported");
  const G2Structure s(phi);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_vector = [&] {
    Vector7 v;
    for (double& x : v.c) x = gauss(rng);
    return v;
  };

  CompatReport rep;
  auto note = [&](double residual, double& slot, const char* name, const Vector7& y, const Vector7& z) {
    slot = std::max(slot, residual);
    if (residual > tol && rep.ok) {
      rep.ok = false;
      rep.violated = name;
      rep.witness = std::make_pair(y, z);
    }
  };

  for (int n = 0; n < samples; ++n) {
    const Vector7 y = random_vector();
    const Vector7 z = random_vector();
    const Vector7 yz = s.cross(y, z);
    const double scale = std::max(1.0, norm(y) * norm(z));
    note(norm(yz + s.cross(z, y)) / scale, rep.skew_residual, "skew symmetry y x z = -z x y", y, z);
    note(std::abs(norm(yz) - norm(wedge2(y, z))) / scale, rep.norm_residual, "|y x z| = |y ^ z|", y, z);
    note(std::max(std::abs(dot(yz, y)), std::abs(dot(yz, z))) / (scale * std::max(norm(y), norm(z))),
         rep.orthogonality_residual, "y x z orthogonal to y and z", y, z);

    const Vector7 eta = normalized(random_vector());
    Vector7 v = random_vector();
    v -= dot(v, eta) * eta;
    const Vector7 jjv = s.cross(eta, s.cross(eta, v));
    note(norm(jjv + v) / std::max(1.0, norm(v)), rep.j_squared_residual, "J^2 = -1", eta, v);
  }
  return rep;
}

std::optional<SignedPermutation> find_signed_relabeling(const ThreeForm7& phi) {
  const ThreeForm7& target = phi0();
  // Nonzero entries of phi0; a candidate must reproduce these and have the
  // same number of nonzero entries overall.
  std::vector<std::array<int, 3>> support;
  for (int t = 0; t < kThreeFormDim; ++t)
    if (target.coefficients()[t] != 0.0) support.push_back(tables().triples[t]);
  if (phi.nonzero_count(1e-12) != static_cast<int>(support.size())) return std::nullopt;

  std::array<int, kDim> perm{};
  std::iota(perm.begin(), perm.end(), 0);
  do {
    for (int mask = 0; mask < (1 << kDim); ++mask) {
      std::array<int, kDim> sign{};
      for (int i = 0; i < kDim; ++i) sign[i] = (mask >> i) & 1 ? -1 : 1;
      bool match = true;
      for (const auto& [i, j, k] : support) {
        const double lhs = target.coeff(i + 1, j + 1, k + 1);
        const double rhs = sign[i] * sign[j] * sign[k] * phi.coeff(perm[i] + 1, perm[j] + 1, perm[k] + 1);
        if (std::abs(lhs - rhs) > 1e-12) {
          match = false;
          break;
        }
      }
      if (match) return SignedPermutation{perm, sign};
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace g2lab
