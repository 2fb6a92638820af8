// Exterior algebra of R^7 with the standard G2 3-form.
//
// Public index arguments (basis vectors, coefficients) are 1-based to match the
// usual e_1..e_7 notation; raw storage accessed through operator[] is 0-based.
// The metric is Euclidean throughout, so vectors and covectors share
// coefficients and "raising an index" is the identity on components.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace g2lab {

inline constexpr int kDim = 7;
inline constexpr int kBivectorDim = 21;
inline constexpr int kThreeFormDim = 35;

using Complex = std::complex<double>;

/// Error raised when an operation receives input outside its domain.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Vector7

struct Vector7 {
  std::array<double, kDim> c{};

  static Vector7 e(int k);  // basis vector, k in 1..7

  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }

  Vector7& operator+=(const Vector7& o);
  Vector7& operator-=(const Vector7& o);
  Vector7& operator*=(double s);

  bool operator==(const Vector7&) const = default;
};

Vector7 operator+(Vector7 a, const Vector7& b);
Vector7 operator-(Vector7 a, const Vector7& b);
Vector7 operator-(Vector7 a);
Vector7 operator*(double s, Vector7 a);
Vector7 operator*(Vector7 a, double s);
Vector7 operator/(Vector7 a, double s);

double dot(const Vector7& a, const Vector7& b);
double norm(const Vector7& a);
double norm_squared(const Vector7& a);
Vector7 normalized(const Vector7& a);

// ---------------------------------------------------------------------------
// Bivector7: coefficients on e_i ^ e_j with i < j, ordered lexicographically.

/// Storage slot of the pair (i, j), 1 <= i < j <= 7.
int pair_slot(int i, int j);
/// Inverse of pair_slot; returns the 1-based pair.
std::pair<int, int> slot_pair(int slot);

struct Bivector7 {
  std::array<double, kBivectorDim> c{};

  static Bivector7 e(int i, int j);  // e_i ^ e_j, antisymmetric in (i, j)

  /// Antisymmetric coefficient accessor (1-based); coeff(i,i) == 0.
  double coeff(int i, int j) const;
  void add(int i, int j, double value);

  double& operator[](std::size_t s) { return c[s]; }
  double operator[](std::size_t s) const { return c[s]; }

  Bivector7& operator+=(const Bivector7& o);
  Bivector7& operator-=(const Bivector7& o);
  Bivector7& operator*=(double s);

  bool operator==(const Bivector7&) const = default;
};

Bivector7 operator+(Bivector7 a, const Bivector7& b);
Bivector7 operator-(Bivector7 a, const Bivector7& b);
Bivector7 operator-(Bivector7 a);
Bivector7 operator*(double s, Bivector7 a);
Bivector7 operator*(Bivector7 a, double s);

double dot(const Bivector7& a, const Bivector7& b);
double norm(const Bivector7& a);

/// y ^ z.
Bivector7 wedge2(const Vector7& y, const Vector7& z);

/// v contracted into the first slot: v _| (a^b) = <v,a> b - <v,b> a.
Vector7 interior(const Vector7& v, const Bivector7& b);

/// Plucker quantity beta ^ beta as a 4-form, returned as its Euclidean norm.
double plucker_defect(const Bivector7& b);

// ---------------------------------------------------------------------------
// ThreeForm7: coefficients on eps^{ijk}, i < j < k.

int triple_slot(int i, int j, int k);

class ThreeForm7 {
 public:
  ThreeForm7() = default;

  /// Antisymmetric coefficient accessor (1-based).
  double coeff(int i, int j, int k) const;
  /// Adds value * eps^{ijk}; indices in any order, sign taken from their parity.
  void add(int i, int j, int k, double value);

  double eval(const Vector7& x, const Vector7& y, const Vector7& z) const;

  /// (X _| phi) with indices raised.
  Bivector7 contract(const Vector7& x) const;
  /// (beta _| phi) with indices raised: component k is phi(beta, e_k).
  Vector7 contract(const Bivector7& beta) const;

  int nonzero_count(double tol = 0.0) const;

  const std::array<double, kThreeFormDim>& coefficients() const { return coeffs_; }

  bool operator==(const ThreeForm7&) const = default;

 private:
  std::array<double, kThreeFormDim> coeffs_{};
};

/// The standard form eps^123 + eps^1^(eps^45 - eps^67) + eps^2^(eps^46 - eps^75)
/// + eps^3^(eps^47 - eps^56).
const ThreeForm7& phi0();

// ---------------------------------------------------------------------------
// Complexified vectors and bivectors. The pairing dot(a, b) is complex
// bilinear (no conjugation), so dot(eps, eps) == 0 for eps = e1 - i e2.

struct ComplexVector7 {
  Vector7 re;
  Vector7 im;

  Complex operator[](std::size_t i) const { return {re[i], im[i]}; }
};

ComplexVector7 operator+(const ComplexVector7& a, const ComplexVector7& b);
ComplexVector7 operator-(const ComplexVector7& a, const ComplexVector7& b);
ComplexVector7 operator*(Complex s, const ComplexVector7& a);
ComplexVector7 conj(const ComplexVector7& a);
Complex dot(const ComplexVector7& a, const ComplexVector7& b);
/// Hermitian norm sqrt(|re|^2 + |im|^2).
double norm(const ComplexVector7& a);

struct ComplexBivector7 {
  Bivector7 re;
  Bivector7 im;
};

ComplexBivector7 operator+(const ComplexBivector7& a, const ComplexBivector7& b);
ComplexBivector7 operator*(Complex s, const ComplexBivector7& a);
ComplexBivector7 wedge2(const ComplexVector7& y, const ComplexVector7& z);
ComplexVector7 interior(const ComplexVector7& v, const ComplexBivector7& b);
double norm(const ComplexBivector7& a);

// ---------------------------------------------------------------------------
// Structure derived from a 3-form: cross product, complex structure J_eta,
// the operator alpha -> *(phi ^ alpha) and the 7/14 splitting of bivectors.

class G2Structure {
 public:
  explicit G2Structure(const ThreeForm7& phi);

  const ThreeForm7& form() const { return phi_; }

  double eval(const Vector7& x, const Vector7& y, const Vector7& z) const;

  /// <x, y x z> = phi(x, y, z).
  Vector7 cross(const Vector7& y, const Vector7& z) const;

  /// eta x v for unit eta and v orthogonal to eta.
  Vector7 jmap(const Vector7& eta, const Vector7& v, double tol = 1e-10) const;

  /// *(phi ^ alpha) with indices raised.
  Bivector7 curl(const Bivector7& alpha) const;

  /// (alpha_7, alpha_14) = (1/3 (alpha - curl), 1/3 (2 alpha + curl)).
  std::pair<Bivector7, Bivector7> project_split(const Bivector7& alpha) const;
  Bivector7 pi7(const Bivector7& alpha) const;
  Bivector7 pi14(const Bivector7& alpha) const;

  /// X -> 1/3 (X _| phi).
  Bivector7 lambda7_iso(const Vector7& x) const;
  /// Inverse of lambda7_iso; rejects input with a Lambda^2_14 part above tol.
  Vector7 lambda7_iso_inv(const Bivector7& beta, double tol = 1e-10) const;

 private:
  ThreeForm7 phi_;
  // Full antisymmetric tensor phi_{ijk}, 0-based, row-major.
  std::array<double, kDim * kDim * kDim> tensor_{};
  std::array<std::array<double, kBivectorDim>, kBivectorDim> curl_{};
};

/// Structure for phi0, built once on first use.
const G2Structure& standard_structure();

// Convenience wrappers over standard_structure().
double phi_eval(const Vector7& x, const Vector7& y, const Vector7& z);
Vector7 cross(const Vector7& y, const Vector7& z);
Vector7 jmap(const Vector7& eta, const Vector7& v);
Bivector7 curl_op(const Bivector7& alpha);
std::pair<Bivector7, Bivector7> project_split(const Bivector7& alpha);
Bivector7 lambda7_iso(const Vector7& x);
Vector7 lambda7_iso_inv(const Bivector7& beta);

/// Matrix of curl_op in the e_i^e_j basis (column s is curl_op(basis s)).
std::array<std::array<double, kBivectorDim>, kBivectorDim> curl_matrix(
    const G2Structure& s = standard_structure());

// ---------------------------------------------------------------------------
// Compatibility certification of a 3-form against the Euclidean metric.

struct CompatReport {
  bool ok = true;
  double skew_residual = 0.0;        // |y x z + z x y|
  double norm_residual = 0.0;        // | |y x z| - |y ^ z| |
  double orthogonality_residual = 0.0;  // |<y x z, y>|, |<y x z, z>|
  double j_squared_residual = 0.0;   // |J(J v) + v| for unit eta, v _|_ eta
  std::string violated;              // first violated identity, empty when ok
  std::optional<std::pair<Vector7, Vector7>> witness;
};

CompatReport compat_check(const ThreeForm7& phi, bool g_is_euclidean = true,
                          int samples = 1000, double tol = 1e-12,
                          unsigned long long seed = 0x6a09e667f3bcc908ULL);

/// A signed relabeling x_i -> sign[i] * x_{perm[i]} (0-based perm).
struct SignedPermutation {
  std::array<int, kDim> perm{};
  std::array<int, kDim> sign{};
};

/// Searches the 7! * 2^7 signed permutations for one carrying phi onto phi0,
/// i.e. phi0(e_i, e_j, e_k) == phi(s_i e_{p(i)}, s_j e_{p(j)}, s_k e_{p(k)}).
std::optional<SignedPermutation> find_signed_relabeling(const ThreeForm7& phi);

}  // namespace g2lab
