// Flat G2 backgrounds in Euclidean coordinates: R^7 with phi0, and C^3 x S^1
// with phi = Re(Omega) - dt ^ omega in the order (x1, y1, x2, y2, x3, y3, t).
#pragma once

#include <array>
#include <string>
#include <string_view>

#include "g2lab/algebra.hpp"
#include "g2lab/grassmann.hpp"

namespace g2lab {

enum class ModelKind { FlatR7, FlatCYxS1 };

class AmbientModel {
 public:
  AmbientModel(ModelKind kind, const ThreeForm7& phi, std::array<std::string, kDim> labels);

  ModelKind kind() const { return kind_; }
  std::string_view name() const;
  const ThreeForm7& phi() const { return structure_.form(); }
  const G2Structure& structure() const { return structure_; }
  const std::array<std::string, kDim>& labels() const { return labels_; }

  // Both models are flat in these coordinates: the metric is the identity
  // and every Christoffel symbol vanishes.
  static constexpr bool is_flat() { return true; }
  double christoffel(int, int, int) const { return 0.0; }

 private:
  ModelKind kind_;
  G2Structure structure_;
  std::array<std::string, kDim> labels_;
};

AmbientModel build_flat_r7();
AmbientModel build_cy_s1();

/// Looks a model up by its config name ("flat_r7" or "cy_x_s1").
AmbientModel model_by_name(std::string_view name);

/// eta = (e1 ^ e2 _| phi)^#, the index-raised phi(e1, e2, .).
Vector7 eta_for_plane(const AmbientModel& model, const OrientedPlane2& p);

/// Sign s with eta = s * d/dt for complex lines in the C^3 factor carrying
/// the complex orientation (J d/dx_i = d/dy_i). Fixed by the form's convention.
double cy_eta_sign();

/// Covariant derivative of a vector field along a curve, from its coordinate
/// derivative and a connection: D_t V^k = dV^k/dt + Gamma^k_ij xdot^i V^j.
Vector7 covariant_derivative(const AmbientModel& model, const Vector7& field_derivative,
                             const Vector7& velocity, const Vector7& field);

}  // namespace g2lab
