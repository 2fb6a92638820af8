#include "g2lab/ambient.hpp"

namespace g2lab {

AmbientModel::AmbientModel(ModelKind kind, const ThreeForm7& phi, std::array<std::string, kDim> labels)
    : kind_(kind), structure_(phi), labels_(std::move(labels)) {}

std::string_view AmbientModel::name() const {
  return kind_ == ModelKind::FlatR7 ? "flat_r7" : "cy_x_s1";
}

AmbientModel build_flat_r7() {
  return AmbientModel(ModelKind::FlatR7, phi0(), {"x1", "x2", "x3", "x4", "x5", "x6", "x7"});
}

AmbientModel build_cy_s1() {
  constexpr int x1 = 1, y1 = 2, x2 = 3, y2 = 4, x3 = 5, y3 = 6, t = 7;
  ThreeForm7 phi;
  // Re (dx1 + i dy1)(dx2 + i dy2)(dx3 + i dy3)
  phi.add(x1, x2, x3, 1.0);
  phi.add(x1, y2, y3, -1.0);
  phi.add(y1, x2, y3, -1.0);
  phi.add(y1, y2, x3, -1.0);
  // -dt ^ omega, omega = sum dx_i ^ dy_i
  phi.add(t, x1, y1, -1.0);
  phi.add(t, x2, y2, -1.0);
  phi.add(t, x3, y3, -1.0);
  return AmbientModel(ModelKind::FlatCYxS1, phi, {"x1", "y1", "x2", "y2", "x3", "y3", "t"});
}

AmbientModel model_by_name(std::string_view name) {
  if (name == "flat_r7") return build_flat_r7();
  if (name == "cy_x_s1") return build_cy_s1();
  throw DomainError("unknown model '" + std::string(name) + "' (expected flat_r7 or cy_x_s1)");
}

Vector7 eta_for_plane(const AmbientModel& model, const OrientedPlane2& p) {
  if (norm(p.bivector()) < 1e-8) throw DomainError("eta_for_plane: degenerate plane");
  return model.phi().contract(p.bivector());
}

double cy_eta_sign() {
  static const double sign = [] {
    const AmbientModel m = build_cy_s1();
    const Vector7 eta = eta_for_plane(m, OrientedPlane2::from_frame(Vector7::e(1), Vector7::e(2)));
    return eta[6] > 0 ? 1.0 : -1.0;
  }();
  return sign;
}

Vector7 covariant_derivative(const AmbientModel& model, const Vector7& field_derivative,
                             const Vector7& velocity, const Vector7& field) {
  Vector7 out = field_derivative;
  for (int k = 0; k < kDim; ++k)
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) out[k] += model.christoffel(k, i, j) * velocity[i] * field[j];
  return out;
}

}  // namespace g2lab
