#pragma once

#include "axisym/differences.hpp"

namespace axisym {

/// Axisymmetric state: cylindrical velocity components and pressure at time t.
struct VelocityField {
  Field2D v_r, v_phi, v_z, p;
  double t = 0.0;

  static VelocityField zeros(const Grid& g) {
    return {g.make_field(), g.make_field(), g.make_field(), g.make_field(), 0.0};
  }
  bool all_finite() const noexcept {
    return v_r.all_finite() && v_phi.all_finite() && v_z.all_finite() && p.all_finite();
  }
};

/// Swirl u = r v_phi, angular velocity omega = v_phi / r, angular vorticity chi.
struct DerivedFields {
  Field2D u, omega, chi;
};

inline Field2D swirl(const Grid& g, const VelocityField& v) {
  return scale_rows(g, v.v_phi, [](double r) { return r; });
}

inline Field2D omega_field(const Grid& g, const VelocityField& v) {
  return scale_rows(g, v.v_phi, [](double r) { return 1.0 / r; });
}

/// chi = v_{r,z} - v_{z,r}, centred differences with slip ghosts.
inline Field2D angular_vorticity(const Grid& g, const VelocityField& v) {
  Field2D chi = ddz(g, v.v_r);
  chi -= ddr(g, v.v_z, ScalarBc::v_z());
  return chi;
}

inline DerivedFields derive(const Grid& g, const VelocityField& v) {
  return {swirl(g, v), omega_field(g, v), angular_vorticity(g, v)};
}

/// Velocity with its ghost rows filled from the slip conditions.
struct GhostedVelocity {
  GhostedField v_r, v_phi, v_z;
};

/// Wall residuals of v_r = 0, v_{z,r} = 0, v_{phi,r} = v_phi / R (max over z).
struct SlipResidual {
  double normal = 0.0;
  double axial_shear = 0.0;
  double swirl_robin = 0.0;
};

inline GhostedVelocity apply_slip_bc(const Grid& g, const VelocityField& v) {
  return {GhostedField(v.v_r, g, ScalarBc::v_r()), GhostedField(v.v_phi, g, ScalarBc::v_phi(g.R())),
          GhostedField(v.v_z, g, ScalarBc::v_z())};
}

inline SlipResidual slip_residual(const Grid& g, const GhostedVelocity& gv) {
  SlipResidual res;
  for (int k = 0; k < g.nz; ++k) {
    res.normal = std::max(res.normal, std::abs(gv.v_r.wall_value(k)));
    res.axial_shear = std::max(res.axial_shear, std::abs(gv.v_z.wall_slope(k, g.dr)));
    res.swirl_robin = std::max(
        res.swirl_robin, std::abs(gv.v_phi.wall_slope(k, g.dr) - gv.v_phi.wall_value(k) / g.R()));
  }
  return res;
}

/// Value of a field on the axis r = 0, per z column: average of the parity
/// ghost and the first interior row (identically zero for odd fields).
inline std::vector<double> axis_values(const Grid& g, const Field2D& f, ScalarBc bc) {
  const GhostedField e(f, g, bc);
  std::vector<double> out(g.nz);
  for (int k = 0; k < g.nz; ++k) out[k] = 0.5 * (e(-1, k) + e(0, k));
  return out;
}

}  // namespace axisym
