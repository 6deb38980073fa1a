#pragma once

#include <numbers>

#include "axisym/state.hpp"

namespace axisym {

// ---------------------------------------------------------------------------
// Radial face weights for the flux-form divergence. Faces are indexed by the
// cell on their inner side: face j sits at r_{j+1/2}. The axis face and the
// wall face carry no flux (r = 0 on the axis, v_r = 0 on the wall).

inline double interior_face_radius(const Grid& g, int j) noexcept {
  return (j < 0 || j >= g.nr - 1) ? 0.0 : g.r_face(j);
}

/// (1/r)(r f_r)_r + f_zz. Radial part in flux form so the axis face drops out;
/// the wall flux uses the ghost from bc.
inline Field2D laplacian_axisym(const Grid& g, const Field2D& f, ScalarBc bc) {
  const GhostedField e(f, g, bc);
  Field2D out = d2dz2(g, f);
  const double inv_dr = 1.0 / g.dr;
  for (int j = 0; j < g.nr; ++j) {
    const double rp = g.r_face(j), rm = j == 0 ? 0.0 : g.r_face(j - 1);
    const double scale = 1.0 / (g.r_centers[j] * g.dr);
    for (int k = 0; k < g.nz; ++k) {
      const double flux_p = rp * (e(j + 1, k) - e(j, k)) * inv_dr;
      const double flux_m = rm * (e(j, k) - e(j - 1, k)) * inv_dr;
      out(j, k) += (flux_p - flux_m) * scale;
    }
  }
  return out;
}

/// Convenience overload choosing the wall closure from the parity alone:
/// Neumann for even fields, Dirichlet for odd ones.
inline Field2D laplacian_axisym(const Grid& g, const Field2D& f, Parity parity) {
  return laplacian_axisym(
      g, f, ScalarBc{parity, parity == Parity::Even ? WallKind::Neumann : WallKind::Dirichlet, 0.0});
}

/// Delta f - f / r^2, the operator acting on v_r and v_phi. Flux form minus
/// the pointwise 1/r^2 term: dissipative in the r-weighted inner product and
/// exact on rigid rotation. Its axis cell carries an O(dr) truncation error for
/// odd cubics (relative O(1)); solutions still converge at second order.
inline Field2D vector_laplacian(const Grid& g, const Field2D& f, ScalarBc bc) {
  Field2D out = laplacian_axisym(g, f, bc);
  for (int j = 0; j < g.nr; ++j) {
    const double c = 1.0 / (g.r_centers[j] * g.r_centers[j]);
    for (int k = 0; k < g.nz; ++k) out(j, k) -= c * f(j, k);
  }
  return out;
}

/// Flux-form divergence (1/r)(r a)_r + b_z of a vector field (a, b) with face
/// averages. Zero flux through the axis and the wall.
inline Field2D divergence_of(const Grid& g, const Field2D& a, const Field2D& b) {
  Field2D out = ddz(g, b);
  for (int j = 0; j < g.nr; ++j) {
    const double rp = interior_face_radius(g, j), rm = interior_face_radius(g, j - 1);
    const double scale = 0.5 / (g.r_centers[j] * g.dr);
    for (int k = 0; k < g.nz; ++k) {
      const double up = j + 1 < g.nr ? a(j + 1, k) : 0.0;
      const double dn = j > 0 ? a(j - 1, k) : 0.0;
      out(j, k) += (rp * (a(j, k) + up) - rm * (dn + a(j, k))) * scale;
    }
  }
  return out;
}

/// v_{r,r} + v_r / r + v_{z,z}.
inline Field2D divergence(const Grid& g, const VelocityField& v) {
  return divergence_of(g, v.v_r, v.v_z);
}

/// Radial gradient that is the exact negative adjoint of divergence_of in the
/// r-weighted inner product. Used by the projection so that it is orthogonal.
inline Field2D adjoint_ddr(const Grid& g, const Field2D& f) {
  Field2D out = g.make_field();
  for (int j = 0; j < g.nr; ++j) {
    const double rp = interior_face_radius(g, j), rm = interior_face_radius(g, j - 1);
    const double scale = 0.5 / (g.r_centers[j] * g.dr);
    for (int k = 0; k < g.nz; ++k) {
      const double up = j + 1 < g.nr ? f(j + 1, k) - f(j, k) : 0.0;
      const double dn = j > 0 ? f(j, k) - f(j - 1, k) : 0.0;
      out(j, k) = (rp * up + rm * dn) * scale;
    }
  }
  return out;
}

enum class AdvectionForm { Centered, Skew };

/// (v_r d_r + v_z d_z) f. The skew form averages the advective and the
/// conservative forms and is energy neutral for discretely solenoidal v.
inline Field2D advect(const Grid& g, const VelocityField& v, const Field2D& f, ScalarBc bc,
                      AdvectionForm form = AdvectionForm::Skew) {
  const Field2D fz = ddz(g, f);
  Field2D out = g.make_field();
  if (form == AdvectionForm::Centered) {
    const Field2D fr = ddr(g, f, bc);
    for (std::size_t i = 0; i < out.size(); ++i)
      out.raw()[i] = v.v_r.raw()[i] * fr.raw()[i] + v.v_z.raw()[i] * fz.raw()[i];
    return out;
  }
  const Field2D fr = adjoint_ddr(g, f);
  Field2D a = g.make_field(), b = g.make_field();
  for (std::size_t i = 0; i < out.size(); ++i) {
    a.raw()[i] = v.v_r.raw()[i] * f.raw()[i];
    b.raw()[i] = v.v_z.raw()[i] * f.raw()[i];
  }
  const Field2D cons = divergence_of(g, a, b);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.raw()[i] =
        0.5 * (v.v_r.raw()[i] * fr.raw()[i] + v.v_z.raw()[i] * fz.raw()[i] + cons.raw()[i]);
  return out;
}

/// First derivatives of all three components with slip ghosts.
struct VelocityGradients {
  Field2D vr_r, vr_z, vphi_r, vphi_z, vz_r, vz_z;
};

inline VelocityGradients velocity_gradients(const Grid& g, const VelocityField& v) {
  return {ddr(g, v.v_r, ScalarBc::v_r()),
          ddz(g, v.v_r),
          ddr(g, v.v_phi, ScalarBc::v_phi(g.R())),
          ddz(g, v.v_phi),
          ddr(g, v.v_z, ScalarBc::v_z()),
          ddz(g, v.v_z)};
}

/// Pointwise sum of squared dilatation-tensor entries D_ij = v_{i,j} + v_{j,i}.
inline Field2D dilatation_density(const Grid& g, const VelocityField& v) {
  const auto d = velocity_gradients(g, v);
  Field2D out = g.make_field();
  for (int j = 0; j < g.nr; ++j) {
    const double r = g.r_centers[j];
    for (int k = 0; k < g.nz; ++k) {
      const double drr = 2.0 * d.vr_r(j, k);
      const double dpp = 2.0 * v.v_r(j, k) / r;
      const double dzz = 2.0 * d.vz_z(j, k);
      const double drz = d.vr_z(j, k) + d.vz_r(j, k);
      const double drp = d.vphi_r(j, k) - v.v_phi(j, k) / r;
      const double dpz = d.vphi_z(j, k);
      out(j, k) = drr * drr + dpp * dpp + dzz * dzz + 2.0 * (drz * drz + drp * drp + dpz * dpz);
    }
  }
  return out;
}

/// E(v) = ||D(v)||^2_{L2}.
inline double dilatation_energy(const Grid& g, const VelocityField& v) {
  return weighted_integral(g, dilatation_density(g, v));
}

/// |grad v|^2 including the curvature terms (v_r^2 + v_phi^2) / r^2.
inline Field2D gradient_density(const Grid& g, const VelocityField& v) {
  const auto d = velocity_gradients(g, v);
  Field2D out = g.make_field();
  for (int j = 0; j < g.nr; ++j) {
    const double ir2 = 1.0 / (g.r_centers[j] * g.r_centers[j]);
    for (int k = 0; k < g.nz; ++k) {
      auto sq = [](double x) { return x * x; };
      out(j, k) = sq(d.vr_r(j, k)) + sq(d.vr_z(j, k)) + sq(d.vphi_r(j, k)) + sq(d.vphi_z(j, k)) +
                  sq(d.vz_r(j, k)) + sq(d.vz_z(j, k)) +
                  (sq(v.v_r(j, k)) + sq(v.v_phi(j, k))) * ir2;
    }
  }
  return out;
}

inline Field2D kinetic_density(const VelocityField& v) {
  Field2D out = v.v_r;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double a = v.v_r.raw()[i], b = v.v_phi.raw()[i], c = v.v_z.raw()[i];
    out.raw()[i] = a * a + b * b + c * c;
  }
  return out;
}

/// ||v||^2_{L2}.
inline double l2_norm_sq(const Grid& g, const VelocityField& v) {
  return weighted_integral(g, kinetic_density(v));
}

/// ||v||^2_{H1} = ||v||^2 + ||grad v||^2.
inline double h1_norm_sq(const Grid& g, const VelocityField& v) {
  return l2_norm_sq(g, v) + weighted_integral(g, gradient_density(g, v));
}

/// Sum of squared second differences (rr, rz, zz) over the three components,
/// integrated: a proxy for ||v_xx||^2_{L2}.
inline double second_derivative_proxy_sq(const Grid& g, const VelocityField& v) {
  double total = 0.0;
  const ScalarBc bcs[3] = {ScalarBc::v_r(), ScalarBc::v_phi(g.R()), ScalarBc::v_z()};
  const Field2D* comps[3] = {&v.v_r, &v.v_phi, &v.v_z};
  for (int c = 0; c < 3; ++c) {
    Field2D rr = d2dr2(g, *comps[c], bcs[c]);
    Field2D zz = d2dz2(g, *comps[c]);
    Field2D rz = ddz(g, ddr(g, *comps[c], bcs[c]));
    Field2D dens = g.make_field();
    for (std::size_t i = 0; i < dens.size(); ++i) {
      const double a = rr.raw()[i], b = zz.raw()[i], m = rz.raw()[i];
      dens.raw()[i] = a * a + b * b + 2.0 * m * m;
    }
    total += weighted_integral(g, dens);
  }
  return total;
}

/// Dissipation applied by the discrete viscous operator: -2 <v, L_h v> with
/// the same closures as the implicit solves. A second-order discretisation of
/// E_Omega for solenoidal slip fields that enters the discrete energy balance
/// without spatial defect.
inline double scheme_dissipation(const Grid& g, const VelocityField& v);

/// Weighted L2 inner product (midpoint measure, no 2 pi) used by the
/// projection and by symmetry checks.
inline double r_weighted_dot(const Grid& g, const Field2D& a, const Field2D& b) {
  double total = 0.0;
  for (int j = 0; j < g.nr; ++j) {
    double row = 0.0;
    for (int k = 0; k < g.nz; ++k) row += a(j, k) * b(j, k);
    total += g.quad_weights[j] * row;
  }
  return total;
}

inline double scheme_dissipation(const Grid& g, const VelocityField& v) {
  const double s = r_weighted_dot(g, v.v_r, vector_laplacian(g, v.v_r, ScalarBc::v_r())) +
                   r_weighted_dot(g, v.v_phi, vector_laplacian(g, v.v_phi, ScalarBc::v_phi(g.R()))) +
                   r_weighted_dot(g, v.v_z, laplacian_axisym(g, v.v_z, ScalarBc::v_z()));
  return -4.0 * std::numbers::pi * s;
}

}  // namespace axisym
