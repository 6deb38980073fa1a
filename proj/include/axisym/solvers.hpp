#pragma once

#include <cmath>
#include <numbers>

#include "axisym/operators.hpp"
#include "axisym/spectral.hpp"

namespace axisym {

namespace detail {

inline double wall_ghost_factor(const Grid& g, ScalarBc bc) {
  switch (bc.wall) {
    case WallKind::Dirichlet: return -1.0;
    case WallKind::Neumann: return 1.0;
    case WallKind::Robin: {
      const double h = 0.5 * bc.beta * g.dr;
      return (1.0 + h) / (1.0 - h);
    }
    case WallKind::Extrapolate: break;
  }
  throw config_error("implicit solve needs a Dirichlet, Neumann or Robin wall");
}

}  // namespace detail

/// Solves (I - alpha (Delta - kappa / r^2)) x = b for one scalar with the given
/// closure. kappa = 1 for v_r and v_phi, 0 for v_z.
class HelmholtzSolver {
public:
  HelmholtzSolver() = default;
  HelmholtzSolver(const Grid& g, ScalarBc bc, double alpha, double kappa)
      : solver_(g.nr, g.nz, [&](int mode) {
          const double th = 2.0 * std::numbers::pi * mode / g.nz;
          const double lz = (2.0 * std::cos(th) - 2.0) / (g.dz * g.dz);
          const double wall = detail::wall_ghost_factor(g, bc);
          BandedMatrix m(g.nr, 1);
          for (int j = 0; j < g.nr; ++j) {
            const double r = g.r_centers[j];
            const double rp = g.r_face(j), rm = j == 0 ? 0.0 : g.r_face(j - 1);
            const double s = 1.0 / (r * g.dr * g.dr);
            double diag = -(rp + rm) * s - kappa / (r * r) + lz;
            if (j + 1 < g.nr) m.at(j, j + 1) = -alpha * rp * s;
            else diag += rp * s * wall;
            if (j > 0) m.at(j, j - 1) = -alpha * rm * s;
            m.at(j, j) = 1.0 - alpha * diag;
          }
          return m;
        }) {}

  Field2D solve(const Field2D& rhs) const { return solver_.solve(rhs); }

private:
  ModalSolver solver_;
};

/// Discrete pressure-increment Poisson operator D G~ where G~ is the adjoint
/// of the flux-form divergence. Singular in the z-constant and (for even nz)
/// z-alternating modes; those are pinned at the first radial cell.
class ProjectionSolver {
public:
  ProjectionSolver() = default;
  explicit ProjectionSolver(const Grid& g)
      : solver_(g.nr, g.nz, [&](int mode) {
          const double th = 2.0 * std::numbers::pi * mode / g.nz;
          const double s = std::sin(th) / g.dz;
          const int n = g.nr;
          BandedMatrix m(n, 2);
          std::vector<double> e(n, 0.0), grad(n), col(n);
          for (int c = 0; c < n; ++c) {
            std::fill(e.begin(), e.end(), 0.0);
            e[c] = 1.0;
            apply_radial(g, e, grad, col);
            for (int i = std::max(0, c - 2); i <= std::min(n - 1, c + 2); ++i) m.at(i, c) = col[i];
          }
          for (int i = 0; i < n; ++i) m.at(i, i) -= s * s;
          if (s * s * g.dz * g.dz < 1e-24) m.pin(0);
          return m;
        }) {}

  Field2D solve(const Field2D& rhs) const { return solver_.solve(rhs); }

  /// Radial part D_r G~_r applied to a single column.
  static void apply_radial(const Grid& g, const std::vector<double>& psi, std::vector<double>& grad,
                           std::vector<double>& out) {
    const int n = g.nr;
    for (int j = 0; j < n; ++j) {
      const double rp = interior_face_radius(g, j), rm = interior_face_radius(g, j - 1);
      const double up = j + 1 < n ? psi[j + 1] - psi[j] : 0.0;
      const double dn = j > 0 ? psi[j] - psi[j - 1] : 0.0;
      grad[j] = (rp * up + rm * dn) * 0.5 / (g.r_centers[j] * g.dr);
    }
    for (int j = 0; j < n; ++j) {
      const double rp = interior_face_radius(g, j), rm = interior_face_radius(g, j - 1);
      const double up = j + 1 < n ? grad[j + 1] : 0.0;
      const double dn = j > 0 ? grad[j - 1] : 0.0;
      out[j] = (rp * (grad[j] + up) - rm * (dn + grad[j])) * 0.5 / (g.r_centers[j] * g.dr);
    }
  }

private:
  ModalSolver solver_;
};

struct ProjectionResult {
  VelocityField v;
  Field2D phi;  // potential removed: v = v_star - G~ phi
  double div_before = 0.0;
  double div_after = 0.0;
};

/// Orthogonal (r-weighted) projection of (v_r, v_z) onto the kernel of the
/// discrete divergence. v_phi and p pass through unchanged.
inline ProjectionResult project_divergence_free(const Grid& g, const ProjectionSolver& solver,
                                                const VelocityField& v_star, double rel_tol = 1e-10) {
  ProjectionResult out{v_star, g.make_field(), 0.0, 0.0};
  const Field2D div = divergence(g, v_star);
  out.div_before = div.max_abs();
  out.phi = solver.solve(div);
  out.v.v_r -= adjoint_ddr(g, out.phi);
  out.v.v_z -= ddz(g, out.phi);
  out.div_after = divergence(g, out.v).max_abs();
  const double h = std::min(g.dr, g.dz);
  const double scale =
      std::max({out.div_before, v_star.v_r.max_abs() / h, v_star.v_z.max_abs() / h, 1e-300});
  if (!(out.div_after <= rel_tol * scale))
    throw numerical_error("projection: divergence residual above tolerance",
                          out.div_after / scale);
  return out;
}

inline ProjectionResult project_divergence_free(const Grid& g, const VelocityField& v_star,
                                                double rel_tol = 1e-10) {
  return project_divergence_free(g, ProjectionSolver(g), v_star, rel_tol);
}

}  // namespace axisym
