#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "axisym/solvers.hpp"
#include "axisym/state.hpp"

namespace axisym {

enum class Scheme { ExplicitAdvection, PicardImplicit };

inline std::string to_string(Scheme s) {
  return s == Scheme::ExplicitAdvection ? "explicit-advection" : "picard-implicit";
}

inline Scheme parse_scheme(const std::string& s) {
  if (s == "explicit-advection") return Scheme::ExplicitAdvection;
  if (s == "picard-implicit") return Scheme::PicardImplicit;
  throw config_error("unknown scheme '" + s + "'");
}

struct StepConfig {
  double dt = 1e-3;
  double cfl = 0.5;
  double dt_max = 1e-2;
  double picard_tol = 1e-10;
  int picard_max = 20;
  Scheme scheme = Scheme::ExplicitAdvection;
  AdvectionForm advection = AdvectionForm::Skew;

  void validate() const {
    if (!(dt > 0.0)) throw config_error("dt must be positive");
    if (!(cfl > 0.0)) throw config_error("cfl must be positive");
    if (!(dt_max > 0.0)) throw config_error("dt_max must be positive");
    if (!(picard_tol > 0.0)) throw config_error("picard_tol must be positive");
    if (picard_max < 1) throw config_error("picard_max must be at least 1");
  }
};

/// Body force per unit mass on the three momentum equations.
struct BodyForce {
  Field2D f_r, f_phi, f_z;
};
using ForcingFn = std::function<BodyForce(double t)>;

/// Largest stable step: cfl times the advective bounds, capped at dt_max.
/// Diffusion is always implicit, so no viscous bound applies.
inline double cfl_dt(const Grid& g, const VelocityField& v, const StepConfig& cfg) {
  double dt = cfg.dt_max;
  const double ur = v.v_r.max_abs(), uz = v.v_z.max_abs();
  if (ur > 0.0) dt = std::min(dt, cfg.cfl * g.dr / ur);
  if (uz > 0.0) dt = std::min(dt, cfg.cfl * g.dz / uz);
  return dt;
}

/// Explicit momentum terms: minus advection plus the geometric sources.
///
/// Skew form: the swirl equation is advanced as -(1/r) Skew(v, u) with
/// u = r v_phi, and the centrifugal term is (omega G~u - u G~omega) / 2 with
/// omega = v_phi / r. For discretely solenoidal v this pair conserves the swirl
/// integral exactly, exchanges no energy, and is balanced exactly by the
/// sampled pressure of a rigid rotation.
/// Centered form: pointwise v_phi^2 / r and -v_r v_phi / r.
struct NonlinearTerms {
  Field2D n_r, n_phi, n_z;
};

inline NonlinearTerms nonlinear_terms(const Grid& g, const VelocityField& w, AdvectionForm form) {
  NonlinearTerms n{advect(g, w, w.v_r, ScalarBc::v_r(), form), g.make_field(),
                   advect(g, w, w.v_z, ScalarBc::v_z(), form)};
  n.n_r *= -1.0;
  n.n_z *= -1.0;
  if (form == AdvectionForm::Skew) {
    const Field2D u = swirl(g, w), om = omega_field(g, w);
    const Field2D au = advect(g, w, u, ScalarBc::swirl(g.R()), form);
    const Field2D gu = adjoint_ddr(g, u), gom = adjoint_ddr(g, om);
    for (int j = 0; j < g.nr; ++j) {
      const double inv_r = 1.0 / g.r_centers[j];
      for (int k = 0; k < g.nz; ++k) {
        n.n_phi(j, k) = -inv_r * au(j, k);
        n.n_r(j, k) += 0.5 * (om(j, k) * gu(j, k) - u(j, k) * gom(j, k));
      }
    }
    return n;
  }
  n.n_phi = advect(g, w, w.v_phi, ScalarBc::v_phi(g.R()), form);
  for (int j = 0; j < g.nr; ++j) {
    const double inv_r = 1.0 / g.r_centers[j];
    for (int k = 0; k < g.nz; ++k) {
      const double vp = w.v_phi(j, k);
      n.n_phi(j, k) = -n.n_phi(j, k) - w.v_r(j, k) * vp * inv_r;
      n.n_r(j, k) += vp * vp * inv_r;
    }
  }
  return n;
}

struct StepStats {
  int picard_iterations = 0;
  double picard_residual = 0.0;
  double div_before = 0.0;
  double div_after = 0.0;
};

/// IMEX stepper: backward-Euler diffusion (with the nu / r^2 terms), explicit
/// or Picard advection and sources, incremental pressure projection.
class Stepper {
public:
  Stepper(Grid g, StepConfig cfg, ForcingFn forcing = {})
      : g_(std::move(g)), cfg_(cfg), forcing_(std::move(forcing)), proj_(g_) {
    cfg_.validate();
  }

  const Grid& grid() const noexcept { return g_; }
  const StepConfig& config() const noexcept { return cfg_; }
  const StepStats& last_stats() const noexcept { return stats_; }

  /// One step of size dt (defaults to cfg.dt).
  VelocityField step(const VelocityField& v, double dt = 0.0) {
    if (dt <= 0.0) dt = cfg_.dt;
    if (cfg_.scheme == Scheme::PicardImplicit) return picard_iterate(v, dt).first;
    stats_ = {};
    VelocityField out = linear_step(v, v, dt);
    stats_.picard_iterations = 1;
    return out;
  }

  /// Iterate v^{m+1} = LinearStep(transport at (v^n + v^m) / 2) to a fixed point.
  std::pair<VelocityField, int> picard_iterate(const VelocityField& v, double dt = 0.0) {
    if (dt <= 0.0) dt = cfg_.dt;
    stats_ = {};
    VelocityField w = v;
    double res = 0.0;
    for (int m = 1; m <= cfg_.picard_max; ++m) {
      VelocityField mid = v;
      mid.v_r.axpy(1.0, w.v_r) *= 0.5;
      mid.v_phi.axpy(1.0, w.v_phi) *= 0.5;
      mid.v_z.axpy(1.0, w.v_z) *= 0.5;
      VelocityField next = linear_step(v, mid, dt);
      res = std::sqrt(l2_norm_sq(g_, difference(next, w)));
      w = std::move(next);
      stats_.picard_iterations = m;
      stats_.picard_residual = res;
      if (res <= cfg_.picard_tol) return {std::move(w), m};
    }
    throw numerical_error("picard iteration did not converge", res);
  }

private:
  static VelocityField difference(const VelocityField& a, const VelocityField& b) {
    return {a.v_r - b.v_r, a.v_phi - b.v_phi, a.v_z - b.v_z, a.p - b.p, a.t};
  }

  const std::array<HelmholtzSolver, 3>& diffusion(double dt) {
    if (dt != diff_dt_) {
      const double alpha = g_.nu() * dt;
      diff_ = {HelmholtzSolver(g_, ScalarBc::v_r(), alpha, 1.0),
               HelmholtzSolver(g_, ScalarBc::v_phi(g_.R()), alpha, 1.0),
               HelmholtzSolver(g_, ScalarBc::v_z(), alpha, 0.0)};
      diff_dt_ = dt;
    }
    return diff_;
  }

  /// Linear step from v with the nonlinear terms evaluated at w.
  VelocityField linear_step(const VelocityField& v, const VelocityField& w, double dt) {
    const NonlinearTerms n = nonlinear_terms(g_, w, cfg_.advection);
    Field2D rr = v.v_r, rp = v.v_phi, rz = v.v_z;
    rr.axpy(dt, n.n_r).axpy(-dt, adjoint_ddr(g_, v.p));
    rp.axpy(dt, n.n_phi);
    rz.axpy(dt, n.n_z).axpy(-dt, ddz(g_, v.p));
    if (forcing_) {
      const BodyForce f = forcing_(v.t + dt);
      rr.axpy(dt, f.f_r);
      rp.axpy(dt, f.f_phi);
      rz.axpy(dt, f.f_z);
    }
    const auto& d = diffusion(dt);
    VelocityField star{d[0].solve(rr), d[1].solve(rp), d[2].solve(rz), v.p, v.t + dt};
    if (!star.all_finite()) throw numerical_error("non-finite velocity after diffusion solve",
                                                  std::numeric_limits<double>::infinity());
    ProjectionResult pr = project_divergence_free(g_, proj_, star);
    stats_.div_before = pr.div_before;
    stats_.div_after = pr.div_after;
    pr.v.p.axpy(1.0 / dt, pr.phi);
    if (!pr.v.all_finite())
      throw numerical_error("non-finite state after projection", std::numeric_limits<double>::infinity());
    return std::move(pr.v);
  }

  Grid g_;
  StepConfig cfg_;
  ForcingFn forcing_;
  ProjectionSolver proj_;
  std::array<HelmholtzSolver, 3> diff_;
  double diff_dt_ = -1.0;
  StepStats stats_;
};

/// L2 norms of the residuals over the whole cylinder and over r >= R / 4.
/// The axis cell of the vector Laplacian has an O(dr) truncation error, so the
/// full norms converge at first order while the outer norms converge at second.
struct AuxResiduals {
  double chi = 0.0;
  double omega = 0.0;
  double chi_outer = 0.0;
  double omega_outer = 0.0;
};

/// Discrete residuals of the chi and omega evolution equations evaluated on
/// two consecutive primitive states (backward difference in time, spatial
/// terms at the new level).
inline AuxResiduals auxiliary_residuals(const Grid& g, const VelocityField& prev,
                                        const VelocityField& next, double dt) {
  const double nu = g.nu();
  const Field2D chi0 = angular_vorticity(g, prev), chi1 = angular_vorticity(g, next);
  const Field2D om0 = omega_field(g, prev), om1 = omega_field(g, next);

  Field2D rc = chi1 - chi0;
  rc *= 1.0 / dt;
  rc += advect(g, next, chi1, ScalarBc::chi(), AdvectionForm::Centered);
  rc.axpy(-nu, vector_laplacian(g, chi1, ScalarBc::chi()));
  const Field2D vphi_z = ddz(g, next.v_phi);

  Field2D ro = om1 - om0;
  ro *= 1.0 / dt;
  ro += advect(g, next, om1, ScalarBc::omega(), AdvectionForm::Centered);
  ro.axpy(-nu, laplacian_axisym(g, om1, ScalarBc::omega()));
  const Field2D om_r = ddr(g, om1, ScalarBc::omega());

  for (int j = 0; j < g.nr; ++j) {
    const double inv_r = 1.0 / g.r_centers[j];
    for (int k = 0; k < g.nz; ++k) {
      rc(j, k) -= inv_r * (next.v_r(j, k) * chi1(j, k) + 2.0 * next.v_phi(j, k) * vphi_z(j, k));
      ro(j, k) += inv_r * (2.0 * next.v_r(j, k) * om1(j, k) - 2.0 * nu * om_r(j, k));
    }
  }
  auto norm = [&](const Field2D& f, double r_min) {
    double s = 0.0;
    for (int j = 0; j < g.nr; ++j) {
      if (g.r_centers[j] < r_min) continue;
      for (int k = 0; k < g.nz; ++k) s += g.quad_weights[j] * f(j, k) * f(j, k);
    }
    return std::sqrt(2.0 * std::numbers::pi * s);
  };
  const double outer = 0.25 * g.R();
  return {norm(rc, 0.0), norm(ro, 0.0), norm(rc, outer), norm(ro, outer)};
}

}  // namespace axisym
