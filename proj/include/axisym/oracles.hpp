#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "axisym/bessel.hpp"
#include "axisym/integrator.hpp"

namespace axisym {

struct PointState {
  double v_r = 0.0, v_phi = 0.0, v_z = 0.0, p = 0.0;
};
using Evaluator = std::function<PointState(double r, double z, double t)>;

struct ExactSolution {
  std::string name;
  CylinderDomain domain;
  Evaluator eval;
  std::string notes;
};

/// Pointwise residuals of the momentum, continuity and wall equations,
/// by Ridders-extrapolated differences of the evaluator.
struct PdeResidual {
  double mom_r = 0.0, mom_phi = 0.0, mom_z = 0.0, div = 0.0;
  double wall_normal = 0.0, wall_shear = 0.0, wall_robin = 0.0;

  double momentum_max() const { return std::max({std::abs(mom_r), std::abs(mom_phi), std::abs(mom_z)}); }
  double kinematic_max() const {
    return std::max({std::abs(div), std::abs(wall_normal), std::abs(wall_shear), std::abs(wall_robin)});
  }
};

namespace detail {

inline double component(const PointState& s, int c) {
  switch (c) {
    case 0: return s.v_r;
    case 1: return s.v_phi;
    case 2: return s.v_z;
    default: return s.p;
  }
}

/// Derivatives of one component of an evaluator at a point.
struct PointDerivatives {
  double f, f_r, f_z, f_t, f_rr, f_zz;
};

inline PointDerivatives point_derivatives(const Evaluator& e, int c, double r, double z, double t,
                                          double hs) {
  auto in_r = [&](double x) { return component(e(x, z, t), c); };
  auto in_z = [&](double x) { return component(e(r, x, t), c); };
  auto in_t = [&](double x) { return component(e(r, z, x), c); };
  return {in_r(r),
          ridders_derivative(in_r, r, hs),
          ridders_derivative(in_z, z, hs),
          ridders_derivative(in_t, t, 0.05),
          ridders_second_derivative(in_r, r, hs),
          ridders_second_derivative(in_z, z, hs)};
}

inline double radical_inverse(int i, int base) {
  double f = 1.0, out = 0.0;
  while (i > 0) {
    f /= base;
    out += f * (i % base);
    i /= base;
  }
  return out;
}

}  // namespace detail

inline PdeResidual pde_residual(const ExactSolution& s, double r, double z, double t,
                                const PointState& force = {}) {
  const double nu = s.domain.nu;
  const double hs = 0.05 * std::min(s.domain.R, s.domain.a);
  using detail::point_derivatives;
  const auto vr = point_derivatives(s.eval, 0, r, z, t, hs);
  const auto vp = point_derivatives(s.eval, 1, r, z, t, hs);
  const auto vz = point_derivatives(s.eval, 2, r, z, t, hs);
  const auto p = point_derivatives(s.eval, 3, r, z, t, hs);
  auto lap = [r](const detail::PointDerivatives& d) { return d.f_rr + d.f_r / r + d.f_zz; };
  auto adv = [&](const detail::PointDerivatives& d) { return vr.f * d.f_r + vz.f * d.f_z; };

  PdeResidual out;
  out.mom_r = vr.f_t + adv(vr) - vp.f * vp.f / r - nu * (lap(vr) - vr.f / (r * r)) + p.f_r - force.v_r;
  out.mom_phi = vp.f_t + adv(vp) + vr.f * vp.f / r - nu * (lap(vp) - vp.f / (r * r)) - force.v_phi;
  out.mom_z = vz.f_t + adv(vz) - nu * lap(vz) + p.f_z - force.v_z;
  out.div = vr.f_r + vr.f / r + vz.f_z;

  const double R = s.domain.R;
  const auto wr = point_derivatives(s.eval, 0, R, z, t, hs);
  const auto wp = point_derivatives(s.eval, 1, R, z, t, hs);
  const auto wz = point_derivatives(s.eval, 2, R, z, t, hs);
  out.wall_normal = wr.f;
  out.wall_shear = wz.f_r;
  out.wall_robin = wp.f_r - wp.f / R;
  return out;
}

/// Largest residual over n quasi-random (Halton) points in the cylinder and
/// t in [0, 1].
inline PdeResidual residual_sampling(const ExactSolution& s, int n = 100) {
  PdeResidual worst;
  auto upd = [](double& w, double v) { w = std::max(w, std::abs(v)); };
  for (int i = 1; i <= n; ++i) {
    const double r = s.domain.R * (0.02 + 0.96 * detail::radical_inverse(i, 2));
    const double z = s.domain.a * (2.0 * detail::radical_inverse(i, 3) - 1.0);
    const double t = detail::radical_inverse(i, 5);
    const PdeResidual q = pde_residual(s, r, z, t);
    upd(worst.mom_r, q.mom_r);
    upd(worst.mom_phi, q.mom_phi);
    upd(worst.mom_z, q.mom_z);
    upd(worst.div, q.div);
    upd(worst.wall_normal, q.wall_normal);
    upd(worst.wall_shear, q.wall_shear);
    upd(worst.wall_robin, q.wall_robin);
  }
  return worst;
}

constexpr double exact_residual_tol = 1e-8;

inline ExactSolution checked(ExactSolution s) {
  const PdeResidual res = residual_sampling(s);
  const double worst = std::max(res.momentum_max(), res.kinematic_max());
  if (!(worst <= exact_residual_tol))
    throw numerical_error("exact solution '" + s.name + "' fails residual sampling", worst);
  return s;
}

inline ExactSolution rigid_rotation(const CylinderDomain& d, double Omega) {
  d.validate();
  return checked({"rigid_rotation", d,
                  [Omega](double r, double, double) {
                    return PointState{0.0, Omega * r, 0.0, 0.5 * Omega * Omega * r * r};
                  },
                  "steady; v_phi = Omega r, p = Omega^2 r^2 / 2"});
}

inline ExactSolution uniform_axial_flow(const CylinderDomain& d, double c) {
  d.validate();
  return checked({"uniform_axial_flow", d,
                  [c](double, double, double) { return PointState{0.0, 0.0, c, 0.0}; },
                  "steady; v_z = c"});
}

/// Pure-swirl heat mode v_phi = e^{-nu lambda t} J_1(sqrt(lambda) r), with the
/// pressure balancing the centrifugal term.
struct BesselMode {
  ExactSolution solution;
  double lambda = 0.0;
  double amplitude = 1.0;

  double decay_rate(double nu) const { return nu * lambda; }
};

inline BesselMode bessel_swirl_mode(const CylinderDomain& d, double amplitude = 1.0) {
  d.validate();
  const double lambda = bessel_robin_eigenvalue(d.R);
  const double k = std::sqrt(lambda);
  const double nu = d.nu;
  // int_0^r J_1(k s)^2 / s ds = (1 - J_0(kr)^2 - J_1(kr)^2) / 2
  auto pressure_profile = [k](double r) {
    const double j0 = bessel_j0(k * r), j1 = bessel_j1(k * r);
    return 0.5 * (1.0 - j0 * j0 - j1 * j1);
  };
  Evaluator e = [=](double r, double, double t) {
    const double decay = std::exp(-nu * lambda * t);
    const double amp = amplitude * decay;
    return PointState{0.0, amp * bessel_j1(k * r), 0.0, amp * amp * pressure_profile(r)};
  };
  return {checked({"bessel_swirl_mode", d, e, "v_phi = e^{-nu lambda t} J_1(sqrt(lambda) r)"}), lambda,
          amplitude};
}

/// Field sampling of an exact solution on the grid at time t.
inline VelocityField sample_state(const Grid& g, const ExactSolution& s, double t) {
  auto v = VelocityField::zeros(g);
  v.t = t;
  for (int j = 0; j < g.nr; ++j)
    for (int k = 0; k < g.nz; ++k) {
      const PointState q = s.eval(g.r_centers[j], g.z_nodes[k], t);
      v.v_r(j, k) = q.v_r;
      v.v_phi(j, k) = q.v_phi;
      v.v_z(j, k) = q.v_z;
      v.p(j, k) = q.p;
    }
  return v;
}

/// Per-component L2 errors (v_r, v_phi, v_z) against a reference state.
inline std::array<double, 3> component_errors(const Grid& g, const VelocityField& a,
                                              const VelocityField& b) {
  auto e = [&](const Field2D& x, const Field2D& y) {
    const Field2D d = x - y;
    return std::sqrt(2.0 * std::numbers::pi * r_weighted_dot(g, d, d));
  };
  return {e(a.v_r, b.v_r), e(a.v_phi, b.v_phi), e(a.v_z, b.v_z)};
}

/// Separable manufactured solution:
///   v_r = a(t) VR(r,z), v_z = a(t) VZ(r,z), v_phi = b(t) VP(r,z), p = c(t) P(r,z).
/// The forcing is the residual of the momentum equations; its spatial factors
/// are computed once per grid by Ridders-extrapolated differences.
struct SeparableManufactured {
  CylinderDomain domain;
  std::function<double(double, double)> VR, VP, VZ, P;
  std::function<double(double)> a, da, b, db, c;

  ExactSolution solution() const {
    auto self = *this;
    return {"manufactured", domain,
            [self](double r, double z, double t) {
              const double at = self.a(t), bt = self.b(t), ct = self.c(t);
              return PointState{at * self.VR(r, z), bt * self.VP(r, z), at * self.VZ(r, z),
                                ct * self.P(r, z)};
            },
            "separable manufactured family"};
  }
};

/// Spatial factors of the forcing; f(t) is a fixed combination of them.
struct ManufacturedForcing {
  SeparableManufactured m;
  Field2D r_da, r_aa, r_bb, r_a, r_c;
  Field2D p_db, p_ab, p_b;
  Field2D z_da, z_aa, z_a, z_c;

  BodyForce at(double t) const {
    const double a = m.a(t), da = m.da(t), b = m.b(t), db = m.db(t), c = m.c(t);
    BodyForce f{r_da, p_db, z_da};
    f.f_r *= da;
    f.f_r.axpy(a * a, r_aa).axpy(b * b, r_bb).axpy(a, r_a).axpy(c, r_c);
    f.f_phi *= db;
    f.f_phi.axpy(a * b, p_ab).axpy(b, p_b);
    f.f_z *= da;
    f.f_z.axpy(a * a, z_aa).axpy(a, z_a).axpy(c, z_c);
    return f;
  }
};

inline ManufacturedForcing manufactured_forcing(const Grid& g, const SeparableManufactured& m,
                                                int levels = 10) {
  const double nu = g.nu();
  const double hs = 0.05 * std::min(g.R(), g.a());
  ManufacturedForcing out{m};
  for (auto* f : {&out.r_da, &out.r_aa, &out.r_bb, &out.r_a, &out.r_c, &out.p_db, &out.p_ab, &out.p_b,
                  &out.z_da, &out.z_aa, &out.z_a, &out.z_c})
    *f = g.make_field();
  using Fn = std::function<double(double, double)>;
  struct D {
    double f, r, z, rr, zz;
  };
  auto derive = [&](const Fn& F, double r, double z) {
    auto fr = [&](double x) { return F(x, z); };
    auto fz = [&](double x) { return F(r, x); };
    return D{F(r, z), ridders_derivative(fr, r, hs, levels), ridders_derivative(fz, z, hs, levels),
             ridders_second_derivative(fr, r, hs, levels), ridders_second_derivative(fz, z, hs, levels)};
  };
  parallel_for(g.nr, [&](int j) {
    const double r = g.r_centers[j];
    for (int k = 0; k < g.nz; ++k) {
      const double z = g.z_nodes[k];
      const D vr = derive(m.VR, r, z), vp = derive(m.VP, r, z), vz = derive(m.VZ, r, z);
      const D p = derive(m.P, r, z);
      auto lap = [r](const D& d) { return d.rr + d.r / r + d.zz; };
      out.r_da(j, k) = vr.f;
      out.r_aa(j, k) = vr.f * vr.r + vz.f * vr.z;
      out.r_bb(j, k) = -vp.f * vp.f / r;
      out.r_a(j, k) = -nu * (lap(vr) - vr.f / (r * r));
      out.r_c(j, k) = p.r;
      out.p_db(j, k) = vp.f;
      out.p_ab(j, k) = vr.f * vp.r + vz.f * vp.z + vr.f * vp.f / r;
      out.p_b(j, k) = -nu * (lap(vp) - vp.f / (r * r));
      out.z_da(j, k) = vz.f;
      out.z_aa(j, k) = vr.f * vz.r + vz.f * vz.z;
      out.z_a(j, k) = -nu * lap(vz);
      out.z_c(j, k) = p.z;
    }
  });
  return out;
}

/// The default family: polynomial in s = r / R, one Fourier mode in z, with
/// v_r odd and v_z, v_phi / r even across the axis, and the slip conditions
/// v_r = v_{z,r} = 0, v_{phi,r} = v_phi / R holding at r = R.
inline SeparableManufactured manufactured_family(const CylinderDomain& d, double A = 1.0, double B = 1.0,
                                                 double C = 0.5) {
  d.validate();
  const double R = d.R, k = std::numbers::pi / d.a;
  SeparableManufactured m;
  m.domain = d;
  m.VR = [=](double r, double z) {
    const double s = r / R, q = 1.0 - s * s;
    return A * R * s * q * q * q * std::sin(k * z);
  };
  m.VZ = [=](double r, double z) {
    const double s = r / R, q = 1.0 - s * s;
    return 2.0 * A / k * q * q * (1.0 - 4.0 * s * s) * std::cos(k * z);
  };
  m.VP = [=](double r, double z) {
    const double s = r / R, q = 1.0 - s * s;
    return B * R * s * q * q * (1.0 + 0.5 * std::cos(k * z));
  };
  m.P = [=](double r, double z) { return 0.5 * C * r * r * std::cos(k * z); };
  m.a = [](double t) { return 1.0 + 0.5 * std::sin(2.0 * t); };
  m.da = [](double t) { return std::cos(2.0 * t); };
  m.b = [](double t) { return 1.0 + 0.5 * std::cos(2.0 * t); };
  m.db = [](double t) { return -std::sin(2.0 * t); };
  m.c = m.a;
  return m;
}

/// Wall and divergence check of a manufactured family (the momentum residual
/// is the forcing by construction).
inline void check_family(const SeparableManufactured& m) {
  const PdeResidual res = residual_sampling(m.solution(), 50);
  if (!(res.kinematic_max() <= exact_residual_tol))
    throw config_error("manufactured family violates continuity or slip conditions");
}

/// Decaying nonlinear test vortex: the manufactured family at t = 0, projected
/// onto the discrete solenoidal space, with zero pressure.
inline VelocityField test_vortex(const Grid& g, double A = 0.5, double B = 1.0) {
  const auto m = manufactured_family(g.domain, A, B, 0.0);
  VelocityField v = sample_state(g, m.solution(), 0.0);
  v.p.fill(0.0);
  return project_divergence_free(g, v).v;
}

/// Least-squares slope of log(err) against log(h).
inline double fit_order(const std::vector<double>& h, const std::vector<double>& err) {
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(h[i]), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct ComponentOrder {
  std::string component;
  std::vector<double> errors;
  double order = 0.0;
  bool exact = false;     // errors at the rounding floor
  bool monotone = true;   // errors decrease under refinement
};

struct ConvergenceResult {
  std::vector<double> h;
  std::vector<ComponentOrder> components;
};

/// err_at(n) returns {h, {e_r, e_phi, e_z}} for resolution n.
template <class ErrorAt>
ConvergenceResult convergence_study(const std::vector<int>& resolutions, ErrorAt&& err_at,
                                    double floor = 1e-12) {
  if (resolutions.size() < 3) throw config_error("convergence study needs at least 3 resolutions");
  ConvergenceResult out;
  const char* names[3] = {"v_r", "v_phi", "v_z"};
  std::array<std::vector<double>, 3> errs;
  for (int n : resolutions) {
    const auto [h, e] = err_at(n);
    out.h.push_back(h);
    for (int c = 0; c < 3; ++c) errs[c].push_back(e[c]);
  }
  for (int c = 0; c < 3; ++c) {
    ComponentOrder co{names[c], errs[c]};
    co.exact = true;
    for (double e : errs[c]) co.exact = co.exact && e <= floor;
    for (std::size_t i = 1; i < errs[c].size(); ++i) co.monotone = co.monotone && errs[c][i] < errs[c][i - 1];
    co.order = co.exact ? std::numeric_limits<double>::infinity() : fit_order(out.h, errs[c]);
    out.components.push_back(std::move(co));
  }
  return out;
}

}  // namespace axisym
