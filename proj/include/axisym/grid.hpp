#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "axisym/errors.hpp"
#include "axisym/field2d.hpp"

namespace axisym {

/// Periodic cylinder {r < R, |z| < a} with kinematic viscosity nu.
struct CylinderDomain {
  double R = 1.0;
  double a = 1.0;
  double nu = 1.0;

  void validate() const {
    if (!(R > 0.0) || !(a > 0.0) || !(nu > 0.0))
      throw config_error("CylinderDomain: R, a and nu must all be positive");
  }
  double volume() const noexcept { return std::numbers::pi * R * R * 2.0 * a; }
};

/// Cell-centred (r, z) mesh. No node sits on the axis: r_j = (j + 1/2) dr.
/// z_k = -a + (k + 1/2) dz, periodic with period 2a.
struct Grid {
  CylinderDomain domain;
  int nr = 0;
  int nz = 0;
  double dr = 0.0;
  double dz = 0.0;
  std::vector<double> r_centers;
  std::vector<double> z_nodes;
  /// Per radial row, the midpoint-in-r / uniform-in-z cell measure r_j dr dz.
  /// Multiplied by 2 pi these are the finite-volume cell volumes; every
  /// conservation statement of the discrete operators holds in this measure.
  std::vector<double> quad_weights;
  /// Per radial row, weights of the end-corrected rule (exact for integrands
  /// quadratic in r, even across the axis). Interior rows equal quad_weights.
  std::vector<double> corrected_weights;

  double R() const noexcept { return domain.R; }
  double a() const noexcept { return domain.a; }
  double nu() const noexcept { return domain.nu; }
  /// Face radius r_{j+1/2}; face -1/2 is the axis.
  double r_face(int j) const noexcept { return (j + 1) * dr; }
  Field2D make_field(double fill = 0.0) const { return Field2D(nr, nz, fill); }
  std::size_t cells() const noexcept { return static_cast<std::size_t>(nr) * nz; }
};

namespace detail {

// Exact integral over cell j of L(r) * r, where L is the Lagrange basis
// polynomial of node `which` among the three nodes.
inline std::array<double, 3> cell_moments(const std::array<double, 3>& nodes, double lo,
                                          double hi) {
  static constexpr std::array<double, 3> gx{-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr std::array<double, 3> gw{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  std::array<double, 3> out{};
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int q = 0; q < 3; ++q) {
    const double r = mid + half * gx[q];
    for (int m = 0; m < 3; ++m) {
      double l = 1.0;
      for (int n = 0; n < 3; ++n)
        if (n != m) l *= (r - nodes[n]) / (nodes[m] - nodes[n]);
      out[m] += half * gw[q] * l * r;
    }
  }
  return out;
}

inline std::vector<double> end_corrected_weights(int nr, double dr, double dz) {
  std::vector<double> w(nr, 0.0);
  auto rc = [dr](int j) { return (j + 0.5) * dr; };
  for (int j = 0; j < nr; ++j) {
    std::array<int, 3> idx{j - 1, j, j + 1};
    if (j == nr - 1) idx = {nr - 3, nr - 2, nr - 1};
    const std::array<double, 3> nodes{rc(idx[0]), rc(idx[1]), rc(idx[2])};
    const auto mom = cell_moments(nodes, j * dr, (j + 1) * dr);
    for (int m = 0; m < 3; ++m) {
      // Index -1 is the even mirror of row 0.
      const int target = idx[m] < 0 ? -idx[m] - 1 : idx[m];
      w[target] += mom[m] * dz;
    }
  }
  return w;
}

}  // namespace detail

inline Grid build_grid(const CylinderDomain& domain, int nr, int nz) {
  domain.validate();
  if (nr < 8 || nz < 8) throw config_error("build_grid: Nr and Nz must be at least 8");
  Grid g;
  g.domain = domain;
  g.nr = nr;
  g.nz = nz;
  g.dr = domain.R / nr;
  g.dz = 2.0 * domain.a / nz;
  g.r_centers.resize(nr);
  g.quad_weights.resize(nr);
  for (int j = 0; j < nr; ++j) {
    g.r_centers[j] = (j + 0.5) * g.dr;
    g.quad_weights[j] = g.r_centers[j] * g.dr * g.dz;
  }
  g.z_nodes.resize(nz);
  for (int k = 0; k < nz; ++k) g.z_nodes[k] = -domain.a + (k + 0.5) * g.dz;
  g.corrected_weights = detail::end_corrected_weights(nr, g.dr, g.dz);
  return g;
}

enum class Quadrature { Midpoint, EndCorrected };

/// 2 pi sum_jk w_j f_jk, the discrete counterpart of the volume integral over
/// the cylinder. Summation order is fixed (row by row) so results are
/// reproducible bit for bit.
inline double weighted_integral(const Grid& g, const Field2D& f,
                                Quadrature rule = Quadrature::Midpoint) {
  if (f.nr() != g.nr || f.nz() != g.nz) throw config_error("weighted_integral: shape mismatch");
  const auto& w = rule == Quadrature::Midpoint ? g.quad_weights : g.corrected_weights;
  double total = 0.0;
  for (int j = 0; j < g.nr; ++j) {
    double row = 0.0;
    for (int k = 0; k < g.nz; ++k) row += f(j, k);
    total += w[j] * row;
  }
  return 2.0 * std::numbers::pi * total;
}

/// Sample a function of (r, z) at the cell centres.
template <class Fn>
Field2D sample(const Grid& g, Fn&& fn) {
  Field2D f = g.make_field();
  for (int j = 0; j < g.nr; ++j)
    for (int k = 0; k < g.nz; ++k) f(j, k) = fn(g.r_centers[j], g.z_nodes[k]);
  return f;
}

// ---------------------------------------------------------------------------
// Radial cutoffs

/// Quintic smoothstep 6x^5 - 15x^4 + 10x^3 clamped to [0, 1]; C^2 with
/// vanishing first and second derivatives at both ends.
inline double smoothstep5(double x) noexcept {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

/// zeta_1 (axis neighbourhood), zeta_2 (away from r0/2) and zeta_3 = 1 - zeta_1.
struct CutoffFamily {
  double r0 = 0.25;

  double zeta1(double r) const noexcept { return 1.0 - zeta3(r); }
  double zeta2(double r) const noexcept { return smoothstep5((r - 0.5 * r0) / (0.5 * r0)); }
  double zeta3(double r) const noexcept { return smoothstep5((r - r0) / r0); }
};

inline double cutoff_eval(const CutoffFamily& family, int index, double r) {
  switch (index) {
    case 1: return family.zeta1(r);
    case 2: return family.zeta2(r);
    case 3: return family.zeta3(r);
    default: throw config_error("cutoff_eval: index must be 1, 2 or 3");
  }
}

/// Default smallness threshold for the axis Hoelder condition, (5/4)^{1/4} nu.
inline double default_axis_threshold(double nu) { return std::pow(1.25, 0.25) * nu; }

/// Largest r0 with holder_norm * r0^alpha <= threshold, clamped to (0, R/2].
inline double select_r0(double holder_norm_u0, double alpha_exp, double threshold, double R) {
  if (!(alpha_exp > 0.0) || alpha_exp > 0.5) throw config_error("select_r0: need 0 < alpha <= 1/2");
  if (holder_norm_u0 < 0.0) throw config_error("select_r0: negative Hoelder norm");
  const double cap = 0.5 * R;
  if (holder_norm_u0 == 0.0) return cap;
  const double r0 = std::pow(threshold / holder_norm_u0, 1.0 / alpha_exp);
  return std::min(r0, cap);
}

}  // namespace axisym
