#pragma once

#include "axisym/boundary.hpp"

namespace axisym {

/// Centred radial derivative at cell centres, ghost rows supplied by bc.
inline Field2D ddr(const Grid& g, const Field2D& f, ScalarBc bc) {
  const GhostedField e(f, g, bc);
  Field2D out = g.make_field();
  const double inv = 0.5 / g.dr;
  for (int j = 0; j < g.nr; ++j)
    for (int k = 0; k < g.nz; ++k) out(j, k) = (e(j + 1, k) - e(j - 1, k)) * inv;
  return out;
}

/// Centred periodic axial derivative.
inline Field2D ddz(const Grid& g, const Field2D& f) {
  Field2D out = g.make_field();
  const double inv = 0.5 / g.dz;
  const int nz = g.nz;
  for (int j = 0; j < g.nr; ++j)
    for (int k = 0; k < nz; ++k) {
      const int kp = k + 1 == nz ? 0 : k + 1;
      const int km = k == 0 ? nz - 1 : k - 1;
      out(j, k) = (f(j, kp) - f(j, km)) * inv;
    }
  return out;
}

/// Second radial difference f_rr (not the radial Laplacian).
inline Field2D d2dr2(const Grid& g, const Field2D& f, ScalarBc bc) {
  const GhostedField e(f, g, bc);
  Field2D out = g.make_field();
  const double inv = 1.0 / (g.dr * g.dr);
  for (int j = 0; j < g.nr; ++j)
    for (int k = 0; k < g.nz; ++k) out(j, k) = (e(j + 1, k) - 2.0 * e(j, k) + e(j - 1, k)) * inv;
  return out;
}

inline Field2D d2dz2(const Grid& g, const Field2D& f) {
  Field2D out = g.make_field();
  const double inv = 1.0 / (g.dz * g.dz);
  const int nz = g.nz;
  for (int j = 0; j < g.nr; ++j)
    for (int k = 0; k < nz; ++k) {
      const int kp = k + 1 == nz ? 0 : k + 1;
      const int km = k == 0 ? nz - 1 : k - 1;
      out(j, k) = (f(j, kp) - 2.0 * f(j, k) + f(j, km)) * inv;
    }
  return out;
}

/// Multiply every row j by s(r_j).
template <class Fn>
Field2D scale_rows(const Grid& g, Field2D f, Fn&& s) {
  for (int j = 0; j < g.nr; ++j) {
    const double c = s(g.r_centers[j]);
    for (int k = 0; k < g.nz; ++k) f(j, k) *= c;
  }
  return f;
}

}  // namespace axisym
