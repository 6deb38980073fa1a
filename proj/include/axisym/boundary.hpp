#pragma once

#include "axisym/field2d.hpp"
#include "axisym/grid.hpp"

namespace axisym {

enum class Parity { Odd, Even };

enum class WallKind {
  Dirichlet,    // face value zero: ghost = -interior
  Neumann,      // zero normal derivative: ghost = interior
  Robin,        // f_r = beta f at r = R
  Extrapolate,  // quadratic extrapolation, no condition imposed
};

/// Closure of a scalar at the two radial ends: parity across the axis and a
/// wall condition at r = R. z is always periodic.
struct ScalarBc {
  Parity axis = Parity::Even;
  WallKind wall = WallKind::Neumann;
  double beta = 0.0;  // Robin coefficient

  static ScalarBc v_r() { return {Parity::Odd, WallKind::Dirichlet, 0.0}; }
  static ScalarBc v_phi(double R) { return {Parity::Odd, WallKind::Robin, 1.0 / R}; }
  static ScalarBc v_z() { return {Parity::Even, WallKind::Neumann, 0.0}; }
  static ScalarBc pressure() { return {Parity::Even, WallKind::Extrapolate, 0.0}; }
  static ScalarBc chi() { return {Parity::Odd, WallKind::Dirichlet, 0.0}; }
  static ScalarBc omega() { return {Parity::Even, WallKind::Neumann, 0.0}; }
  /// Swirl u = r v_phi inherits u_r = 2u/R at the wall.
  static ScalarBc swirl(double R) { return {Parity::Even, WallKind::Robin, 2.0 / R}; }
};

/// Ghost value beyond the wall from the last three interior values.
inline double wall_ghost(ScalarBc bc, double dr, double f1, double f2, double f3) noexcept {
  switch (bc.wall) {
    case WallKind::Dirichlet: return -f1;
    case WallKind::Neumann: return f1;
    case WallKind::Robin: {
      const double h = 0.5 * bc.beta * dr;
      return f1 * (1.0 + h) / (1.0 - h);
    }
    case WallKind::Extrapolate: return 3.0 * f1 - 3.0 * f2 + f3;
  }
  return f1;
}

/// Field extended by one ghost row on each radial side; row index runs -1..nr.
class GhostedField {
public:
  GhostedField(const Field2D& f, const Grid& g, ScalarBc bc) : nr_(f.nr()), nz_(f.nz()) {
    f.check_shape(g.make_field());
    data_.assign(static_cast<std::size_t>(nr_ + 2) * nz_, 0.0);
    for (int j = 0; j < nr_; ++j)
      for (int k = 0; k < nz_; ++k) (*this)(j, k) = f(j, k);
    const double sign = bc.axis == Parity::Odd ? -1.0 : 1.0;
    for (int k = 0; k < nz_; ++k) {
      (*this)(-1, k) = sign * f(0, k);
      const double ghost = wall_ghost(bc, g.dr, f(nr_ - 1, k), f(nr_ - 2, k), f(nr_ - 3, k));
      (*this)(nr_, k) = ghost;
    }
  }

  double operator()(int j, int k) const noexcept {
    return data_[static_cast<std::size_t>(j + 1) * nz_ + wrap(k)];
  }
  double& operator()(int j, int k) noexcept {
    return data_[static_cast<std::size_t>(j + 1) * nz_ + wrap(k)];
  }
  int nr() const noexcept { return nr_; }
  int nz() const noexcept { return nz_; }

  /// Value interpolated onto the wall face r = R.
  double wall_value(int k) const noexcept { return 0.5 * ((*this)(nr_ - 1, k) + (*this)(nr_, k)); }
  /// Radial derivative on the wall face.
  double wall_slope(int k, double dr) const noexcept {
    return ((*this)(nr_, k) - (*this)(nr_ - 1, k)) / dr;
  }

private:
  int wrap(int k) const noexcept { return k < 0 ? k + nz_ : (k >= nz_ ? k - nz_ : k); }
  int nr_, nz_;
  std::vector<double> data_;
};

}  // namespace axisym
