#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "axisym/errors.hpp"

namespace axisym {

/// Scalar samples on an (r, z) cell-centred mesh, stored row-major with the
/// radial index as the row: element (j, k) lives at j * nz + k.
class Field2D {
public:
  Field2D() = default;
  Field2D(int nr, int nz, double fill = 0.0)
      : nr_(nr), nz_(nz), data_(static_cast<std::size_t>(nr) * nz, fill) {}

  int nr() const noexcept { return nr_; }
  int nz() const noexcept { return nz_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(int j, int k) noexcept { return data_[static_cast<std::size_t>(j) * nz_ + k]; }
  double operator()(int j, int k) const noexcept {
    return data_[static_cast<std::size_t>(j) * nz_ + k];
  }

  std::span<double> values() noexcept { return data_; }
  std::span<const double> values() const noexcept { return data_; }
  std::vector<double>& raw() noexcept { return data_; }
  const std::vector<double>& raw() const noexcept { return data_; }

  bool same_shape(const Field2D& o) const noexcept { return nr_ == o.nr_ && nz_ == o.nz_; }

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

  Field2D& operator+=(const Field2D& o) {
    check_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Field2D& operator-=(const Field2D& o) {
    check_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Field2D& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }
  /// this += s * o
  Field2D& axpy(double s, const Field2D& o) {
    check_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += s * o.data_[i];
    return *this;
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
  }

  bool all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
  }

  friend Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
  friend Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }
  friend Field2D operator*(double s, Field2D a) { return a *= s; }

  void check_shape(const Field2D& o) const {
    if (!same_shape(o)) throw config_error("Field2D: shape mismatch");
  }

private:
  int nr_ = 0;
  int nz_ = 0;
  std::vector<double> data_;
};

}  // namespace axisym
