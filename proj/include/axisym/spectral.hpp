#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "axisym/errors.hpp"
#include "axisym/field2d.hpp"
#include "axisym/parallel.hpp"

namespace axisym {

/// Dense-band matrix with LU factorisation without pivoting. The systems
/// assembled here are similar to symmetric positive (semi)definite matrices,
/// for which elimination without pivoting is stable.
class BandedMatrix {
public:
  BandedMatrix() = default;
  BandedMatrix(int n, int half_bandwidth)
      : n_(n), b_(half_bandwidth), a_(static_cast<std::size_t>(n) * (2 * half_bandwidth + 1), 0.0) {}

  int size() const noexcept { return n_; }
  int half_bandwidth() const noexcept { return b_; }

  double& at(int i, int j) {
    if (std::abs(i - j) > b_) throw config_error("BandedMatrix: entry outside band");
    return a_[static_cast<std::size_t>(i) * (2 * b_ + 1) + (j - i + b_)];
  }
  double get(int i, int j) const {
    if (std::abs(i - j) > b_ || i < 0 || j < 0 || i >= n_ || j >= n_) return 0.0;
    return a_[static_cast<std::size_t>(i) * (2 * b_ + 1) + (j - i + b_)];
  }

  /// Replace row and column i by the identity (pins unknown i to the rhs value).
  void pin(int i) {
    for (int j = std::max(0, i - b_); j <= std::min(n_ - 1, i + b_); ++j) {
      at(i, j) = 0.0;
      at(j, i) = 0.0;
    }
    at(i, i) = 1.0;
    pinned_ = i;
  }

  void factor() {
    for (int k = 0; k < n_; ++k) {
      const double piv = at(k, k);
      if (piv == 0.0 || !std::isfinite(piv))
        throw numerical_error("BandedMatrix: zero pivot in factorisation");
      for (int i = k + 1; i <= std::min(n_ - 1, k + b_); ++i) {
        const double m = at(i, k) / piv;
        at(i, k) = m;
        for (int j = k + 1; j <= std::min(n_ - 1, k + b_); ++j) at(i, j) -= m * at(k, j);
      }
    }
    factored_ = true;
  }

  void solve_in_place(std::vector<double>& x) const {
    if (pinned_ >= 0) x[pinned_] = 0.0;
    for (int i = 0; i < n_; ++i)
      for (int k = std::max(0, i - b_); k < i; ++k) x[i] -= get(i, k) * x[k];
    for (int i = n_ - 1; i >= 0; --i) {
      for (int j = i + 1; j <= std::min(n_ - 1, i + b_); ++j) x[i] -= get(i, j) * x[j];
      x[i] /= get(i, i);
    }
  }

  bool factored() const noexcept { return factored_; }

private:
  int n_ = 0, b_ = 0;
  std::vector<double> a_;
  bool factored_ = false;
  int pinned_ = -1;
};

/// Direct DFT along z for every radial row. O(nz^2) per row, exact up to
/// rounding, deterministic.
class ZTransform {
public:
  explicit ZTransform(int nz) : n_(nz), c_(nz), s_(nz) {
    for (int m = 0; m < nz; ++m) {
      const double th = 2.0 * std::numbers::pi * m / nz;
      c_[m] = std::cos(th);
      s_[m] = std::sin(th);
    }
  }

  int size() const noexcept { return n_; }
  /// Wavenumber index folded to 0..n/2 (modes k and n-k share a radial operator).
  int folded(int k) const noexcept { return std::min(k, n_ - k); }

  void forward(const double* in, double* re, double* im) const {
    for (int k = 0; k < n_; ++k) {
      double a = 0.0, b = 0.0;
      int idx = 0;
      for (int m = 0; m < n_; ++m) {
        a += in[m] * c_[idx];
        b -= in[m] * s_[idx];
        idx += k;
        if (idx >= n_) idx -= n_;
      }
      re[k] = a;
      im[k] = b;
    }
  }

  void inverse(const double* re, const double* im, double* out) const {
    const double inv = 1.0 / n_;
    for (int m = 0; m < n_; ++m) {
      double a = 0.0;
      int idx = 0;
      for (int k = 0; k < n_; ++k) {
        a += re[k] * c_[idx] - im[k] * s_[idx];
        idx += m;
        if (idx >= n_) idx -= n_;
      }
      out[m] = a * inv;
    }
  }

private:
  int n_;
  std::vector<double> c_, s_;
};

/// Solves a linear operator that is circulant in z and banded in r by
/// diagonalising z with the DFT and factoring one radial system per mode.
class ModalSolver {
public:
  using RadialBuilder = std::function<BandedMatrix(int folded_mode)>;

  ModalSolver() = default;
  ModalSolver(int nr, int nz, const RadialBuilder& build) : nr_(nr), nz_(nz), dft_(nz) {
    mats_.resize(nz / 2 + 1);
    for (int k = 0; k <= nz / 2; ++k) {
      mats_[k] = build(k);
      mats_[k].factor();
    }
  }

  Field2D solve(const Field2D& rhs) const {
    std::vector<double> re(static_cast<std::size_t>(nr_) * nz_), im(re.size());
    parallel_for(nr_, [&](int j) {
      dft_.forward(&rhs.raw()[static_cast<std::size_t>(j) * nz_], &re[static_cast<std::size_t>(j) * nz_],
                   &im[static_cast<std::size_t>(j) * nz_]);
    });
    parallel_for(nz_, [&](int k) {
      const auto& m = mats_[dft_.folded(k)];
      std::vector<double> cr(nr_), ci(nr_);
      for (int j = 0; j < nr_; ++j) {
        cr[j] = re[static_cast<std::size_t>(j) * nz_ + k];
        ci[j] = im[static_cast<std::size_t>(j) * nz_ + k];
      }
      m.solve_in_place(cr);
      m.solve_in_place(ci);
      for (int j = 0; j < nr_; ++j) {
        re[static_cast<std::size_t>(j) * nz_ + k] = cr[j];
        im[static_cast<std::size_t>(j) * nz_ + k] = ci[j];
      }
    });
    Field2D out(nr_, nz_);
    parallel_for(nr_, [&](int j) {
      dft_.inverse(&re[static_cast<std::size_t>(j) * nz_], &im[static_cast<std::size_t>(j) * nz_],
                   &out.raw()[static_cast<std::size_t>(j) * nz_]);
    });
    return out;
  }

  int nr() const noexcept { return nr_; }
  int nz() const noexcept { return nz_; }

private:
  int nr_ = 0, nz_ = 0;
  ZTransform dft_{1};
  std::vector<BandedMatrix> mats_;
};

}  // namespace axisym
