#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "axisym/errors.hpp"

namespace axisym {

namespace detail {
#if defined(__GNUC__) && !defined(__clang__) && (defined(__x86_64__) || defined(__i386__))
using wide_float = __float128;
#else
using wide_float = long double;
#endif
}  // namespace detail

/// J_1(x) by its power series, summed in extended precision so that the
/// cancellation for x up to 20 stays below 1e-14.
inline double bessel_j1(double x) {
  using W = detail::wide_float;
  const W h = static_cast<W>(x) / 2;
  const W h2 = h * h;
  W term = h, sum = h;
  for (int m = 0; m < 60; ++m) {
    term *= -h2 / static_cast<W>((m + 1) * (m + 2));
    sum += term;
    if (term == 0) break;
  }
  return static_cast<double>(sum);
}

/// J_0(x) by power series (same precision scheme as bessel_j1).
inline double bessel_j0(double x) {
  using W = detail::wide_float;
  const W h = static_cast<W>(x) / 2;
  const W h2 = h * h;
  W term = 1, sum = 1;
  for (int m = 0; m < 60; ++m) {
    term *= -h2 / static_cast<W>((m + 1) * (m + 1));
    sum += term;
    if (term == 0) break;
  }
  return static_cast<double>(sum);
}

/// J_1'(x) = J_0(x) - J_1(x) / x, with the limit 1/2 at x = 0.
inline double bessel_j1_prime(double x) {
  if (x == 0.0) return 0.5;
  return bessel_j0(x) - bessel_j1(x) / x;
}

/// Independent J_1 by Miller's backward recurrence normalised with
/// J_0 + 2 sum J_{2k} = 1.
inline double bessel_j1_recurrence(double x) {
  if (x == 0.0) return 0.0;
  const int start = 2 * (static_cast<int>(std::abs(x)) + 30);
  double jp = 0.0, j = 1e-30, j1 = 0.0, norm = 0.0;
  for (int n = start; n > 0; --n) {
    const double jm = 2.0 * n / x * j - jp;
    jp = j;
    j = jm;  // j is now J_{n-1}
    if (n - 1 == 1) j1 = j;
    if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * j;
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp *= 1e-250;
      j1 *= 1e-250;
      norm *= 1e-250;
    }
  }
  norm += j;  // J_0
  return j1 / norm;
}

/// Bisection on [lo, hi] to |interval| <= tol; requires a sign change.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo * fhi > 0.0) throw numerical_error("bisection: no sign change in bracket", std::abs(flo));
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Smallest positive lambda with sqrt(lambda) J_1'(sqrt(lambda) R) = J_1(sqrt(lambda) R) / R.
/// In x = sqrt(lambda) R the condition is x J_1'(x) - J_1(x) = 0, whose trivial
/// root x = 0 is skipped by scanning for the first sign change from x = 0.5.
inline double bessel_robin_eigenvalue(double R) {
  if (!(R > 0.0)) throw config_error("bessel eigenvalue: R must be positive");
  auto f = [](double x) { return x * bessel_j1_prime(x) - bessel_j1(x); };
  double lo = 0.5;
  const double step = 0.05;
  while (lo < 20.0) {
    const double hi = lo + step;
    if (f(lo) * f(hi) <= 0.0) {
      const double x = bisect(f, lo, hi, 1e-14);
      return (x / R) * (x / R);
    }
    lo = hi;
  }
  throw numerical_error("bessel eigenvalue: no root bracketed below 20", 0.0);
}

/// Gauss-Legendre nodes and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return {x, w};
}

/// Composite Gauss-Legendre integral of f over [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels = 16,
                        int order = 10) {
  static const auto rule = gauss_legendre(10);
  const auto& [x, w] = order == 10 ? rule : gauss_legendre(order);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < x.size(); ++i) total += w[i] * f(c + 0.5 * h * x[i]);
  }
  return 0.5 * h * total;
}

/// Ridders' polynomial extrapolation h -> 0 of a difference quotient whose
/// error expands in even powers of h. Stops when the tableau error grows.
inline double ridders_extrapolate(const std::function<double(double)>& quotient, double h,
                                  int levels = 10, double* err_out = nullptr) {
  constexpr int max_levels = 16;
  const int n = std::clamp(levels, 2, max_levels);
  constexpr double con = 1.4, con2 = con * con;
  double a[max_levels][max_levels];
  double err = 1e300, ans = 0.0;
  a[0][0] = quotient(h);
  for (int i = 1; i < n; ++i) {
    h /= con;
    a[0][i] = quotient(h);
    double fac = con2;
    for (int j = 1; j <= i; ++j) {
      a[j][i] = (a[j - 1][i] * fac - a[j - 1][i - 1]) / (fac - 1.0);
      fac *= con2;
      const double e = std::max(std::abs(a[j][i] - a[j - 1][i]), std::abs(a[j][i] - a[j - 1][i - 1]));
      if (e <= err) {
        err = e;
        ans = a[j][i];
      }
    }
    if (i >= 4 && std::abs(a[i][i] - a[i - 1][i - 1]) >= 2.0 * err) break;
  }
  if (err_out) *err_out = err;
  return ans;
}

inline double ridders_derivative(const std::function<double(double)>& f, double x, double h,
                                 int levels = 10, double* err_out = nullptr) {
  return ridders_extrapolate([&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); }, h, levels,
                             err_out);
}

inline double ridders_second_derivative(const std::function<double(double)>& f, double x, double h,
                                        int levels = 10, double* err_out = nullptr) {
  const double f0 = f(x);
  return ridders_extrapolate([&](double s) { return (f(x + s) - 2.0 * f0 + f(x - s)) / (s * s); }, h,
                             levels, err_out);
}

}  // namespace axisym
