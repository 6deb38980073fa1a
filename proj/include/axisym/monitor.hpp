#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "axisym/operators.hpp"
#include "axisym/parallel.hpp"

namespace axisym {

/// Instantaneous spatial integrals that are accumulated in time.
struct Integrands {
  double vphi4 = 0.0;        // int v_phi^4
  double vr_over_r_sq = 0.0;  // ||v_r / r||^2
  double omega_sq = 0.0;      // ||v_phi / r||^2
  double omega3 = 0.0;        // int |omega|^3
  double omega92 = 0.0;       // int |omega|^{9/2}
  double grad_sq = 0.0;       // ||grad v||^2
  double h1_sq = 0.0;         // ||v||^2_{H1}
  double vxx_sq = 0.0;        // second-difference proxy
  double loc1_grad_sq = 0.0;  // ||grad(zeta_1 v)||^2
  double loc3_grad_sq = 0.0;  // ||grad(zeta_3 v)||^2
  double chi2_grad_sq = 0.0;  // ||grad(zeta_2 chi)||^2
};

/// Space-time accumulations (trapezoid rule in time) since the segment start.
struct Accumulators {
  double vphi4 = 0.0;
  double vr_over_r_sq = 0.0;
  double omega_sq = 0.0;
  double omega3 = 0.0;
  double omega92 = 0.0;
  double grad_sq = 0.0;
  double h1_sq = 0.0;
  double vt_sq = 0.0;
  double vxx_sq = 0.0;
  double loc1_grad_sq = 0.0;
  double loc3_grad_sq = 0.0;
  double chi2_grad_sq = 0.0;
  double sup_l2_sq = 0.0;      // sup ||v||^2
  double sup_max_u = 0.0;      // sup max|u|
  double loc1_sup_sq = 0.0;    // sup ||zeta_1 v||^2
  double loc3_sup_sq = 0.0;    // sup ||zeta_3 v||^2
  double chi2_sup_sq = 0.0;    // sup ||zeta_2 chi||^2
};

/// One time-stamped row of the monitor ledger. Norms are reported as norms
/// (square roots and s-th roots applied); raw accumulations are in acc.
struct NormRecord {
  double t = 0.0;
  double l2_v = 0.0;
  double h1_v = 0.0;
  double energy_E = 0.0;
  double swirl_mean = 0.0;
  double swirl_max = 0.0;
  double w_vr_over_r = 0.0;
  double w_vphi_over_r = 0.0;
  double w_chi_over_r = 0.0;
  double l4_vphi_acc = 0.0;
  double omega_l3_acc = 0.0;
  double omega_l92_acc = 0.0;
  double omega_l95 = 0.0;
  double omega_l2710 = 0.0;
  double holder_u = std::numeric_limits<double>::quiet_NaN();
  double korn_ratio = std::numeric_limits<double>::quiet_NaN();
  double localized_v1 = 0.0;  // V^1_2-type norm of zeta_1 v
  double localized_v3 = 0.0;  // V^1_2-type norm of zeta_3 v
  double localized_chi = 0.0; // V^0_2-type norm of zeta_2 chi
  double w21_proxy = 0.0;
  Integrands now;
  Accumulators acc;
};

inline double power_integral(const Grid& g, const Field2D& f, double s) {
  Field2D d = f;
  for (double& x : d.raw()) x = std::pow(std::abs(x), s);
  return weighted_integral(g, d);
}

inline double weighted_norm_sq(const Grid& g, const Field2D& f, double power_of_r) {
  Field2D d = g.make_field();
  for (int j = 0; j < g.nr; ++j) {
    const double w = std::pow(g.r_centers[j], power_of_r);
    for (int k = 0; k < g.nz; ++k) d(j, k) = f(j, k) * f(j, k) * w;
  }
  return weighted_integral(g, d);
}

/// zeta * v for each velocity component (pressure dropped).
inline VelocityField localize(const Grid& g, const VelocityField& v, auto&& zeta) {
  auto mul = [&](const Field2D& f) { return scale_rows(g, f, zeta); };
  return {mul(v.v_r), mul(v.v_phi), mul(v.v_z), g.make_field(), v.t};
}

/// |int v . eta dx| with eta = (-x2, x1, 0), i.e. |int u dx|.
inline double rotation_moment(const Grid& g, const VelocityField& v) {
  return std::abs(weighted_integral(g, swirl(g, v)));
}

/// ||v||^2_{H1} / (E + |int v . eta|^2); NaN when the denominator vanishes.
inline double korn_ratio(const Grid& g, const VelocityField& v) {
  const double m = rotation_moment(g, v);
  const double den = dilatation_energy(g, v) + m * m;
  if (!(den > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return h1_norm_sq(g, v) / den;
}

inline Integrands compute_integrands(const Grid& g, const VelocityField& v, const DerivedFields& d,
                                     const CutoffFamily& cut) {
  Integrands in;
  Field2D vphi4 = v.v_phi;
  for (double& x : vphi4.raw()) x = x * x * x * x;
  in.vphi4 = weighted_integral(g, vphi4);
  in.vr_over_r_sq = weighted_norm_sq(g, v.v_r, -2.0);
  in.omega_sq = weighted_norm_sq(g, d.omega, 0.0);
  in.omega3 = power_integral(g, d.omega, 3.0);
  in.omega92 = power_integral(g, d.omega, 4.5);
  in.grad_sq = weighted_integral(g, gradient_density(g, v));
  in.h1_sq = l2_norm_sq(g, v) + in.grad_sq;
  in.vxx_sq = second_derivative_proxy_sq(g, v);
  in.loc1_grad_sq = weighted_integral(g, gradient_density(g, localize(g, v, [&](double r) { return cut.zeta1(r); })));
  in.loc3_grad_sq = weighted_integral(g, gradient_density(g, localize(g, v, [&](double r) { return cut.zeta3(r); })));
  const Field2D chi2 = scale_rows(g, d.chi, [&](double r) { return cut.zeta2(r); });
  Field2D cr = ddr(g, chi2, ScalarBc::chi()), cz = ddz(g, chi2);
  for (std::size_t i = 0; i < cr.size(); ++i)
    cr.raw()[i] = cr.raw()[i] * cr.raw()[i] + cz.raw()[i] * cz.raw()[i];
  in.chi2_grad_sq = weighted_integral(g, cr);
  return in;
}

/// Fill a record from the state and (optionally) the previous record of the
/// same segment; accumulations use the trapezoid rule in time. holder_u is
/// left for the caller since it needs a snapshot window.
inline NormRecord compute_record(const Grid& g, const VelocityField& v, const DerivedFields& d,
                                 const CutoffFamily& cut, const NormRecord* prev,
                                 const VelocityField* prev_state = nullptr) {
  NormRecord rec;
  rec.t = v.t;
  const double l2sq = l2_norm_sq(g, v);
  rec.now = compute_integrands(g, v, d, cut);
  rec.l2_v = std::sqrt(l2sq);
  rec.h1_v = std::sqrt(rec.now.h1_sq);
  rec.energy_E = dilatation_energy(g, v);
  rec.swirl_mean = weighted_integral(g, d.u);
  rec.swirl_max = d.u.max_abs();
  rec.w_vr_over_r = std::sqrt(rec.now.vr_over_r_sq);
  rec.w_vphi_over_r = std::sqrt(rec.now.omega_sq);
  rec.w_chi_over_r = std::sqrt(weighted_norm_sq(g, d.chi, -2.0));
  rec.omega_l95 = std::pow(power_integral(g, d.omega, 1.8), 1.0 / 1.8);
  rec.omega_l2710 = std::pow(power_integral(g, d.omega, 2.7), 1.0 / 2.7);
  rec.korn_ratio = korn_ratio(g, v);

  const double loc1 = l2_norm_sq(g, localize(g, v, [&](double r) { return cut.zeta1(r); }));
  const double loc3 = l2_norm_sq(g, localize(g, v, [&](double r) { return cut.zeta3(r); }));
  const double chi2 = weighted_norm_sq(g, scale_rows(g, d.chi, [&](double r) { return cut.zeta2(r); }), 0.0);

  Accumulators& a = rec.acc;
  if (prev) {
    a = prev->acc;
    const double h = v.t - prev->t;
    const Integrands& p = prev->now;
    const Integrands& n = rec.now;
    auto trap = [h](double x, double y) { return 0.5 * h * (x + y); };
    a.vphi4 += trap(p.vphi4, n.vphi4);
    a.vr_over_r_sq += trap(p.vr_over_r_sq, n.vr_over_r_sq);
    a.omega_sq += trap(p.omega_sq, n.omega_sq);
    a.omega3 += trap(p.omega3, n.omega3);
    a.omega92 += trap(p.omega92, n.omega92);
    a.grad_sq += trap(p.grad_sq, n.grad_sq);
    a.h1_sq += trap(p.h1_sq, n.h1_sq);
    a.vxx_sq += trap(p.vxx_sq, n.vxx_sq);
    a.loc1_grad_sq += trap(p.loc1_grad_sq, n.loc1_grad_sq);
    a.loc3_grad_sq += trap(p.loc3_grad_sq, n.loc3_grad_sq);
    a.chi2_grad_sq += trap(p.chi2_grad_sq, n.chi2_grad_sq);
    if (prev_state && h > 0.0) {
      VelocityField dv{v.v_r - prev_state->v_r, v.v_phi - prev_state->v_phi, v.v_z - prev_state->v_z,
                       g.make_field(), v.t};
      a.vt_sq += l2_norm_sq(g, dv) / h;
    }
  }
  a.sup_l2_sq = std::max(a.sup_l2_sq, l2sq);
  a.sup_max_u = std::max(a.sup_max_u, rec.swirl_max);
  a.loc1_sup_sq = std::max(a.loc1_sup_sq, loc1);
  a.loc3_sup_sq = std::max(a.loc3_sup_sq, loc3);
  a.chi2_sup_sq = std::max(a.chi2_sup_sq, chi2);

  rec.l4_vphi_acc = std::pow(a.vphi4, 0.25);
  rec.omega_l3_acc = std::cbrt(a.omega3);
  rec.omega_l92_acc = std::pow(a.omega92, 1.0 / 4.5);
  rec.localized_v1 = std::sqrt(a.loc1_sup_sq) + std::sqrt(a.loc1_grad_sq);
  rec.localized_v3 = std::sqrt(a.loc3_sup_sq) + std::sqrt(a.loc3_grad_sq);
  rec.localized_chi = std::sqrt(a.chi2_sup_sq) + std::sqrt(a.chi2_grad_sq);
  rec.w21_proxy = a.vt_sq + a.vxx_sq;
  return rec;
}

// ---------------------------------------------------------------------------
// Hoelder seminorm of u in C^{1/2,1/4}

/// Evenly spaced indices of [0, n) with at most cap entries, keeping both ends.
inline std::vector<int> decimate(int n, int cap) {
  std::vector<int> idx;
  if (n <= 0) return idx;
  if (n <= cap) {
    for (int i = 0; i < n; ++i) idx.push_back(i);
    return idx;
  }
  for (int i = 0; i < cap; ++i)
    idx.push_back(static_cast<int>(std::lround(static_cast<double>(i) * (n - 1) / (cap - 1))));
  return idx;
}

/// Periodic minimum-image distance in z.
inline double periodic_dz(const Grid& g, double z1, double z2) {
  const double period = 2.0 * g.a();
  double d = std::abs(z1 - z2);
  d = std::fmod(d, period);
  return std::min(d, period - d);
}

/// Number of radial cells inside supp zeta_1 = {r < 2 r0}; at least the
/// axis row, so a region thinner than one cell still has samples.
inline int holder_region_rows(const Grid& g, double r0) {
  int n = 1;
  while (n < g.nr && g.r_centers[n] < 2.0 * r0) ++n;
  return n;
}

/// Sliding window of u snapshots on a decimated lattice of supp zeta_1 with
/// cached snapshot-pair maxima, so each push costs one row of pair sweeps.
class HolderWindow {
public:
  HolderWindow(const Grid& g, double r0, int window = 10, int cap = 64) : window_(window) {
    if (window < 1) throw config_error("holder window must be at least 1");
    if (cap < 2) throw config_error("holder decimation cap must be at least 2");
    const std::vector<int> js = decimate(holder_region_rows(g, r0), cap);
    const std::vector<int> ks = decimate(g.nz, cap);
    for (int j : js)
      for (int k : ks) pts_.push_back({j, k});
    const std::size_t n = pts_.size();
    sqrt_dist_.resize(n * n);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        const double dr = g.r_centers[pts_[p].j] - g.r_centers[pts_[q].j];
        const double dz = periodic_dz(g, g.z_nodes[pts_[p].k], g.z_nodes[pts_[q].k]);
        sqrt_dist_[p * n + q] = std::sqrt(std::sqrt(dr * dr + dz * dz));
      }
  }

  std::size_t points() const noexcept { return pts_.size(); }
  std::size_t snapshots() const noexcept { return snaps_.size(); }

  void push(double t, const Field2D& u) {
    Snapshot cur{next_id_++, t, {}};
    cur.values.reserve(pts_.size());
    for (const auto& p : pts_) cur.values.push_back(u(p.j, p.k));
    snaps_.push_back(std::move(cur));
    if (static_cast<int>(snaps_.size()) > window_ + 1) {
      const long gone = snaps_.front().id;
      snaps_.pop_front();
      std::erase_if(pairs_, [gone](const PairMax& p) { return p.a == gone || p.b == gone; });
    }
    const Snapshot& last = snaps_.back();
    for (const Snapshot& s : snaps_) pairs_.push_back({s.id, last.id, pair_sup(last, s)});
  }

  /// sup over all retained snapshot pairs; NaN when the window is empty.
  double value() const {
    if (snaps_.empty()) return std::numeric_limits<double>::quiet_NaN();
    double best = 0.0;
    for (const auto& p : pairs_) best = std::max(best, p.value);
    return best;
  }

private:
  struct Point {
    int j, k;
  };
  struct Snapshot {
    long id;
    double t;
    std::vector<double> values;
  };
  struct PairMax {
    long a, b;
    double value;
  };

  double pair_sup(const Snapshot& a, const Snapshot& b) const {
    const std::size_t n = pts_.size();
    const double dt4 = std::sqrt(std::sqrt(std::abs(a.t - b.t)));
    std::vector<double> best(n, 0.0);
    parallel_for(static_cast<int>(n), [&](int p) {
      double m = 0.0;
      const double ua = a.values[p];
      const double* row = &sqrt_dist_[static_cast<std::size_t>(p) * n];
      for (std::size_t q = 0; q < n; ++q) {
        const double den = row[q] + dt4;
        if (den > 0.0) m = std::max(m, std::abs(ua - b.values[q]) / den);
      }
      best[p] = m;
    });
    return *std::max_element(best.begin(), best.end());
  }

  int window_;
  std::vector<Point> pts_;
  std::vector<double> sqrt_dist_;
  std::deque<Snapshot> snaps_;
  std::vector<PairMax> pairs_;
  long next_id_ = 0;
};

/// Brute-force reference: every cell of supp zeta_1, every snapshot pair.
inline double holder_seminorm_exhaustive(const Grid& g, double r0, const std::vector<double>& times,
                                         const std::vector<Field2D>& us) {
  if (us.empty()) throw config_error("holder seminorm: window empty");
  const int nr = holder_region_rows(g, r0);
  double best = 0.0;
  for (std::size_t a = 0; a < us.size(); ++a)
    for (std::size_t b = 0; b < us.size(); ++b)
      for (int j1 = 0; j1 < nr; ++j1)
        for (int k1 = 0; k1 < g.nz; ++k1)
          for (int j2 = 0; j2 < nr; ++j2)
            for (int k2 = 0; k2 < g.nz; ++k2) {
              const double dr = g.r_centers[j1] - g.r_centers[j2];
              const double dz = periodic_dz(g, g.z_nodes[k1], g.z_nodes[k2]);
              const double den = std::pow(dr * dr + dz * dz, 0.25) + std::pow(std::abs(times[a] - times[b]), 0.25);
              if (den > 0.0) best = std::max(best, std::abs(us[a](j1, k1) - us[b](j2, k2)) / den);
            }
  return best;
}

/// Decimated-window seminorm over an explicit list of snapshots.
inline double holder_seminorm_u(const Grid& g, double r0, const std::vector<double>& times,
                                const std::vector<Field2D>& us, int cap = 64) {
  if (us.empty() || us.size() != times.size()) throw config_error("holder seminorm: window empty");
  HolderWindow w(g, r0, static_cast<int>(us.size()), cap);
  for (std::size_t i = 0; i < us.size(); ++i) w.push(times[i], us[i]);
  return w.value();
}

/// Axis smallness hypothesis: holder * r0^{1/2} <= threshold.
inline bool holder_small(double holder, double r0, double threshold) {
  return holder * std::sqrt(r0) <= threshold;
}

// ---------------------------------------------------------------------------
// Constants and inequalities

struct ConstantsLedger {
  double swirl0 = 0.0;      // int u_0
  double swirl_scale = 0.0; // R ||v_0|| |Omega|^{1/2}, bounds |int u| for any ||v|| <= ||v_0||
  double d0 = 0.0;          // |int u_0|
  double d1 = 0.0;          // sqrt(c0) ||v_0||, the T = 0 value
  double d2 = 0.0;          // max |u_0|
  double l2_0 = 0.0;        // ||v_0||
  double c0 = 1.0;          // c in c0 = c (T + 1)
  double alpha = 0.0;
  double c_mult = 1.0;
  double c_star_emp = std::numeric_limits<double>::quiet_NaN();
  double c_k_emp = 0.0;     // running max of korn_ratio
  double nu = 0.0;
  double nu_star_emp() const { return c_k_emp > 0.0 ? nu / c_k_emp : 0.0; }
  double r0 = 0.0;
  double axis_threshold = 0.0;
};

/// The four initial norms entering alpha.
struct AlphaTerms {
  double h1 = 0.0;             // ||v_0||_{H1}
  double vphi_sqrt_r_l4 = 0.0; // ||v_phi / sqrt(r)||_{L4}
  double omega_l3 = 0.0;       // ||v_phi / r||_{L3}
  double chi_over_r_l2 = 0.0;  // ||chi / r||_{L2}
  double sum() const { return h1 + vphi_sqrt_r_l4 + omega_l3 + chi_over_r_l2; }
};

inline AlphaTerms alpha_terms(const Grid& g, const VelocityField& v0, const DerivedFields& d0) {
  AlphaTerms a;
  a.h1 = std::sqrt(h1_norm_sq(g, v0));
  Field2D q = g.make_field();
  for (int j = 0; j < g.nr; ++j) {
    const double r = g.r_centers[j];
    for (int k = 0; k < g.nz; ++k) {
      const double x = v0.v_phi(j, k);
      q(j, k) = x * x * x * x / (r * r);
    }
  }
  a.vphi_sqrt_r_l4 = std::pow(weighted_integral(g, q), 0.25);
  a.omega_l3 = std::cbrt(power_integral(g, d0.omega, 3.0));
  a.chi_over_r_l2 = std::sqrt(weighted_norm_sq(g, d0.chi, -2.0));
  return a;
}

inline double alpha_from_initial(const Grid& g, const VelocityField& v0, const DerivedFields& d0,
                                 double c_mult) {
  if (!(c_mult >= 1.0)) throw config_error("alpha: c must be at least 1");
  return c_mult * alpha_terms(g, v0, d0).sum();
}

/// Bound: implied by the equations, a failure is a finding. Hypothesis: a
/// smallness assumption on the data. Diagnostic: recorded, not asserted.
enum class CheckKind { Bound, Hypothesis, Diagnostic };

inline const char* to_string(CheckKind k) {
  return k == CheckKind::Bound ? "bound" : k == CheckKind::Hypothesis ? "hypothesis" : "diagnostic";
}

struct InequalityCheck {
  std::string name;
  CheckKind kind = CheckKind::Bound;
  bool passed = false;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin() const { return rhs - lhs; }
};

struct CheckContext {
  double segment_start_t = 0.0;
  double segment_start_l2_sq = 0.0;
  double segment_T = 0.0;        // length entering c0 = c (T + 1); 0 uses the elapsed time
  double swirl_rate_tol = 1e-8;  // relative swirl drift allowed per unit time
  double rounding = 1e-12;       // relative slack for inequalities exact in exact arithmetic
};

/// Evaluate every tracked inequality on one record. Failures are entries,
/// never exceptions.
inline std::vector<InequalityCheck> check_inequalities(const NormRecord& r, const ConstantsLedger& L,
                                                       const CheckContext& ctx = {}) {
  std::vector<InequalityCheck> out;
  auto add = [&](std::string name, double lhs, double rhs, CheckKind kind = CheckKind::Bound) {
    out.push_back({std::move(name), kind, lhs <= rhs, lhs, rhs});
  };
  const double eps = ctx.rounding;
  add("l2_nonincreasing", r.l2_v, L.l2_0 * (1.0 + eps));
  add("l2_le_d1", r.l2_v, L.d1 * (1.0 + eps));
  add("swirl_conserved", std::abs(r.swirl_mean - L.swirl0),
      ctx.swirl_rate_tol * r.t * L.d0 + eps * L.swirl_scale);
  const double weak = r.acc.sup_l2_sq + L.nu * (r.acc.grad_sq + r.acc.vr_over_r_sq + r.acc.omega_sq);
  const double T = ctx.segment_T > 0.0 ? ctx.segment_T : r.t - ctx.segment_start_t;
  add("weak_estimate", weak, L.c0 * (T + 1.0) * L.l2_0 * L.l2_0 * (1.0 + eps));
  const double su = r.acc.sup_max_u;
  add("l4_swirl_pointwise", r.acc.vphi4, su * su * r.acc.omega_sq * (1.0 + eps) + 1e-300);
  add("l4_swirl_d2", r.acc.vphi4, L.d2 * L.d2 * r.acc.omega_sq * (1.0 + eps) + 1e-300, CheckKind::Diagnostic);
  const double nu1 = 0.5 * L.nu_star_emp();
  if (nu1 > 0.0) {
    const double dt = r.t - ctx.segment_start_t;
    add("decay", r.l2_v * r.l2_v,
        (L.d0 * L.d0 / nu1 + std::exp(-nu1 * dt) * ctx.segment_start_l2_sq) * (1.0 + eps));
  }
  if (!std::isnan(r.holder_u)) add("axis_holder_small", r.holder_u * std::sqrt(L.r0), L.axis_threshold, CheckKind::Hypothesis);
  return out;
}

/// Relative spread (max - min) / max of the finite korn ratios over the
/// second half of the records.
inline double korn_variation(const std::vector<NormRecord>& recs) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = recs.size() / 2; i < recs.size(); ++i) {
    const double k = recs[i].korn_ratio;
    if (!std::isfinite(k)) continue;
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  if (!(hi > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return (hi - lo) / hi;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* csv_version = "axisym-diagnostics-v1";

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "t",           "l2_v",          "h1_v",          "energy_E",      "swirl_mean",
      "swirl_max",   "w_vr_over_r",   "w_vphi_over_r", "w_chi_over_r",  "l4_vphi_acc",
      "omega_l3_acc", "omega_l92_acc", "omega_l95",    "omega_l2710",   "holder_u",
      "korn_ratio",  "localized_v1",  "localized_v3",  "localized_chi", "w21_proxy"};
  return cols;
}

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_csv_header(std::ostream& os) {
  os << "# " << csv_version << '\n';
  const auto& c = csv_columns();
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << '\n';
}

inline void write_csv_row(std::ostream& os, const NormRecord& r) {
  const double vals[] = {r.t,           r.l2_v,          r.h1_v,          r.energy_E,     r.swirl_mean,
                         r.swirl_max,   r.w_vr_over_r,   r.w_vphi_over_r, r.w_chi_over_r, r.l4_vphi_acc,
                         r.omega_l3_acc, r.omega_l92_acc, r.omega_l95,    r.omega_l2710,  r.holder_u,
                         r.korn_ratio,  r.localized_v1,  r.localized_v3,  r.localized_chi, r.w21_proxy};
  static_assert(std::size(vals) == 20);
  for (std::size_t i = 0; i < std::size(vals); ++i) os << (i ? "," : "") << format_number(vals[i]);
  os << '\n';
}

// ---------------------------------------------------------------------------
// Monitor

struct MonitorConfig {
  std::optional<double> r0;  // default: chosen from the initial Hoelder norm
  int holder_window = 10;
  int holder_cap = 64;
  int holder_every = 1;      // push a Hoelder snapshot every n-th record
  double c_mult = 1.0;
  double c0 = 1.0;
  double swirl_rate_tol = 1e-8;

  void validate() const {
    if (r0 && !(*r0 > 0.0)) throw config_error("r0 must be positive");
    if (holder_every < 1) throw config_error("holder_every must be at least 1");
    if (!(c_mult >= 1.0)) throw config_error("c_mult must be at least 1");
    if (!(c0 >= 1.0)) throw config_error("c0 must be at least 1");
    if (!(swirl_rate_tol > 0.0)) throw config_error("swirl_rate_tol must be positive");
  }
};

/// Records norms along a run, keeps the constants ledger and the worst
/// inequality margins. Single writer.
class Monitor {
public:
  Monitor(const Grid& g, MonitorConfig cfg, const VelocityField& v0)
      : g_(g), cfg_((cfg.validate(), cfg)), cut_{}, holder_(nullptr) {
    const DerivedFields d0 = derive(g_, v0);
    L_.nu = g_.nu();
    L_.c0 = cfg_.c0;
    L_.c_mult = cfg_.c_mult;
    L_.l2_0 = std::sqrt(l2_norm_sq(g_, v0));
    L_.swirl0 = weighted_integral(g_, d0.u);
    L_.swirl_scale = g_.R() * L_.l2_0 * std::sqrt(g_.domain.volume());
    L_.d0 = std::abs(L_.swirl0);
    L_.d1 = std::sqrt(cfg_.c0) * L_.l2_0;
    L_.d2 = d0.u.max_abs();
    L_.alpha = alpha_from_initial(g_, v0, d0, cfg_.c_mult);
    L_.axis_threshold = default_axis_threshold(g_.nu());
    if (cfg_.r0) {
      L_.r0 = std::min(*cfg_.r0, 0.5 * g_.R());
    } else {
      HolderWindow w0(g_, 0.5 * g_.R(), 1, cfg_.holder_cap);
      w0.push(v0.t, d0.u);
      L_.r0 = select_r0(w0.value(), 0.5, L_.axis_threshold, g_.R());
    }
    cut_.r0 = L_.r0;
    begin_segment(v0, d0);
  }

  const ConstantsLedger& ledger() const noexcept { return L_; }
  const CutoffFamily& cutoffs() const noexcept { return cut_; }
  const std::vector<NormRecord>& records() const noexcept { return recs_; }
  const CheckContext& context() const noexcept { return ctx_; }

  /// Start a new segment at v: space-time accumulators and the Hoelder window
  /// restart, pointwise-in-time quantities persist. Records v.
  const NormRecord& begin_segment(const VelocityField& v) { return begin_segment(v, derive(g_, v)); }

  const NormRecord& observe(const VelocityField& v) {
    return push(v, derive(g_, v), &recs_.back());
  }

  /// Checks for the latest record.
  std::vector<InequalityCheck> check() const { return check_inequalities(recs_.back(), L_, ctx_); }

  /// Worst (smallest) margin seen per check name, in first-seen order.
  const std::vector<InequalityCheck>& worst() const noexcept { return worst_; }

  void set_c_star(double c) { L_.c_star_emp = c; }

private:
  const NormRecord& begin_segment(const VelocityField& v, const DerivedFields& d) {
    ctx_.segment_start_t = v.t;
    ctx_.segment_start_l2_sq = l2_norm_sq(g_, v);
    ctx_.swirl_rate_tol = cfg_.swirl_rate_tol;
    holder_ = std::make_unique<HolderWindow>(g_, L_.r0, cfg_.holder_window, cfg_.holder_cap);
    since_holder_ = 0;
    return push(v, d, nullptr);
  }

  const NormRecord& push(const VelocityField& v, const DerivedFields& d, const NormRecord* prev) {
    NormRecord rec = compute_record(g_, v, d, cut_, prev, prev ? &last_state_ : nullptr);
    if (since_holder_++ % cfg_.holder_every == 0) holder_->push(v.t, d.u);
    rec.holder_u = holder_->value();
    if (std::isfinite(rec.korn_ratio)) L_.c_k_emp = std::max(L_.c_k_emp, rec.korn_ratio);
    recs_.push_back(std::move(rec));
    last_state_ = v;
    for (auto& c : check_inequalities(recs_.back(), L_, ctx_)) {
      auto it = std::find_if(worst_.begin(), worst_.end(), [&](const auto& w) { return w.name == c.name; });
      if (it == worst_.end())
        worst_.push_back(c);
      else if (c.margin() < it->margin() || (!c.passed && it->passed))
        *it = c;
    }
    return recs_.back();
  }

  Grid g_;
  MonitorConfig cfg_;
  CutoffFamily cut_;
  ConstantsLedger L_;
  CheckContext ctx_;
  std::unique_ptr<HolderWindow> holder_;
  int since_holder_ = 0;
  std::vector<NormRecord> recs_;
  std::vector<InequalityCheck> worst_;
  VelocityField last_state_;
};

}  // namespace axisym
