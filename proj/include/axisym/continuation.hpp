#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "axisym/integrator.hpp"
#include "axisym/monitor.hpp"

namespace axisym {

/// Segment length from c_* T^{1/2} alpha <= 1 with equality, capped at T_max.
/// alpha = 0 makes the constraint vacuous and returns T_max.
inline double compute_T(double alpha, double c_star, double T_max) {
  if (!(T_max > 0.0)) throw config_error("T_max must be positive");
  if (!(c_star > 0.0)) throw config_error("c_star must be positive");
  if (alpha < 0.0) throw config_error("alpha must be non-negative");
  if (alpha == 0.0) return T_max;
  const double ca = c_star * alpha;
  return std::min(1.0 / (ca * ca), T_max);
}

struct ContinuationPlan {
  double alpha = 0.0;
  double c_star = 1.0;
  double T_seg = 0.0;
  int K = 1;
  double total_time() const { return K * T_seg; }

  void validate() const {
    if (!(T_seg > 0.0)) throw config_error("segment length must be positive");
    if (K < 1) throw config_error("segment count must be at least 1");
    if (!(c_star > 0.0)) throw config_error("c_star must be positive");
  }
};

inline ContinuationPlan make_plan(double alpha, double c_star, int K, double T_max) {
  ContinuationPlan p{alpha, c_star, compute_T(alpha, c_star, T_max), K};
  p.validate();
  return p;
}

struct SegmentReport {
  int k = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  int steps = 0;
  double h1_at_boundary = 0.0;
  bool passed = false;
  double w21_proxy = 0.0;
  bool failed = false;        // solver failure inside the segment
  std::string failure;
  double failure_t = 0.0;
  double failure_residual = 0.0;
  std::vector<InequalityCheck> worst;  // worst check margins up to this boundary
};

struct ContinuationResult {
  ContinuationPlan plan;
  std::vector<SegmentReport> segments;
  VelocityField final_state;
  bool all_passed() const {
    return !segments.empty() && std::all_of(segments.begin(), segments.end(),
                                            [](const SegmentReport& s) { return s.passed && !s.failed; });
  }
};

/// Uniform step count and size covering a segment of length T with steps no
/// larger than dt.
inline std::pair<int, double> segment_steps(double T, double dt) {
  const int n = std::max(1, static_cast<int>(std::ceil(T / dt - 1e-9)));
  return {n, T / n};
}

/// March v0 through plan.K segments. The monitor restarts its space-time
/// accumulators at each boundary; the H1 check is observational, and a solver
/// failure ends the run with a partial report.
inline ContinuationResult run_segments(Stepper& st, Monitor& mon, const VelocityField& v0,
                                       const ContinuationPlan& plan, int record_every = 1) {
  plan.validate();
  if (record_every < 1) throw config_error("record_every must be at least 1");
  ContinuationResult res{plan, {}, v0};
  VelocityField v = v0;
  const auto [n, h] = segment_steps(plan.T_seg, st.config().dt);
  for (int k = 0; k < plan.K; ++k) {
    SegmentReport rep;
    rep.k = k;
    rep.t_start = v.t;
    if (k > 0) mon.begin_segment(v);
    try {
      for (int s = 1; s <= n; ++s) {
        v = st.step(v, h);
        rep.steps = s;
        if (s == n) v.t = v0.t + (k + 1) * plan.T_seg;
        if (s % record_every == 0 || s == n) mon.observe(v);
      }
    } catch (const numerical_error& e) {
      rep.failed = true;
      rep.failure = e.what();
      rep.failure_t = v.t;
      rep.failure_residual = e.residual();
      rep.t_end = v.t;
      rep.worst = mon.worst();
      res.segments.push_back(std::move(rep));
      res.final_state = v;
      return res;
    }
    rep.t_end = v.t;
    rep.h1_at_boundary = mon.records().back().h1_v;
    rep.passed = rep.h1_at_boundary <= plan.alpha;
    rep.w21_proxy = mon.records().back().w21_proxy;
    rep.worst = mon.worst();
    res.segments.push_back(std::move(rep));
  }
  res.final_state = v;
  return res;
}

/// The same dt sequence as run_segments without any segmentation.
inline VelocityField run_monolithic(Stepper& st, const VelocityField& v0, const ContinuationPlan& plan) {
  plan.validate();
  VelocityField v = v0;
  const auto [n, h] = segment_steps(plan.T_seg, st.config().dt);
  for (int k = 0; k < plan.K; ++k)
    for (int s = 0; s < n; ++s) v = st.step(v, h);
  return v;
}

// ---------------------------------------------------------------------------
// Empirical c_*

/// H1 trajectory of one calibration run with its continuation constant.
struct CalibrationRun {
  std::string name;
  double alpha = 0.0;
  std::vector<double> t;
  std::vector<double> h1;
};

inline CalibrationRun calibration_run(std::string name, Stepper& st, const VelocityField& v0,
                                      double horizon, double c_mult = 1.0) {
  const Grid& g = st.grid();
  CalibrationRun run{std::move(name), alpha_from_initial(g, v0, derive(g, v0), c_mult), {}, {}};
  VelocityField v = v0;
  run.t.push_back(v.t);
  run.h1.push_back(std::sqrt(h1_norm_sq(g, v)));
  const auto [n, h] = segment_steps(horizon, st.config().dt);
  for (int s = 0; s < n; ++s) {
    v = st.step(v, h);
    run.t.push_back(v.t);
    run.h1.push_back(std::sqrt(h1_norm_sq(g, v)));
  }
  return run;
}

/// Linear interpolation of the H1 trajectory at time t (inside the horizon).
inline double h1_at(const CalibrationRun& r, double t) {
  const auto it = std::lower_bound(r.t.begin(), r.t.end(), t);
  if (it == r.t.begin()) return r.h1.front();
  if (it == r.t.end()) return r.h1.back();
  const std::size_t i = static_cast<std::size_t>(it - r.t.begin());
  const double w = (t - r.t[i - 1]) / (r.t[i] - r.t[i - 1]);
  return (1.0 - w) * r.h1[i - 1] + w * r.h1[i];
}

/// Whether segments of length 1/(c alpha)^2 keep every observed boundary
/// value below alpha. Boundaries beyond the simulated horizon are judged by
/// the whole observed trajectory staying below alpha.
inline bool calibration_accepts(const CalibrationRun& r, double c, int K) {
  const double t0 = r.t.front(), horizon = r.t.back() - t0;
  const double T = r.alpha > 0.0 ? 1.0 / ((c * r.alpha) * (c * r.alpha)) : horizon;
  const double sup = *std::max_element(r.h1.begin(), r.h1.end());
  for (int k = 1; k <= K; ++k) {
    const double tk = k * T;
    if (tk > horizon) return sup <= r.alpha;
    if (h1_at(r, t0 + tk) > r.alpha) return false;
  }
  return true;
}

struct CStarEstimate {
  double c_star = 0.0;
  double floor = 1e-3;
  std::vector<std::string> runs;
  std::vector<double> alphas;
  std::vector<double> growth;  // max_t ||v(t)||_{H1} / alpha per run
};

/// Smallest c on a geometric ladder from floor to c_max accepted by every
/// calibration run.
inline CStarEstimate estimate_c_star(const std::vector<CalibrationRun>& runs, int K = 1,
                                     double floor = 1e-3, double c_max = 1e3, double ratio = 1.1) {
  if (runs.size() < 2) throw config_error("c_star calibration needs at least two runs");
  if (!(floor > 0.0) || !(c_max > floor) || !(ratio > 1.0)) throw config_error("bad c_star ladder");
  CStarEstimate est;
  est.floor = floor;
  for (const auto& r : runs) {
    est.runs.push_back(r.name);
    est.alphas.push_back(r.alpha);
    const double sup = *std::max_element(r.h1.begin(), r.h1.end());
    est.growth.push_back(r.alpha > 0.0 ? sup / r.alpha : 0.0);
  }
  for (double c = floor; c <= c_max * (1.0 + 1e-12); c *= ratio) {
    if (std::all_of(runs.begin(), runs.end(), [&](const auto& r) { return calibration_accepts(r, c, K); })) {
      est.c_star = c;
      return est;
    }
  }
  std::ostringstream msg;
  msg << "no c in [" << floor << ", " << c_max << "] keeps the H1 bound; observed growth";
  for (std::size_t i = 0; i < runs.size(); ++i) msg << ' ' << est.runs[i] << '=' << est.growth[i];
  throw numerical_error(msg.str(), *std::max_element(est.growth.begin(), est.growth.end()));
}

}  // namespace axisym
