#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "axisym/config.hpp"
#include "axisym/io.hpp"
#include "axisym/oracles.hpp"

namespace axisym {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_numerical = 3;

struct InitialData {
  Grid grid;
  VelocityField state;
  ForcingFn forcing;
};

inline InitialData make_initial(const RunConfig& c) {
  c.validate();
  if (c.initial == "snapshot") {
    Snapshot s = read_snapshot(c.snapshot);
    return {build_grid(s.domain, s.nr, s.nz), std::move(s.state), {}};
  }
  const CylinderDomain d = c.domain();
  Grid g = build_grid(d, c.Nr, c.Nz);
  const double A = c.amplitude;
  if (c.initial == "zero") return {g, VelocityField::zeros(g), {}};
  if (c.initial == "rigid-rotation") return {g, sample_state(g, rigid_rotation(d, A), 0.0), {}};
  if (c.initial == "axial-flow") return {g, sample_state(g, uniform_axial_flow(d, A), 0.0), {}};
  if (c.initial == "bessel") return {g, sample_state(g, bessel_swirl_mode(d, A).solution, 0.0), {}};
  if (c.initial == "vortex") return {g, test_vortex(g, 0.5 * A, A), {}};
  const SeparableManufactured m = manufactured_family(d, A, A, 0.5 * A);
  auto f = std::make_shared<ManufacturedForcing>(manufactured_forcing(g, m));
  return {g, sample_state(g, m.solution(), 0.0), [f](double t) { return f->at(t); }};
}

inline MonitorConfig monitor_config(const RunConfig& c) {
  MonitorConfig m;
  if (c.r0 > 0.0) m.r0 = c.r0;
  m.holder_window = c.holder_window;
  m.holder_cap = c.holder_cap;
  m.holder_every = c.holder_every;
  m.c_mult = c.c_mult;
  m.c0 = c.c0;
  return m;
}

inline std::filesystem::path prepare_out_dir(const RunConfig& c) {
  std::filesystem::path dir(c.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw config_error("cannot create output directory " + c.out_dir + ": " + ec.message());
  return dir;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw config_error("cannot open output file " + p.string());
  return os;
}

struct RunOutcome {
  int code = exit_ok;
  std::string summary;
};

/// Integrate to t_end, streaming one CSV row per record interval. On a solver
/// failure the rows so far, the last good snapshot and the summary are kept.
inline RunOutcome run_simulate(const RunConfig& c) {
  InitialData init = make_initial(c);
  const Grid& g = init.grid;
  const auto dir = prepare_out_dir(c);
  Stepper st(g, c.step_config(), init.forcing);
  Monitor mon(g, monitor_config(c), init.state);
  std::ofstream csv = open_out(dir / "diagnostics.csv");
  write_csv_header(csv);
  write_csv_row(csv, mon.records().back());

  VelocityField v = init.state;
  const double t_end = v.t + c.t_end;
  const bool adaptive = c.cfl > 0.0;
  const auto [n_fixed, h_fixed] = segment_steps(std::max(c.t_end, 1e-300), c.dt);
  int steps = 0;
  std::ostringstream fail;
  double fail_residual = 0.0;
  try {
    while (c.t_end > 0.0) {
      double h = h_fixed;
      if (adaptive) h = std::min(cfl_dt(g, v, st.config()), t_end - v.t);
      v = st.step(v, h);
      ++steps;
      const bool last = adaptive ? v.t >= t_end * (1.0 - 1e-14) : steps == n_fixed;
      if (last && !adaptive) v.t = t_end;
      if (steps % c.record_every == 0 || last) write_csv_row(csv, mon.observe(v));
      if (last) break;
    }
  } catch (const numerical_error& e) {
    fail << e.what();
    fail_residual = e.residual();
  }
  write_snapshot((dir / "final.snap").string(), g, v);

  std::ostringstream os;
  os << "# axisym run summary v1\n";
  os << "[config]\n" << to_json(c).dump(2) << '\n';
  os << "[run]\n";
  os << "steps: " << steps << '\n';
  os << "t_final: " << format_number(v.t) << '\n';
  os << "records: " << mon.records().size() << '\n';
  if (!fail.str().empty()) {
    os << "failure: " << fail.str() << '\n';
    os << "failure_t: " << format_number(v.t) << '\n';
    os << "failure_residual: " << format_number(fail_residual) << '\n';
  }
  write_ledger(os, mon.ledger());
  os << "korn_second_half_variation: " << format_number(korn_variation(mon.records())) << '\n';
  os << "[checks]\n";
  write_checks(os, mon.worst());
  std::ofstream sum = open_out(dir / "summary.txt");
  sum << os.str();
  return {fail.str().empty() ? exit_ok : exit_numerical, os.str()};
}

/// alpha from the initial data, T from c_* (configured or calibrated on
/// Bessel modes and test vortices at two amplitudes), then K segments.
inline RunOutcome run_continuation(const RunConfig& c) {
  InitialData init = make_initial(c);
  const Grid& g = init.grid;
  const auto dir = prepare_out_dir(c);
  Monitor mon(g, monitor_config(c), init.state);

  double c_star = c.c_star;
  std::string source = "configured";
  if (c.calibrate) {
    std::vector<CalibrationRun> runs;
    for (double amp : {0.5, 1.0}) {
      Stepper cal(g, c.step_config());
      runs.push_back(calibration_run("vortex@" + format_number(amp), cal, test_vortex(g, 0.5 * amp, amp),
                                     c.calibration_horizon, c.c_mult));
    }
    const CStarEstimate est = estimate_c_star(runs);
    c_star = est.c_star;
    std::ostringstream s;
    s << "calibrated on";
    for (std::size_t i = 0; i < est.runs.size(); ++i)
      s << ' ' << est.runs[i] << "(alpha=" << format_number(est.alphas[i])
        << ",growth=" << format_number(est.growth[i]) << ')';
    s << " floor=" << format_number(est.floor);
    source = s.str();
    mon.set_c_star(c_star);
  }

  const ContinuationPlan plan = make_plan(mon.ledger().alpha, c_star, c.K, c.T_max);
  Stepper st(g, c.step_config(), init.forcing);
  const ContinuationResult res = run_segments(st, mon, init.state, plan, c.record_every);

  std::ofstream csv = open_out(dir / "diagnostics.csv");
  write_csv_header(csv);
  for (const auto& r : mon.records()) write_csv_row(csv, r);
  write_snapshot((dir / "final.snap").string(), g, res.final_state);

  std::ostringstream os;
  write_certificate(os, res, mon.ledger(), source, korn_variation(mon.records()));
  std::ofstream cert = open_out(dir / "certificate.txt");
  cert << os.str();
  const bool failed = !res.segments.empty() && res.segments.back().failed;
  return {failed ? exit_numerical : exit_ok, os.str()};
}

/// Ledger, record and checks for a stored snapshot.
inline RunOutcome run_norms(const std::string& snapshot_path, const RunConfig& c) {
  const Snapshot s = read_snapshot(snapshot_path);
  const Grid g = build_grid(s.domain, s.nr, s.nz);
  if (!s.state.all_finite()) throw numerical_error("snapshot contains non-finite values", 0.0);
  const Monitor mon(g, monitor_config(c), s.state);
  std::ostringstream os;
  os << "# axisym norms v1\n";
  os << "snapshot: " << snapshot_path << '\n';
  os << "R: " << format_number(s.domain.R) << '\n';
  os << "a: " << format_number(s.domain.a) << '\n';
  os << "nu: " << format_number(s.domain.nu) << '\n';
  os << "Nr: " << s.nr << '\n';
  os << "Nz: " << s.nz << '\n';
  os << "t: " << format_number(s.state.t) << '\n';
  write_ledger(os, mon.ledger());
  os << "[record]\n";
  write_csv_header(os);
  write_csv_row(os, mon.records().back());
  os << "[checks]\n";
  write_checks(os, mon.check());
  return {exit_ok, os.str()};
}

}  // namespace axisym
