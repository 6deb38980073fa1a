#pragma once

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "axisym/errors.hpp"
#include "axisym/integrator.hpp"

namespace axisym {

/// Every run parameter. Keys in the JSON file and long CLI flags use the
/// field names verbatim.
struct RunConfig {
  // domain and grid
  double R = 1.0;
  double a = 1.0;
  double nu = 0.05;
  int Nr = 32;
  int Nz = 32;
  // time
  double dt = 1e-3;
  double cfl = 0.0;  // > 0 selects adaptive steps min(cfl_dt, dt_max)
  double dt_max = 1e-2;
  double t_end = 0.1;
  // scheme
  std::string scheme = "explicit-advection";
  std::string advection = "skew";
  double picard_tol = 1e-10;
  int picard_max = 20;
  // initial condition: zero | rigid-rotation | axial-flow | bessel | vortex | manufactured | snapshot
  std::string initial = "rigid-rotation";
  double amplitude = 1.0;
  std::string snapshot;
  // monitor
  int record_every = 1;
  int holder_window = 10;
  int holder_cap = 64;
  int holder_every = 1;
  double r0 = 0.0;  // 0 selects r0 from the initial Hoelder norm
  double c_mult = 1.0;
  double c0 = 1.0;
  // continuation
  double c_star = 1.0;
  bool calibrate = false;
  int K = 5;
  double T_max = 1.0;
  double calibration_horizon = 0.5;
  // output
  std::string out_dir = "out";

  void validate() const {
    CylinderDomain{R, a, nu}.validate();
    if (Nr < 8 || Nz < 8) throw config_error("Nr and Nz must be at least 8");
    if (!(t_end >= 0.0)) throw config_error("t_end must be non-negative");
    if (cfl < 0.0) throw config_error("cfl must be non-negative");
    step_config().validate();
    static const std::set<std::string> ics = {"zero",   "rigid-rotation", "axial-flow", "bessel",
                                              "vortex", "manufactured",   "snapshot"};
    if (!ics.count(initial)) throw config_error("unknown initial condition '" + initial + "'");
    if ((initial == "snapshot") != !snapshot.empty())
      throw config_error("give exactly one initial-condition source: initial=snapshot with a snapshot path, "
                         "or a named initial condition without one");
    if (record_every < 1) throw config_error("record_every must be at least 1");
    if (holder_window < 1) throw config_error("holder_window must be at least 1");
    if (holder_cap < 2) throw config_error("holder_cap must be at least 2");
    if (holder_every < 1) throw config_error("holder_every must be at least 1");
    if (r0 < 0.0) throw config_error("r0 must be non-negative");
    if (!(c_mult >= 1.0)) throw config_error("c_mult must be at least 1");
    if (!(c0 >= 1.0)) throw config_error("c0 must be at least 1");
    if (!(c_star > 0.0)) throw config_error("c_star must be positive");
    if (K < 1) throw config_error("K must be at least 1");
    if (!(T_max > 0.0)) throw config_error("T_max must be positive");
    if (!(calibration_horizon > 0.0)) throw config_error("calibration_horizon must be positive");
    if (out_dir.empty()) throw config_error("out_dir must not be empty");
  }

  CylinderDomain domain() const { return {R, a, nu}; }

  StepConfig step_config() const {
    StepConfig s;
    s.dt = dt;
    s.cfl = cfl > 0.0 ? cfl : 0.5;
    s.dt_max = dt_max;
    s.picard_tol = picard_tol;
    s.picard_max = picard_max;
    s.scheme = parse_scheme(scheme);
    if (advection == "skew")
      s.advection = AdvectionForm::Skew;
    else if (advection == "centered")
      s.advection = AdvectionForm::Centered;
    else
      throw config_error("unknown advection form '" + advection + "'");
    return s;
  }
};

#define AXISYM_CONFIG_FIELDS(X)                                                                       \
  X(R) X(a) X(nu) X(Nr) X(Nz) X(dt) X(cfl) X(dt_max) X(t_end) X(scheme) X(advection) X(picard_tol)   \
  X(picard_max) X(initial) X(amplitude) X(snapshot) X(record_every) X(holder_window) X(holder_cap)   \
  X(holder_every) X(r0) X(c_mult) X(c0) X(c_star) X(calibrate) X(K) X(T_max) X(calibration_horizon) \
  X(out_dir)

inline nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
#define X(f) j[#f] = c.f;
  AXISYM_CONFIG_FIELDS(X)
#undef X
  return j;
}

/// Overlay the keys present in j onto base. Unknown keys and type mismatches
/// are configuration errors.
inline RunConfig apply_json(const nlohmann::json& j, RunConfig base = {}) {
  if (!j.is_object()) throw config_error("config must be a JSON object");
  static const std::set<std::string> known = {
#define X(f) #f,
      AXISYM_CONFIG_FIELDS(X)
#undef X
  };
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw config_error("unknown config key '" + key + "'");
  try {
#define X(f) \
  if (j.contains(#f)) j.at(#f).get_to(base.f);
    AXISYM_CONFIG_FIELDS(X)
#undef X
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  return base;
}

inline RunConfig load_config(const std::string& path, RunConfig base = {}) {
  std::ifstream is(path);
  if (!is) throw config_error("cannot open config: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is, nullptr, true, true);
  } catch (const nlohmann::json::exception& e) {
    throw config_error("config " + path + ": " + e.what());
  }
  return apply_json(j, std::move(base));
}

}  // namespace axisym
