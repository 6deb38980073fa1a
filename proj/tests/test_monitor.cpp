#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "axisym/monitor.hpp"
#include "axisym/oracles.hpp"

using namespace axisym;
constexpr double pi = std::numbers::pi;

namespace {

NormRecord record_of(const Grid& g, const VelocityField& v, double r0 = 0.25) {
  return compute_record(g, v, derive(g, v), CutoffFamily{r0}, nullptr);
}

}  // namespace

TEST(Record, ZeroField) {
  const Grid g = build_grid({1.0, 1.0, 0.1}, 16, 16);
  const NormRecord r = record_of(g, VelocityField::zeros(g));
  EXPECT_EQ(r.l2_v, 0.0);
  EXPECT_EQ(r.h1_v, 0.0);
  EXPECT_EQ(r.energy_E, 0.0);
  EXPECT_EQ(r.swirl_max, 0.0);
  EXPECT_TRUE(std::isnan(r.korn_ratio));
}

TEST(Record, RigidRotation) {
  const CylinderDomain d{1.0, 1.0, 0.1};
  const Grid g = build_grid(d, 64, 64);
  const NormRecord r = record_of(g, sample_state(g, rigid_rotation(d, 1.0), 0.0));
  EXPECT_NEAR(r.l2_v * r.l2_v, pi, 1e-3);
  EXPECT_NEAR(r.swirl_mean, pi, 1e-3);
  EXPECT_NEAR(r.h1_v * r.h1_v, 5 * pi, 1e-3);
  EXPECT_LT(r.energy_E, 1e-20);
  EXPECT_NEAR(r.korn_ratio, 5 / pi, 1e-3);
  EXPECT_NEAR(r.w_vphi_over_r * r.w_vphi_over_r, 2 * pi, 1e-12);
}

TEST(Record, SwirlFree) {
  const Grid g = build_grid({1.0, 1.0, 0.05}, 16, 16);
  const NormRecord r = record_of(g, test_vortex(g, 0.5, 0.0));
  EXPECT_EQ(r.swirl_mean, 0.0);
  EXPECT_EQ(r.w_vphi_over_r, 0.0);
  EXPECT_GT(r.w_chi_over_r, 0.0);
}

TEST(Korn, ScaleInvariantWithoutRotationMoment) {
  const Grid g = build_grid({1.0, 1.0, 0.05}, 24, 24);
  VelocityField v = test_vortex(g, 0.5, 0.0);
  const double k1 = korn_ratio(g, v);
  v.v_r *= 3.0;
  v.v_z *= 3.0;
  EXPECT_NEAR(korn_ratio(g, v) / k1, 1.0, 1e-12);
}

TEST(Holder, ConstantIsZero) {
  const Grid g = build_grid({1.0, 1.0, 0.1}, 16, 16);
  Field2D u = g.make_field();
  u.fill(2.5);
  EXPECT_EQ(holder_seminorm_u(g, 0.5, {0.0, 0.1}, {u, u}), 0.0);
  EXPECT_THROW(holder_seminorm_u(g, 0.5, {}, {}), config_error);
}

TEST(Holder, StaticQuadraticMatchesExhaustive) {
  const Grid g = build_grid({1.0, 1.0, 0.1}, 16, 16);
  const Field2D u = sample(g, [](double r, double) { return r * r; });
  const double exact = holder_seminorm_exhaustive(g, 0.5, {0.0}, {u});
  EXPECT_GT(exact, 0.0);
  EXPECT_DOUBLE_EQ(holder_seminorm_u(g, 0.5, {0.0}, {u}), exact);
  // a genuinely decimated lattice stays within 10% below the exhaustive value
  const double dec = holder_seminorm_u(g, 0.5, {0.0}, {u}, 8);
  EXPECT_LE(dec, exact);
  EXPECT_GE(dec, 0.9 * exact);
}

TEST(Holder, TimeDependentWindowMatchesExhaustive) {
  const Grid g = build_grid({1.0, 1.0, 0.1}, 16, 16);
  std::vector<double> ts;
  std::vector<Field2D> us;
  for (int i = 0; i < 6; ++i) {
    const double t = 0.05 * i;
    ts.push_back(t);
    us.push_back(sample(g, [t](double r, double z) { return r * r * (1 + std::sin(4 * t) * std::cos(pi * z)); }));
  }
  // window of 2 intervals keeps the last three snapshots
  HolderWindow w(g, 0.5, 2);
  for (std::size_t i = 0; i < ts.size(); ++i) w.push(ts[i], us[i]);
  EXPECT_EQ(w.snapshots(), 3u);
  const std::vector<double> t3(ts.end() - 3, ts.end());
  const std::vector<Field2D> u3(us.end() - 3, us.end());
  EXPECT_NEAR(w.value(), holder_seminorm_exhaustive(g, 0.5, t3, u3), 1e-14);
  const double dec = holder_seminorm_u(g, 0.5, t3, u3, 8);
  EXPECT_GE(dec, 0.9 * w.value());
  EXPECT_LE(dec, w.value());
}

TEST(Holder, ThresholdFlag) {
  const double thr = default_axis_threshold(0.1);
  EXPECT_TRUE(holder_small(0.99 * thr, 1.0, thr));
  EXPECT_FALSE(holder_small(1.01 * thr, 1.0, thr));
  EXPECT_TRUE(holder_small(1.9 * thr, 0.25, thr));
}

TEST(Alpha, RigidRotationAndHomogeneity) {
  const CylinderDomain d{1.0, 1.0, 0.1};
  const Grid g = build_grid(d, 64, 64);
  VelocityField v = sample_state(g, rigid_rotation(d, 1.0), 0.0);
  const double expected = std::sqrt(5 * pi) + std::pow(pi, 0.25) + std::cbrt(2 * pi);
  const double a = alpha_from_initial(g, v, derive(g, v), 1.0);
  EXPECT_NEAR(a, expected, 1e-3);
  EXPECT_NEAR(alpha_from_initial(g, v, derive(g, v), 2.0), 2 * a, 1e-12);
  v.v_phi *= 2.0;
  EXPECT_NEAR(alpha_from_initial(g, v, derive(g, v), 1.0), 2 * a, 1e-12 * a);
  const VelocityField z = VelocityField::zeros(g);
  EXPECT_EQ(alpha_from_initial(g, z, derive(g, z), 1.0), 0.0);
  EXPECT_THROW(alpha_from_initial(g, z, derive(g, z), 0.5), config_error);
}

TEST(Inequalities, AdversarialRecordFails) {
  ConstantsLedger L;
  L.l2_0 = 1.0;
  L.d1 = 1.0;
  NormRecord r;
  r.l2_v = 1.5;
  const auto checks = check_inequalities(r, L);
  const auto it = std::find_if(checks.begin(), checks.end(), [](const auto& c) { return c.name == "l2_le_d1"; });
  ASSERT_NE(it, checks.end());
  EXPECT_FALSE(it->passed);
  EXPECT_LT(it->margin(), 0.0);
}

TEST(Monitor, RigidRotationSteady) {
  const CylinderDomain d{1.0, 1.0, 0.05};
  const Grid g = build_grid(d, 32, 32);
  Stepper st(g, StepConfig{});
  VelocityField v = sample_state(g, rigid_rotation(d, 1.0), 0.0);
  MonitorConfig mc;
  mc.r0 = 0.25;
  Monitor m(g, mc, v);
  for (int n = 0; n < 20; ++n) {
    v = st.step(v);
    m.observe(v);
  }
  for (const auto& c : m.worst()) {
    if (c.kind != CheckKind::Bound) continue;
    EXPECT_TRUE(c.passed) << c.name << " lhs " << c.lhs << " rhs " << c.rhs;
    if (c.name == "l2_nonincreasing") EXPECT_NEAR(c.margin(), 0.0, 1e-11);
  }
  EXPECT_NEAR(m.records().back().swirl_mean, m.records().front().swirl_mean, 1e-13);
}

TEST(Monitor, BesselModeDecaysAndAccumulates) {
  const CylinderDomain d{1.0, 1.0, 0.05};
  const Grid g = build_grid(d, 32, 16);
  StepConfig cfg;
  cfg.dt = 5e-3;
  Stepper st(g, cfg);
  VelocityField v = sample_state(g, bessel_swirl_mode(d).solution, 0.0);
  Monitor m(g, MonitorConfig{}, v);
  for (int n = 0; n < 20; ++n) {
    v = st.step(v);
    m.observe(v);
  }
  const auto& rs = m.records();
  for (std::size_t i = 1; i < rs.size(); ++i) {
    EXPECT_LT(rs[i].l2_v, rs[i - 1].l2_v);
    EXPECT_GE(rs[i].l4_vphi_acc, rs[i - 1].l4_vphi_acc);
    EXPECT_GE(rs[i].omega_l3_acc, rs[i - 1].omega_l3_acc);
    EXPECT_GE(rs[i].w21_proxy, rs[i - 1].w21_proxy);
    EXPECT_GE(rs[i].localized_v1, rs[i - 1].localized_v1);
  }
  for (const auto& c : m.worst())
    if (c.name == "l4_swirl_pointwise") EXPECT_GT(c.margin(), 0.0);
  EXPECT_GE(m.ledger().alpha, rs.front().h1_v);
}

TEST(Monitor, SegmentResetsAccumulators) {
  const CylinderDomain d{1.0, 1.0, 0.05};
  const Grid g = build_grid(d, 16, 16);
  Stepper st(g, StepConfig{});
  VelocityField v = test_vortex(g);
  Monitor m(g, MonitorConfig{}, v);
  for (int n = 0; n < 5; ++n) m.observe(v = st.step(v));
  const double acc = m.records().back().acc.vphi4;
  EXPECT_GT(acc, 0.0);
  const NormRecord& r = m.begin_segment(v);
  EXPECT_EQ(r.acc.vphi4, 0.0);
  EXPECT_EQ(r.l2_v, m.records()[m.records().size() - 2].l2_v);
}

TEST(Csv, HeaderAndRowsAreStable) {
  const CylinderDomain d{1.0, 1.0, 0.05};
  const Grid g = build_grid(d, 16, 16);
  auto run = [&] {
    Stepper st(g, StepConfig{});
    VelocityField v = test_vortex(g);
    Monitor m(g, MonitorConfig{}, v);
    for (int n = 0; n < 3; ++n) m.observe(v = st.step(v));
    std::ostringstream os;
    write_csv_header(os);
    for (const auto& r : m.records()) write_csv_row(os, r);
    return os.str();
  };
  const std::string a = run();
  EXPECT_EQ(a, run());
  std::istringstream is(a);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, std::string("# ") + csv_version);
  std::getline(is, line);
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 19);
  EXPECT_EQ(line.substr(0, 7), "t,l2_v,");
}
