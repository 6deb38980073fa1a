#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "axisym/continuation.hpp"
#include "axisym/oracles.hpp"

using namespace axisym;
constexpr double pi = std::numbers::pi;

TEST(ComputeT, Algebra) {
  EXPECT_DOUBLE_EQ(compute_T(1.0, 1.0, 10.0), 1.0);
  EXPECT_DOUBLE_EQ(compute_T(2.0, 1.0, 10.0), 0.25);
  EXPECT_DOUBLE_EQ(compute_T(0.0, 1.0, 7.0), 7.0);
  EXPECT_DOUBLE_EQ(compute_T(0.1, 1.0, 7.0), 7.0);
  for (double a : {0.3, 1.7, 5.0})
    for (double c : {0.5, 2.0}) {
      const double T = compute_T(a, c, 1e9);
      EXPECT_NEAR(c * std::sqrt(T) * a, 1.0, 1e-14);
      EXPECT_LT(compute_T(1.1 * a, c, 1e9), T);
      EXPECT_LT(compute_T(a, 1.1 * c, 1e9), T);
    }
  EXPECT_THROW(compute_T(1.0, 0.0, 1.0), config_error);
  EXPECT_THROW(compute_T(-1.0, 1.0, 1.0), config_error);
}

TEST(ComputeT, RigidRotationLedger) {
  const CylinderDomain d{1.0, 1.0, 0.05};
  const Grid g = build_grid(d, 32, 32);
  const VelocityField v = sample_state(g, rigid_rotation(d, 1.0), 0.0);
  const Monitor m(g, MonitorConfig{}, v);
  const double a = m.ledger().alpha;
  EXPECT_DOUBLE_EQ(compute_T(a, 1.0, 1e9), 1.0 / (a * a));
}

TEST(Segments, RigidRotationAllPass) {
  const CylinderDomain d{1.0, 1.0, 0.05};
  const Grid g = build_grid(d, 32, 32);
  Stepper st(g, StepConfig{});
  const VelocityField v0 = sample_state(g, rigid_rotation(d, 1.0), 0.0);
  Monitor m(g, MonitorConfig{}, v0);
  const ContinuationPlan plan = make_plan(m.ledger().alpha, 1.0, 5, 1e9);
  EXPECT_NEAR(plan.T_seg, 1.0 / (plan.alpha * plan.alpha), 1e-15);
  const auto res = run_segments(st, m, v0, plan);
  ASSERT_EQ(res.segments.size(), 5u);
  EXPECT_TRUE(res.all_passed());
  const double h0 = m.records().front().h1_v;
  EXPECT_NEAR(h0, std::sqrt(5 * pi), 1e-3);
  for (const auto& s : res.segments) EXPECT_NEAR(s.h1_at_boundary, h0, 1e-10 * h0);
  EXPECT_NEAR(res.final_state.t, plan.total_time(), 1e-14);
}

TEST(Segments, ZeroDataTriviallyPasses) {
  const Grid g = build_grid({1.0, 1.0, 0.05}, 16, 16);
  Stepper st(g, StepConfig{});
  const VelocityField v0 = VelocityField::zeros(g);
  Monitor m(g, MonitorConfig{}, v0);
  const auto plan = make_plan(m.ledger().alpha, 1.0, 3, 0.02);
  EXPECT_DOUBLE_EQ(plan.T_seg, 0.02);
  const auto res = run_segments(st, m, v0, plan);
  ASSERT_EQ(res.segments.size(), 3u);
  for (const auto& s : res.segments) {
    EXPECT_EQ(s.h1_at_boundary, 0.0);
    EXPECT_TRUE(s.passed);
  }
}

TEST(Segments, BesselBoundaryNormsDecrease) {
  const CylinderDomain d{1.0, 1.0, 0.05};
  const Grid g = build_grid(d, 32, 8);
  StepConfig cfg;
  cfg.dt = 5e-3;
  Stepper st(g, cfg);
  const VelocityField v0 = sample_state(g, bessel_swirl_mode(d).solution, 0.0);
  Monitor m(g, MonitorConfig{}, v0);
  const auto res = run_segments(st, m, v0, make_plan(m.ledger().alpha, 1.0, 4, 1e9));
  ASSERT_EQ(res.segments.size(), 4u);
  EXPECT_TRUE(res.all_passed());
  EXPECT_LT(res.segments[0].h1_at_boundary, m.records().front().h1_v);
  for (int k = 1; k < 4; ++k) EXPECT_LT(res.segments[k].h1_at_boundary, res.segments[k - 1].h1_at_boundary);
  for (const auto& s : res.segments) EXPECT_GT(s.w21_proxy, 0.0);
}

TEST(Segments, ChainingMatchesMonolithic) {
  const CylinderDomain d{1.0, 1.0, 0.05};
  const Grid g = build_grid(d, 24, 24);
  StepConfig cfg;
  cfg.scheme = Scheme::PicardImplicit;
  cfg.dt = 2e-3;
  const VelocityField v0 = test_vortex(g);
  ContinuationPlan plan{1.0, 1.0, 0.01, 3};
  Stepper a(g, cfg), b(g, cfg);
  Monitor m(g, MonitorConfig{}, v0);
  const VelocityField chained = run_segments(a, m, v0, plan).final_state;
  const VelocityField mono = run_monolithic(b, v0, plan);
  const double diff = std::max({(chained.v_r - mono.v_r).max_abs(), (chained.v_phi - mono.v_phi).max_abs(),
                                (chained.v_z - mono.v_z).max_abs()});
  EXPECT_LE(diff, 10 * cfg.picard_tol);
}

TEST(Segments, SolverFailureGivesPartialReport) {
  const Grid g = build_grid({1.0, 1.0, 0.05}, 16, 16);
  StepConfig cfg;
  cfg.scheme = Scheme::PicardImplicit;
  cfg.picard_max = 1;
  cfg.picard_tol = 1e-14;
  cfg.dt = 0.01;
  Stepper st(g, cfg);
  const VelocityField v0 = test_vortex(g);
  Monitor m(g, MonitorConfig{}, v0);
  const auto res = run_segments(st, m, v0, ContinuationPlan{1.0, 1.0, 0.05, 3});
  ASSERT_EQ(res.segments.size(), 1u);
  EXPECT_TRUE(res.segments[0].failed);
  EXPECT_FALSE(res.all_passed());
  EXPECT_GT(res.segments[0].failure_residual, 0.0);
}

TEST(CStar, DecayingModesGiveFloor) {
  const CylinderDomain d{1.0, 1.0, 0.05};
  const Grid g = build_grid(d, 32, 8);
  StepConfig cfg;
  cfg.dt = 1e-2;
  std::vector<CalibrationRun> runs;
  for (double amp : {0.5, 1.0}) {
    Stepper st(g, cfg);
    runs.push_back(calibration_run("bessel", st, sample_state(g, bessel_swirl_mode(d, amp).solution, 0.0), 0.5));
  }
  EXPECT_DOUBLE_EQ(estimate_c_star(runs).c_star, 1e-3);
  EXPECT_THROW(estimate_c_star({runs[0]}), config_error);
}

TEST(CStar, GrowthForcesShorterSegments) {
  CalibrationRun grow{"grow", 1.0, {}, {}};
  for (int i = 0; i <= 300; ++i) {
    grow.t.push_back(0.01 * i);
    grow.h1.push_back(0.5 + 0.01 * i);
  }
  CalibrationRun flat{"flat", 1.0, {0.0, 1.0}, {0.5, 0.5}};
  // h1(T) <= 1 needs T <= 0.5, i.e. c >= sqrt(2)
  const double c = estimate_c_star({grow, flat}).c_star;
  EXPECT_GE(c, std::sqrt(2.0));
  EXPECT_LE(c, 1.1 * std::sqrt(2.0));
  CalibrationRun blow{"blow", 1.0, {0.0, 1e-12}, {0.5, 5.0}};
  EXPECT_THROW(estimate_c_star({blow, flat}), numerical_error);
}
