#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "axisym/axisym.hpp"

using namespace axisym;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("axisym_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::istringstream is(slurp(p));
  std::string line;
  std::vector<std::vector<std::string>> rows;
  std::getline(is, line);  // version
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST(Snapshot, RoundTripIsBitExact) {
  const Grid g = build_grid({1.5, 0.7, 0.02}, 12, 10);
  VelocityField v = test_vortex(g);
  v.p = sample(g, [](double r, double z) { return std::sin(r + 3 * z) / 3.0; });
  v.t = 0.123456789;
  std::stringstream ss;
  write_snapshot(ss, g, v);
  const std::string bytes = ss.str();
  EXPECT_EQ(bytes.size(), 8u + 4 + 4 + 3 * 8 + 2 * 8 + 8 + 4 * 8 * g.cells());
  EXPECT_EQ(bytes.substr(0, 8), "AXSNAP01");
  EXPECT_EQ(bytes[8], 1);  // version, little-endian
  EXPECT_EQ(bytes[9], 0);
  const Snapshot s = read_snapshot(ss);
  EXPECT_EQ(s.nr, 12);
  EXPECT_EQ(s.nz, 10);
  EXPECT_EQ(s.domain.R, 1.5);
  EXPECT_EQ(s.domain.a, 0.7);
  EXPECT_EQ(s.domain.nu, 0.02);
  EXPECT_EQ(s.state.t, v.t);
  EXPECT_EQ(s.state.v_r.raw(), v.v_r.raw());
  EXPECT_EQ(s.state.v_phi.raw(), v.v_phi.raw());
  EXPECT_EQ(s.state.v_z.raw(), v.v_z.raw());
  EXPECT_EQ(s.state.p.raw(), v.p.raw());
}

TEST(Snapshot, RejectsCorruptInput) {
  std::stringstream bad("NOTASNAP........");
  EXPECT_THROW(read_snapshot(bad), config_error);
  const Grid g = build_grid({1.0, 1.0, 0.1}, 8, 8);
  std::stringstream ss;
  write_snapshot(ss, g, VelocityField::zeros(g));
  std::stringstream cut(ss.str().substr(0, 100));
  EXPECT_THROW(read_snapshot(cut), config_error);
  EXPECT_THROW(read_snapshot("/nonexistent/x.snap"), config_error);
}

TEST(Config, JsonOverlayAndValidation) {
  RunConfig c = apply_json(nlohmann::json::parse(R"({"Nr": 48, "nu": 0.01, "initial": "bessel"})"));
  EXPECT_EQ(c.Nr, 48);
  EXPECT_EQ(c.Nz, 32);
  EXPECT_EQ(c.nu, 0.01);
  EXPECT_NO_THROW(c.validate());
  EXPECT_THROW(apply_json(nlohmann::json::parse(R"({"Nrr": 4})")), config_error);
  EXPECT_THROW(apply_json(nlohmann::json::parse(R"({"Nr": "many"})")), config_error);
  RunConfig bad = c;
  bad.c_mult = 0.5;
  EXPECT_THROW(bad.validate(), config_error);
  bad = c;
  bad.snapshot = "x.snap";
  EXPECT_THROW(bad.validate(), config_error);
  bad = c;
  bad.initial = "snapshot";
  EXPECT_THROW(bad.validate(), config_error);
  bad = c;
  bad.scheme = "rk4";
  EXPECT_THROW(bad.validate(), config_error);
  // to_json and back is the identity
  const RunConfig back = apply_json(nlohmann::json::parse(to_json(c).dump()));
  EXPECT_EQ(to_json(back).dump(), to_json(c).dump());
}

TEST(Runner, RigidRotationKeepsL2Constant) {
  RunConfig c;
  c.initial = "rigid-rotation";
  c.Nr = c.Nz = 16;
  c.t_end = 0.1;
  c.dt = 1e-3;
  c.out_dir = scratch("rigid").string();
  const RunOutcome out = run_simulate(c);
  EXPECT_EQ(out.code, exit_ok);
  const auto rows = csv_rows(fs::path(c.out_dir) / "diagnostics.csv");
  ASSERT_EQ(rows.size(), 101u);
  const double l0 = std::stod(rows.front()[1]);
  for (const auto& r : rows) EXPECT_NEAR(std::stod(r[1]), l0, 1e-10 * l0);
  EXPECT_DOUBLE_EQ(std::stod(rows.back()[0]), 0.1);
  EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "final.snap"));
  EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "summary.txt"));
}

TEST(Runner, ZeroDataGivesZeroDiagnostics) {
  RunConfig c;
  c.initial = "zero";
  c.Nr = c.Nz = 8;
  c.t_end = 0.01;
  c.out_dir = scratch("zero").string();
  EXPECT_EQ(run_simulate(c).code, exit_ok);
  for (const auto& r : csv_rows(fs::path(c.out_dir) / "diagnostics.csv"))
    for (std::size_t i = 1; i < r.size(); ++i)
      if (i != 14 && i != 15) EXPECT_EQ(r[i], "0") << "column " << i;  // holder_u may be 0, korn undefined
}

TEST(Runner, RepeatedRunsAreByteIdentical) {
  RunConfig c;
  c.initial = "vortex";
  c.Nr = c.Nz = 16;
  c.t_end = 0.02;
  c.scheme = "picard-implicit";
  c.out_dir = scratch("det1").string();
  run_simulate(c);
  RunConfig d = c;
  d.out_dir = scratch("det2").string();
  run_simulate(d);
  for (const char* f : {"diagnostics.csv", "final.snap"})
    EXPECT_EQ(slurp(fs::path(c.out_dir) / f), slurp(fs::path(d.out_dir) / f)) << f;
}

TEST(Runner, SnapshotRestartContinues) {
  RunConfig c;
  c.initial = "vortex";
  c.Nr = c.Nz = 16;
  c.t_end = 0.02;
  c.out_dir = scratch("restart_a").string();
  run_simulate(c);
  RunConfig r = c;
  r.initial = "snapshot";
  r.snapshot = (fs::path(c.out_dir) / "final.snap").string();
  r.t_end = 0.01;
  r.out_dir = scratch("restart_b").string();
  EXPECT_EQ(run_simulate(r).code, exit_ok);
  const auto rows = csv_rows(fs::path(r.out_dir) / "diagnostics.csv");
  EXPECT_DOUBLE_EQ(std::stod(rows.front()[0]), 0.02);
  EXPECT_NEAR(std::stod(rows.back()[0]), 0.03, 1e-15);
}

TEST(Runner, SolverFailureExitsThreeWithArtifacts) {
  RunConfig c;
  c.initial = "vortex";
  c.Nr = c.Nz = 16;
  c.scheme = "picard-implicit";
  c.picard_max = 1;
  c.picard_tol = 1e-14;
  c.dt = 0.01;
  c.out_dir = scratch("fail").string();
  const RunOutcome out = run_simulate(c);
  EXPECT_EQ(out.code, exit_numerical);
  EXPECT_NE(out.summary.find("failure: picard"), std::string::npos);
  EXPECT_TRUE(fs::exists(fs::path(c.out_dir) / "final.snap"));
  EXPECT_EQ(csv_rows(fs::path(c.out_dir) / "diagnostics.csv").size(), 1u);
}

TEST(Runner, ContinuationCertificates) {
  RunConfig c;
  c.initial = "bessel";
  c.Nr = 32;
  c.Nz = 8;
  c.K = 4;
  c.dt = 5e-3;
  c.out_dir = scratch("cont_bessel").string();
  RunOutcome out = run_continuation(c);
  EXPECT_EQ(out.code, exit_ok);
  EXPECT_NE(out.summary.find("all_passed: true"), std::string::npos);
  EXPECT_NE(out.summary.find("[segment 3]"), std::string::npos);

  c.initial = "zero";
  c.T_max = 0.01;
  c.K = 2;
  c.out_dir = scratch("cont_zero").string();
  out = run_continuation(c);
  EXPECT_NE(out.summary.find("T_seg: 0.01\n"), std::string::npos);
  EXPECT_NE(out.summary.find("all_passed: true"), std::string::npos);
}

TEST(Runner, NormsOfSnapshot) {
  RunConfig c;
  c.initial = "rigid-rotation";
  c.Nr = c.Nz = 16;
  c.t_end = 0.0;
  c.out_dir = scratch("norms").string();
  run_simulate(c);
  const RunOutcome out = run_norms((fs::path(c.out_dir) / "final.snap").string(), RunConfig{});
  EXPECT_EQ(out.code, exit_ok);
  EXPECT_NE(out.summary.find("[ledger]"), std::string::npos);
  EXPECT_NE(out.summary.find("l2_nonincreasing: pass"), std::string::npos);
}

TEST(Verify, SmallSuitePasses) {
  const VerifyReport r = run_verify_suite(16);
  std::ostringstream os;
  write_verify_report(os, r);
  EXPECT_TRUE(r.all_passed()) << os.str();
  EXPECT_NE(os.str().find("relaxed tolerance"), std::string::npos);
}

TEST(Verify, BrokenStencilIsCaught) {
  // drop the curvature weighting: a plain Cartesian second difference in r
  const LaplacianFn broken = [](const Grid& g, const Field2D& f, ScalarBc bc) {
    return d2dr2(g, f, bc) + d2dz2(g, f);
  };
  const VerifyReport r = run_verify_suite(16, broken);
  EXPECT_FALSE(r.all_passed());
  for (const auto& i : r.items)
    if (i.name == "laplacian_interior_order") EXPECT_FALSE(i.passed);
}
