#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "axisym/solvers.hpp"

using namespace axisym;
constexpr double pi = std::numbers::pi;

namespace {

Field2D random_field(const Grid& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  Field2D f = g.make_field();
  for (double& x : f.raw()) x = U(rng);
  return f;
}

VelocityField smooth_random(const Grid& g) {
  auto v = VelocityField::zeros(g);
  v.v_r = sample(g, [](double r, double z) { return r * (1 - r * r) * (std::sin(pi * z) + 0.3 * std::cos(2 * pi * z)); });
  v.v_z = sample(g, [](double r, double z) { return std::cos(pi * r) * (1 + 0.5 * std::sin(pi * z)) + r; });
  v.v_phi = sample(g, [](double r, double) { return r * (1 - r); });
  return v;
}

}  // namespace

TEST(Helmholtz, InvertsImplicitOperator) {
  const Grid g = build_grid({1.0, 1.0, 1.0}, 16, 12);
  const double alpha = 0.05;
  for (auto [bc, kappa] : {std::pair{ScalarBc::v_r(), 1.0}, std::pair{ScalarBc::v_phi(1.0), 1.0},
                           std::pair{ScalarBc::v_z(), 0.0}}) {
    const HelmholtzSolver s(g, bc, alpha, kappa);
    const Field2D b = random_field(g, 3);
    const Field2D x = s.solve(b);
    Field2D lx = kappa > 0 ? vector_laplacian(g, x, bc) : laplacian_axisym(g, x, bc);
    Field2D res = x;
    res.axpy(-alpha, lx);
    EXPECT_LT((res - b).max_abs(), 1e-11);
  }
}

TEST(Helmholtz, RejectsExtrapolatedWall) {
  const Grid g = build_grid({1.0, 1.0, 1.0}, 8, 8);
  EXPECT_THROW(HelmholtzSolver(g, ScalarBc::pressure(), 0.1, 0.0), config_error);
}

TEST(Projection, RemovesDivergence) {
  const Grid g = build_grid({1.0, 1.0, 1.0}, 32, 32);
  auto v = smooth_random(g);
  v.v_r = random_field(g, 11);
  v.v_z = random_field(g, 12);
  const auto res = project_divergence_free(g, v);
  EXPECT_GT(res.div_before, 1.0);
  EXPECT_LT(res.div_after, 1e-8 * res.div_before);
  EXPECT_EQ((res.v.v_phi - v.v_phi).max_abs(), 0.0);
}

TEST(Projection, IsIdempotent) {
  const Grid g = build_grid({1.0, 1.0, 1.0}, 24, 16);
  const ProjectionSolver s(g);
  const auto once = project_divergence_free(g, s, smooth_random(g)).v;
  const auto twice = project_divergence_free(g, s, once).v;
  const double scale = once.v_r.max_abs() + once.v_z.max_abs();
  EXPECT_LT((twice.v_r - once.v_r).max_abs(), 1e-10 * scale);
  EXPECT_LT((twice.v_z - once.v_z).max_abs(), 1e-10 * scale);
}

TEST(Projection, DiscreteGradientProjectsToZero) {
  const Grid g = build_grid({1.0, 1.0, 1.0}, 20, 16);
  const Field2D psi = sample(g, [](double r, double z) { return r * r * std::sin(pi * z) + std::cos(r); });
  auto v = VelocityField::zeros(g);
  v.v_r = adjoint_ddr(g, psi);
  v.v_z = ddz(g, psi);
  const auto out = project_divergence_free(g, v).v;
  const double scale = v.v_r.max_abs() + v.v_z.max_abs();
  EXPECT_LT(out.v_r.max_abs(), 1e-10 * scale);
  EXPECT_LT(out.v_z.max_abs(), 1e-10 * scale);
}

TEST(Projection, OrthogonalInWeightedInnerProduct) {
  const Grid g = build_grid({1.0, 1.0, 1.0}, 16, 16);
  auto v = VelocityField::zeros(g);
  v.v_r = random_field(g, 21);
  v.v_z = random_field(g, 22);
  const auto res = project_divergence_free(g, v);
  const Field2D gr = v.v_r - res.v.v_r, gz = v.v_z - res.v.v_z;
  const double cross = r_weighted_dot(g, gr, res.v.v_r) + r_weighted_dot(g, gz, res.v.v_z);
  EXPECT_NEAR(cross, 0.0, 1e-10);
  // projection never increases energy
  EXPECT_LE(l2_norm_sq(g, res.v), l2_norm_sq(g, v) + 1e-12);
}

TEST(BandedMatrix, ZeroPivotIsNumericalError) {
  BandedMatrix m(3, 1);
  m.at(1, 1) = 1.0;
  m.at(2, 2) = 1.0;
  EXPECT_THROW(m.factor(), numerical_error);
}
