#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "plateau/boundary_system.hpp"
#include "plateau/elastica.hpp"

using namespace plateau;
using namespace plateau::boundary;

TEST(BoundaryIntegrate, ZeroTorsionReducesToElastica) {
  EnergyParams p{1, 0.7, 1, 3};
  auto tr = boundary_integrate(p, {0, 0.9, 0.1, 0.0}, 50, 1e-3);
  EnergyParams q = p;
  auto el = elastica::elastica_integrate(q, 0.9, 0.1, 50, 1e-3);
  ASSERT_EQ(tr.states.size(), el.samples.size());
  for (std::size_t i = 0; i < el.samples.size(); ++i) {
    ASSERT_NEAR(tr.states[i].kappa_g, el.samples[i].kappa_g, 1e-10);
    ASSERT_EQ(tr.states[i].tau_g, 0.0);
  }
  EXPECT_EQ(tr.c, 0.0);
}

TEST(BoundaryIntegrate, HelicoidBoundaryIsFixedPoint) {
  // a = r = 1: kappa_g = 1/2, tau_g = -1/2. With alpha = beta = eta = 1 the
  // normal equation (-1/4 - 1)/2 - 1/4 + sigma = 0 forces sigma = 7/8.
  EnergyParams p{7.0 / 8, 1, 1, 1};
  auto tr = boundary_integrate(p, {0, 0.5, 0, -0.5}, 100, 1e-3);
  for (const auto& s : tr.states) {
    ASSERT_NEAR(s.kappa_g, 0.5, 1e-12);
    ASSERT_NEAR(s.tau_g, -0.5, 1e-12);
  }
  EXPECT_LE(tr.max_c_drift, 1e-12);
  const auto ti = torsion_invariant(p, tr);
  EXPECT_NEAR(ti.c, -2.0, 1e-12);
  EXPECT_LE(ti.max_drift, 1e-12);
  EXPECT_EQ(classify_branch(p, tr).branch, Branch::generic);
}

TEST(BoundaryIntegrate, GenericRunsConserveAndSatisfyTangentialEquation) {
  int rejected = 0;
  const auto draws = fixtures::generic_boundary_draws(8, 99, 100, 1e-3, &rejected);
  for (const auto& d : draws) {
    const auto ti = torsion_invariant(d.params, d.trajectory);
    EXPECT_LE(ti.relative_drift(), 1e-9);
    EXPECT_NE(ti.c, 0.0);
    const auto r = trajectory_residuals(d.trajectory);
    EXPECT_LE(r.tangential, 1e-8);
    EXPECT_LE(r.normal, 1e-8);
    EXPECT_LE(r.form_mismatch, 1e-12 * std::max(1.0, r.tangential + r.normal));
  }
}

TEST(BoundaryIntegrate, FrenetAndDarbouxFormsAgreeOnBothSheets) {
  EnergyParams p{1.2, -0.8, 0.9, 0.4};
  for (Sheet sh : {Sheet::plus, Sheet::minus}) {
    auto tr = boundary_integrate(p, {0, 0.6, 0.2, 0.3}, 20, 1e-3, sh);
    const auto r = trajectory_residuals(tr);
    EXPECT_NEAR(r.frenet_tangential, r.tangential, 1e-14);
    EXPECT_NEAR(r.frenet_normal, r.normal, 1e-14);
    EXPECT_EQ(r.form_mismatch, 0.0);
  }
  // Pointwise: the Frenet residual is -sheet / +sheet times the Darboux one.
  const double kg = 0.3, kgp = -0.2, kgpp = 0.7, tg = 0.4, tgp = 1.1;
  for (Sheet sh : {Sheet::plus, Sheet::minus}) {
    const double e = sign_of(sh);
    const auto f = frenet_residuals(p, sh, e * kg, e * kgp, e * kgpp, -tg, -tgp);
    EXPECT_NEAR(f.tangential, -e * residual_tangential(p, kg, kgp, tg, tgp), 1e-15);
    EXPECT_NEAR(f.normal, e * residual_normal(p, kg, kgpp, tg), 1e-15);
  }
}

TEST(BoundaryIntegrate, ChartSingularityAndPreconditions) {
  EnergyParams p{1, 1, 1, 0};
  try {
    boundary_integrate(p, {0, 0.0, -5.0, 0.0}, 10, 1e-3);  // c = 0: no barrier
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::chart_singularity);
    EXPECT_GT(e.where(), 0.0);
  }
  EXPECT_THROW(boundary_integrate(p, {0, -0.5, 0, 1}, 1, 1e-3), Error);  // on the chart boundary
  EXPECT_THROW(boundary_integrate({1, 0, 1, 0}, {0, 1, 0, 1}, 1, 1e-3), Error);  // eta = 0
  EXPECT_THROW(boundary_integrate({1, 1, -1, 0}, {0, 1, 0, 1}, 1, 1e-3), Error);  // alpha < 0
}

TEST(BoundaryIntegrate, ZeroConstantDichotomy) {
  // |c| tiny with the chart well open somewhere forces tau_g ~ 0 everywhere.
  EnergyParams p{1, 5, 1, 0};
  auto tr = boundary_integrate(p, {0, -0.8, 0.0, 1e-14}, 50, 1e-3);
  const auto ti = torsion_invariant(p, tr);
  ASSERT_LE(std::abs(ti.c), 1e-12);
  EXPECT_GE(chart_margins(tr).min_chart, 1e-3);
  EXPECT_LE(chart_margins(tr).max_tau_g, 1e-9);
}

TEST(Branch, Classification) {
  EnergyParams p{1, 5, 1, 0};
  auto planar = boundary_integrate(p, {0, -0.8, 0.1, 0.0}, 10, 1e-3);
  EXPECT_EQ(classify_branch(p, planar).branch, Branch::tau_g_zero);

  // alpha = 1, eta = 2, beta = 0 gives sigma = 1 from 8 sigma alpha^2 = eta (eta^2 - 4 alpha beta).
  EnergyParams q{1, 2, 1, 0};
  Trajectory constant;
  constant.params = q;
  for (int i = 0; i <= 100; ++i) constant.states.push_back({0.01 * i, -1.0, 0.0, 0.37});
  const auto tag = classify_branch(q, constant);
  EXPECT_EQ(tag.branch, Branch::const_kg);
  ASSERT_TRUE(tag.param_residual.has_value());
  EXPECT_LE(*tag.param_residual, 1e-12);

  // Both small: ambiguous.
  Trajectory both = constant;
  for (auto& s : both.states) s.tau_g = 0.0;
  EXPECT_THROW(classify_branch(q, both), Error);
}

TEST(AlphaZero, CircleOfRadiusMinusBetaOverSigma) {
  auto a = alpha_zero_solution({1, 1, 0, -2});
  EXPECT_EQ(a.radius, 2.0);
  EXPECT_TRUE(a.valid);
  EXPECT_EQ(a.residual, 0.0);
  EXPECT_FALSE(alpha_zero_solution({1, 1, 0, 1}).valid);
  EXPECT_FALSE(alpha_zero_solution({1, 1, 0, 0}).valid);
  EXPECT_EQ(alpha_zero_solution({2, 1, 0, -1}).radius, 0.5);
  EXPECT_THROW(alpha_zero_solution({1, 1, 1, -1}), Error);
  EXPECT_THROW(alpha_zero_solution({1, 0, 0, -1}), Error);
}
