#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "fixtures.hpp"
#include "plateau/audit/energy.hpp"
#include "plateau/audit/gauss_bonnet.hpp"
#include "plateau/audit/variation.hpp"
#include "plateau/elastica.hpp"

using namespace plateau;
using namespace plateau::audit;

namespace {

double helicoid_area_primitive(double a, double r) {
  return 0.5 * (r * std::sqrt(a * a + r * r) + a * a * std::asinh(r / std::abs(a)));
}

// Curved disk with analytic jets and non-constant tau_g, kappa_n on its rim.
Configuration curved_disk() {
  auto base = std::make_shared<PerturbedPatch>(std::make_shared<geom::DiskPatch>(1.0),
                                               random_trig_field(3, 2, 1, 1.0, 0.4), 1.0);
  return {base, {geom::UvPath::v_line(1.0, 0.0, 2 * pi, true)}, Vec3::Zero(), "curved_disk", 1};
}

}  // namespace

// ---------------------------------------------------------------------------

TEST(Report, PassUsesAbsoluteOrRelativeResidual) {
  AuditReport r;
  r.add("abs", 1.0 + 1e-9, 1.0, 1e-8);
  r.add("rel", 1000.0 + 1e-3, 1000.0, 1e-5, true);
  r.add("rel_fail", 1000.0 + 1e-1, 1000.0, 1e-5, true);
  EXPECT_TRUE(r.at("abs").pass);
  EXPECT_TRUE(r.at("rel").pass);
  EXPECT_FALSE(r.at("rel_fail").pass);
  EXPECT_FALSE(r.all_pass());
  EXPECT_NEAR(r.at("rel").rel_residual, 1e-6, 1e-12);
}

TEST(Report, NanNeverPasses) {
  AuditReport r;
  r.bound("x", std::numeric_limits<double>::quiet_NaN(), 1.0);
  EXPECT_FALSE(r.at("x").pass);
}

TEST(Report, EmptyReportDoesNotPass) { EXPECT_FALSE(AuditReport{}.all_pass()); }

TEST(Report, JsonKeysAreSortedAndStable) {
  AuditReport a, b;
  a.bound("zeta", 0.0, 1.0);
  a.bound("alpha", 0.0, 1.0);
  b.bound("alpha", 0.0, 1.0);
  b.bound("zeta", 0.0, 1.0);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_LT(a.to_json().dump().find("alpha"), a.to_json().dump().find("zeta"));
  EXPECT_NE(a.table().find("pass"), std::string::npos);
}

TEST(Report, MergeAddsPrefix) {
  AuditReport a, b;
  b.flag("ok", true);
  a.merge(b, "sub.");
  EXPECT_TRUE(a.contains("sub.ok"));
  EXPECT_THROW(a.at("ok"), Error);
}

// ---------------------------------------------------------------------------

TEST(Energy, UnitDiskArea) {
  const auto e = energy_terms(disk_configuration(1.0), {1, 0, 0, 0});
  EXPECT_NEAR(e.total, pi, 1e-8);
}

TEST(Energy, UnitDiskWithBending) {
  const auto e = energy_terms(disk_configuration(1.0), {1, 1, 1, 0});
  EXPECT_NEAR(e.total_K, 0.0, 1e-12);
  EXPECT_NEAR(e.bending, 2 * pi, 1e-10);
  EXPECT_NEAR(e.total, 3 * pi, 1e-8);
}

TEST(Energy, EdgeTensionMultipliesLength) {
  const auto e = energy_terms(disk_configuration(2.0), {1, 0, 0, 0.5});
  EXPECT_NEAR(e.length, 4 * pi, 1e-10);
  EXPECT_NEAR(e.bend_term, 0.5 * 4 * pi, 1e-10);
}

TEST(Energy, HelicoidAreaMatchesClosedForm) {
  for (double a : {0.5, 1.0, 2.0}) {
    const auto e = energy_terms(helicoid_configuration(a, 1.0, 2.0), {1, 0, 0, 0});
    const double ref = 2 * pi * (helicoid_area_primitive(a, 2.0) - helicoid_area_primitive(a, 1.0));
    EXPECT_NEAR(e.area, ref, 1e-8) << "a = " << a;
  }
}

TEST(Energy, HelicoidTotalCurvatureMatchesClosedForm) {
  // dA = sqrt(a^2 + r^2) dr dtheta, so int K dA = -2 pi [r / sqrt(a^2 + r^2)] from r0 to r1.
  const double a = 1.0;
  const auto e = energy_terms(helicoid_configuration(a, 1.0, 2.0), {1, 0, 0, 0});
  const double ref = -2 * pi * (2 / std::sqrt(a * a + 4) - 1 / std::sqrt(a * a + 1));
  EXPECT_NEAR(e.total_K, ref, 1e-8);
}

TEST(Energy, SphericalCapTerms) {
  const double t0 = 1.0;
  const auto e = energy_terms(cap_configuration(t0), {1, 1, 1, 0});
  EXPECT_NEAR(e.area, 2 * pi * (1 - std::cos(t0)), 1e-10);
  EXPECT_NEAR(e.total_K, e.area, 1e-10);
  // Small circle of radius sin t0 has Frenet curvature 1 / sin t0.
  EXPECT_NEAR(e.bending, 2 * pi / std::sin(t0), 1e-9);
}

TEST(Energy, OpenBoundaryIsRejected) {
  Configuration c = disk_configuration(1.0);
  c.boundary[0] = geom::UvPath::v_line(1.0, 0.0, pi, false);
  try {
    energy_terms(c, {1, 0, 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition);
  }
}

TEST(Energy, HelicoidWithoutPeriodIsOpen) {
  Configuration c = helicoid_configuration(1.0, 1.0, 2.0);
  c.period = Vec3::Zero();
  EXPECT_THROW(energy_terms(c, {1, 0, 0, 0}), Error);
}

TEST(Energy, MeshEnergyConvergesToDisk) {
  const EnergyParams p{1, 1, 1, 0.5};
  const auto smooth = energy_terms(disk_configuration(1.0), p);
  double prev = 1e9;
  for (int rings : {8, 16, 32}) {
    const auto m = energy_terms(geom::disk_mesh(1.0, rings), p);
    const double err = std::abs(m.total - smooth.total);
    EXPECT_LT(err, prev);
    prev = err;
  }
  EXPECT_LT(prev, 2e-2);
}

// ---------------------------------------------------------------------------

TEST(ElResiduals, GeneralFormReducesToBoundarySystem) {
  fixtures::Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    EnergyParams p{rng.uniform(0.5, 2), rng.uniform(-2, 2), rng.uniform(0.5, 2), rng.uniform(-2, 2)};
    const double kg = rng.uniform(-2, 2), kgp = rng.uniform(-2, 2), kgpp = rng.uniform(-2, 2);
    const double tg = rng.uniform(-2, 2), tgp = rng.uniform(-2, 2);
    const auto r = boundary_residual(p, kg, kgp, kgpp, 0, 0, 0, tg, tgp);
    EXPECT_NEAR(r.eq11, boundary::residual_tangential(p, kg, kgp, tg, tgp), 1e-12);
    EXPECT_NEAR(r.eq12, boundary::residual_normal(p, kg, kgpp, tg), 1e-12);
    EXPECT_EQ(r.eq10, 0.0);
  }
}

TEST(ElResiduals, AlphaZeroCircleOfRadiusTwo) {
  const auto r = el_residuals(disk_configuration(2.0), {1, 1, 0, -2}, {.tolerance = 1e-10});
  EXPECT_TRUE(r.all_pass()) << r.table();
}

TEST(ElResiduals, CircleRootDisk) {
  const auto r = el_residuals(disk_configuration(1.0), {1, 0, 1, 0}, {.tolerance = 1e-10});
  EXPECT_TRUE(r.all_pass()) << r.table();
}

TEST(ElResiduals, WrongRadiusFails) {
  // alpha = 0: eq12 = -beta kg + sigma with kg = -1/R.
  const auto r = el_residuals(disk_configuration(1.5), {1, 1, 0, -2});
  EXPECT_FALSE(r.all_pass());
  EXPECT_NEAR(r.at("el.eq12").value, 1.0 / 3.0, 1e-10);
}

TEST(ElResiduals, FittedHelicoidIsCritical) {
  const auto f = bjorling::fit_helicoid_params(1.0, 1.0, 2.0, 1.0, -1.0, Sheet::minus);
  ASSERT_TRUE(f.valid);
  const EnergyParams p{f.sigma, f.eta, 1.0, -1.0};
  const auto r = el_residuals(fitted_helicoid_configuration(1.0, 1.0, 2.0, f), p, {.tolerance = 1e-10});
  EXPECT_TRUE(r.all_pass()) << r.table();
}

TEST(ElResiduals, UnfittedHelicoidFails) {
  const auto f = bjorling::fit_helicoid_params(1.0, 1.0, 2.0, 1.0, -1.0, Sheet::minus);
  const EnergyParams p{f.sigma * 1.1, f.eta, 1.0, -1.0};
  EXPECT_FALSE(el_residuals(fitted_helicoid_configuration(1.0, 1.0, 2.0, f), p).all_pass());
}

TEST(ElResiduals, HemisphereIsNotCritical) {
  const auto r = el_residuals(cap_configuration(pi / 2), {1, 1, 1, 0});
  EXPECT_FALSE(r.all_pass());
  EXPECT_GT(r.at("el.eq9_H").value, 0.5);
}

// ---------------------------------------------------------------------------

TEST(Scaling, UnitDiskCircleRoot) {
  EXPECT_TRUE(scaling_identity_check(disk_configuration(1.0), {1, 0, 1, 0}).all_pass());
}

TEST(Scaling, AlphaZeroDisk) {
  const auto r = scaling_identity_check(disk_configuration(2.0), {1, 1, 0, -2});
  EXPECT_TRUE(r.all_pass());
  EXPECT_NEAR(r.at("scaling.identity").reference, 8 * pi, 1e-10);
}

TEST(Scaling, RandomCircleRootDisks) {
  fixtures::Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const EnergyParams p{rng.uniform(0.2, 3), rng.uniform(-1, 1), rng.uniform(0.2, 3), rng.uniform(-3, 3)};
    const auto roots = elastica::circle_roots(p);
    for (const auto& r : roots.roots) {
      if (r.kappa >= 0) continue;
      const auto rep = scaling_identity_check(disk_configuration(-1 / r.kappa), p);
      EXPECT_TRUE(rep.all_pass()) << rep.table();
    }
  }
}

TEST(Scaling, HemisphereControlFails) {
  for (const EnergyParams p : {EnergyParams{1, 0, 1, 0}, EnergyParams{2, 1, 0.5, -1}, EnergyParams{1, 0, 0, 0}}) {
    const auto r = scaling_identity_check(cap_configuration(pi / 2), p);
    EXPECT_FALSE(r.all_pass());
    EXPECT_GT(r.at("scaling.identity").abs_residual, 0.1);
  }
}

// ---------------------------------------------------------------------------

TEST(GaussBonnet, DiscreteDisk) {
  const auto r = gauss_bonnet_check(geom::disk_mesh(1.0, 10));
  EXPECT_TRUE(r.all_pass()) << r.table();
  EXPECT_NEAR(r.at("gb.planar_total").value, -2 * pi, 1e-10);
}

TEST(GaussBonnet, DiscretePlanarMultiLoop) {
  for (int holes = 0; holes <= 2; ++holes) {
    const auto mesh = geom::holed_square_mesh(15, holes);
    const auto r = gauss_bonnet_check(mesh);
    EXPECT_TRUE(r.all_pass()) << r.table();
    const int m = holes + 1;
    EXPECT_NEAR(r.at("gb.planar_total").value, -2 * pi * (2 - m), 1e-10);
    EXPECT_EQ(r.at("gb.chi").value, 2 - m);
  }
}

TEST(GaussBonnet, DiscretePlanarAnnulus) {
  const auto mesh = geom::mesh_from_patch(geom::PlanarAnnulusPatch(1.0, 2.0), 6, 24, {.periodic_v = true});
  const auto r = gauss_bonnet_check(mesh);
  EXPECT_TRUE(r.all_pass()) << r.table();
  EXPECT_EQ(r.at("gb.chi").value, 0.0);
}

TEST(GaussBonnet, DiscreteIsExactOnCurvedMeshes) {
  for (int n : {3, 7, 20}) {
    const auto r = gauss_bonnet_check(geom::sphere_octant_mesh(n));
    EXPECT_TRUE(r.all_pass()) << r.table();
    EXPECT_FALSE(r.contains("gb.planar_total"));
  }
  const auto hel = geom::mesh_from_patch(bjorling::HelicoidPatch(1.0, 0.0, 1.0, 2.0, 2 * pi), 7, 30);
  EXPECT_TRUE(gauss_bonnet_check(hel).all_pass());
}

TEST(GaussBonnet, SmoothCapConvergesAtSecondOrder) {
  const auto r = smooth_gauss_bonnet_check(cap_configuration(1.0));
  EXPECT_TRUE(r.all_pass()) << r.table();
  EXPECT_NEAR(r.at("gb.smooth.order").value, 2.0, 0.1);
}

TEST(GaussBonnet, SmoothHelicoidAnnulusConverges) {
  const auto r = smooth_gauss_bonnet_check(helicoid_configuration(1.0, 1.0, 2.0));
  EXPECT_TRUE(r.all_pass()) << r.table();
  EXPECT_NEAR(r.at("gb.smooth.order").value, 2.0, 0.1);
}

TEST(GaussBonnet, SmoothFlatDiskIsExact) {
  const auto r = smooth_gauss_bonnet_check(disk_configuration(1.0));
  EXPECT_TRUE(r.all_pass()) << r.table();
  EXPECT_LT(r.at("gb.smooth.level0").value, 1e-12);
}

// ---------------------------------------------------------------------------

TEST(TorsionFlux, HelicoidFluxIsMinusTwoPiA) {
  for (double a : {0.5, 1.0, 2.0})
    for (auto [r0, r1] : {std::pair{1.0, 2.0}, std::pair{0.5, 3.0}}) {
      const bjorling::HelicoidPatch h(a, 0.0, r0, r1, 2 * pi, true);
      const auto f = torsion_flux(h);
      EXPECT_NEAR(f.flux[0], -2 * pi * a, 1e-10);
      EXPECT_NEAR(f.flux[1], -2 * pi * a, 1e-10);
      EXPECT_LE(f.difference, 1e-10);
      EXPECT_TRUE(f.same_strict_sign);
      EXPECT_TRUE(torsion_flux_check(h).all_pass());
    }
}

TEST(TorsionFlux, NegativePitchFlipsTheSign) {
  const auto f = torsion_flux(bjorling::HelicoidPatch(-1.0, 0.0, 1.0, 2.0, 2 * pi, true));
  EXPECT_NEAR(f.flux[0], 2 * pi, 1e-10);
  EXPECT_NEAR(f.flux[1], 2 * pi, 1e-10);
}

TEST(TorsionFlux, PlanarAnnulusHasNoFlux) {
  const auto f = torsion_flux(geom::PlanarAnnulusPatch(1.0, 2.0));
  EXPECT_EQ(f.flux[0], 0.0);
  EXPECT_EQ(f.flux[1], 0.0);
  EXPECT_FALSE(f.same_strict_sign);
}

TEST(TorsionFlux, NonConformalPatchIsRejected) {
  try {
    torsion_flux(bjorling::HelicoidPatch(1.0, 0.0, 1.0, 2.0, 2 * pi, false));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::precondition);
  }
}

// ---------------------------------------------------------------------------

TEST(Variation, PerturbedJetsMatchDifferences) {
  const auto base = std::make_shared<bjorling::HelicoidPatch>(1.0, 0.0, 1.0, 2.0, 2 * pi);
  const PerturbedPatch p(base, random_trig_field(9), 0.1);
  const auto exact = p.jet(1.3, 0.7);
  const auto fd = p.fd_jet(1.3, 0.7);
  EXPECT_LT((exact.Xu - fd.Xu).norm(), 1e-7);
  EXPECT_LT((exact.Xv - fd.Xv).norm(), 1e-7);
  EXPECT_LT((exact.Xuu - fd.Xuu).norm(), 1e-5);
  EXPECT_LT((exact.Xuv - fd.Xuv).norm(), 1e-5);
  EXPECT_LT((exact.Xvv - fd.Xvv).norm(), 1e-5);
}

TEST(Variation, RigidMotionsOnDiskAndHelicoid) {
  for (const auto& c : {disk_configuration(1.0), helicoid_configuration(1.0, 1.0, 2.0)}) {
    const auto t = geodesic_variation_check(c, translation_field({0.3, -0.2, 0.5}), true);
    EXPECT_TRUE(t.all_pass()) << c.name << "\n" << t.table();
    const auto r = geodesic_variation_check(c, rotation_field({0.0, 0.0, 0.7}), true);
    EXPECT_TRUE(r.all_pass()) << c.name << "\n" << r.table();
  }
  // A tilt is a symmetry of the disk in R^3 but not of the helicoid quotient.
  const auto tilt = geodesic_variation_check(disk_configuration(1.0), rotation_field({0.3, -0.2, 0.5}), true);
  EXPECT_TRUE(tilt.all_pass()) << tilt.table();
}

TEST(Variation, InteriorBumpLeavesBothSidesZero) {
  const auto r = geodesic_variation_check(disk_configuration(1.0), disk_bump_field(1.0), true);
  EXPECT_TRUE(r.all_pass()) << r.table();
}

TEST(Variation, RandomFieldsOnDiskConvergeAtSecondOrder) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto r = geodesic_variation_check(disk_configuration(1.0), random_trig_field(seed), false);
    EXPECT_TRUE(r.all_pass()) << "seed " << seed << "\n" << r.table();
  }
}

TEST(Variation, RandomFieldsOnHelicoidConvergeAtSecondOrder) {
  for (double a : {0.5, 1.0}) {
    const auto c = helicoid_configuration(a, 1.0, 2.0);
    for (std::uint64_t seed : {7u, 8u}) {
      // Integer z-frequencies over a keep the field periodic under the screw.
      const auto r = geodesic_variation_check(c, random_trig_field(seed, 3, 2, 1.0 / a), false);
      EXPECT_TRUE(r.all_pass()) << "a " << a << " seed " << seed << "\n" << r.table();
      EXPECT_GT(std::abs(r.at("variation.formula").value), 1e-4);
    }
  }
}

TEST(Variation, CurvedDiskFixesTheTorsionDerivativeSign) {
  const auto c = curved_disk();
  const auto f = random_trig_field(11);
  const auto v = geodesic_variation(c, f);
  ASSERT_EQ(v.orders.size(), 2u);
  for (double p : v.orders) EXPECT_GE(p, 1.9);
  VariationOptions flipped;
  flipped.tau_sign = -1.0;
  const auto w = geodesic_variation(c, f, flipped);
  EXPECT_GT(w.mismatch.back(), 1e-2);
}

TEST(Variation, DegeneratePerturbationIsReported) {
  // F = -p on the disk collapses the rim at eps = 1.
  VariationField squash{[](const Vec3& p) { return Vec3(-p); }, [](const Vec3&) { return Mat3(-Mat3::Identity()); },
                        [](const Vec3&) { return std::array<Mat3, 3>{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()}; },
                        "squash"};
  VariationOptions o;
  o.epsilons = {1.0, 0.5};
  try {
    geodesic_variation(disk_configuration(1.0), squash, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::step_size);
  }
}

TEST(Variation, EpsilonsMustDecrease) {
  VariationOptions o;
  o.epsilons = {1e-3, 1e-2};
  EXPECT_THROW(geodesic_variation(disk_configuration(1.0), translation_field({1, 0, 0}), o), Error);
}
