#include <gtest/gtest.h>

#include "plateau/bjorling/fig1.hpp"
#include "plateau/bjorling/helicoid.hpp"
#include "plateau/bjorling/weierstrass.hpp"
#include "plateau/geom/mesh.hpp"

using namespace plateau;
using namespace plateau::bjorling;

namespace {

// Unit circle through (1, 0, 0) with C(s) = (cos s, sin s, 0).
geom::Frame circle_frame() { return {{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, 0, 1}}; }

double max_interior_H(const geom::TriMesh& m) {
  const auto vc = geom::discrete_curvatures(m);
  double h = 0.0;
  for (const auto& v : vc)
    if (!v.boundary) h = std::max(h, std::abs(v.H));
  return h;
}

}  // namespace

TEST(Strip, CircleMatchesComplexCosSin) {
  const auto m = CoreModel::constant_curvature(1.0, 0.0, Sheet::plus, circle_frame());
  const auto st = continue_core(m, 2 * pi, 0.5, 100, 40);
  double err = 0.0;
  for (int j = 0; j <= st.ns; ++j)
    for (int k = 0; k <= st.nt; ++k) {
      const cdouble z(st.s_at(j), st.t_at(k));
      const CVec3 ex(std::cos(z), std::sin(z), 0.0);
      err = std::max(err, (st.node(j, k).C() - ex).cwiseAbs().maxCoeff());
    }
  EXPECT_LE(err, 1e-8);
}

TEST(Strip, HelixMatchesComplexClosedForm) {
  const double k = 0.6, t = 0.8;  // omega = 1
  const double w = std::sqrt(k * k + t * t), rho = k / (w * w), h = t / (w * w);
  auto H = [&](cdouble z) { return CVec3(rho * std::cos(w * z), rho * std::sin(w * z), h * w * z); };
  const Vec3 T0{0, rho * w, h * w}, N0{-1, 0, 0};
  const geom::Frame fr{{rho, 0, 0}, T0, N0, T0.cross(N0)};
  const auto st = continue_core(CoreModel::constant_curvature(k, t, Sheet::plus, fr), 4.0, 0.5, 80, 40);
  double err = 0.0;
  for (int j = 0; j <= st.ns; ++j)
    for (int q = 0; q <= st.nt; ++q)
      err = std::max(err, (st.node(j, q).C() - H({st.s_at(j), st.t_at(q)})).cwiseAbs().maxCoeff());
  EXPECT_LE(err, 1e-8);
  EXPECT_LE(st.max_frame_defect, 1e-10);
}

TEST(Strip, RealAxisIsTheRealIntegration) {
  const auto set = reference_set(1);
  const auto model = CoreModel::from_boundary(set.params, set.state0, set.sheet);
  const auto st = continue_core(model, 3.0, 0.2, 60, 20);
  EXPECT_EQ(st.real_axis_imag(), 0.0);
  const auto curve = core_curve(model, 3.0, 60);
  for (int j = 0; j <= st.ns; ++j) {
    const auto& nd = st.node(j, st.k0());
    EXPECT_EQ((nd.C().real() - curve.samples[j].position).norm(), 0.0);
    EXPECT_EQ((nd.B().real() - curve.samples[j].B).norm(), 0.0);
  }
}

TEST(Strip, PathIndependenceOnRectangles) {
  const auto set = reference_set(3);
  const auto model = CoreModel::from_boundary(set.params, set.state0, set.sheet);
  const auto st = continue_core(model, 2.0, 0.3, 40, 20);
  for (int j : {3, 17, 31}) {
    const auto& base = st.node(j, st.k0());
    const cdouble a(0.13, 0.0), b(0.0, 0.21);
    auto r1 = detail::continue_segment(model, base.y, base.W, a, 64, 1e8);
    r1 = detail::continue_segment(model, r1.y, r1.W, b, 64, 1e8);
    auto r2 = detail::continue_segment(model, base.y, base.W, b, 64, 1e8);
    r2 = detail::continue_segment(model, r2.y, r2.W, a, 64, 1e8);
    EXPECT_LE((r1.y - r2.y).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((r1.W - r2.W).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Strip, BlowUpReportsSafeWidth) {
  const auto set = reference_set(1);
  const auto model = CoreModel::from_boundary(set.params, set.state0, set.sheet);
  try {
    continue_core(model, 2 * pi, 4.0, 100, 100);
    FAIL() << "expected truncation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::strip_truncation);
    EXPECT_GT(e.where(), 0.0);
    EXPECT_LT(e.where(), 4.0);
  }
  const auto st = continue_adaptive(model, 2 * pi, 4.0, 100, 100);
  EXPECT_LT(st.T, 4.0);
  EXPECT_GT(st.T, 0.0);
}

TEST(Strip, QuadratureToleranceIsEnforced) {
  const auto m = CoreModel::constant_curvature(1.0, 0.0, Sheet::plus, circle_frame());
  StripOptions opt;
  opt.quadrature_tol = 1e-30;
  EXPECT_THROW(
      {
        try {
          continue_core(m, 2 * pi, 0.5, 20, 10, opt);
        } catch (const Error& e) {
          EXPECT_EQ(e.kind(), ErrorKind::accuracy);
          throw;
        }
      },
      Error);
}

TEST(Surface, StraightLineGivesThePlane) {
  for (Sheet sh : {Sheet::plus, Sheet::minus}) {
    const auto s = bjorling_surface(continue_core(CoreModel::constant_curvature(0, 0, sh), 2.0, 0.5, 20, 10));
    const double e = sign_of(sh);
    for (int j = 0; j <= 20; ++j)
      for (int k = 0; k <= 10; ++k) {
        const Vec3 ex{s.strip->s_at(j), -e * s.strip->t_at(k), 0.0};
        EXPECT_LE((s.strip->position(j, k) - ex).norm(), 1e-12);  // roundoff over ~2000 substeps
      }
    EXPECT_EQ(s.audit.grid.max_abs_H, 0.0);
  }
}

TEST(Surface, CircleWithBinormalNormalIsAPlanarAnnulus) {
  // n = sheet N points along the radius, so X(s, t) = e^{sheet t} (cos s, sin s, 0).
  for (Sheet sh : {Sheet::plus, Sheet::minus}) {
    const auto s =
        bjorling_surface(continue_core(CoreModel::constant_curvature(1, 0, sh, circle_frame()), 2 * pi, 0.3, 400, 100));
    const double e = sign_of(sh);
    double err = 0.0;
    for (int j = 0; j <= 400; j += 7)
      for (int k = 0; k <= 100; ++k) {
        const double sv = s.strip->s_at(j), tv = s.strip->t_at(k);
        const Vec3 ex = std::exp(e * tv) * Vec3{std::cos(sv), std::sin(sv), 0.0};
        err = std::max(err, (s.strip->position(j, k) - ex).norm());
      }
    EXPECT_LE(err, 1e-9);
    EXPECT_LE(s.audit.grid.max_abs_H, 1e-6);
    EXPECT_LE(s.audit.normal_vs_B, 1e-8);
    EXPECT_LE(s.audit.row_vs_curve, 1e-10);
  }
}

TEST(Surface, OffGridEvaluationAgreesWithGrid) {
  const auto set = reference_set(1);
  const auto s = bjorling_surface(
      continue_core(CoreModel::from_boundary(set.params, set.state0, set.sheet), 2.0, 0.2, 40, 20));
  // Between nodes the patch continues from the nearest node; check it against
  // the neighbouring nodes by continuing half a cell both ways.
  const double u = s.strip->s_at(10) + 0.5 * s.strip->ds();
  const double v = s.strip->t_at(13);
  const Vec3 X = s.patch->position(u, v);
  const Vec3 Xa = s.patch->position(u - 1e-12, v);
  EXPECT_LE((X - Xa).norm(), 1e-10);
  const auto jt = s.patch->jet(s.strip->s_at(10), v);
  const Vec3 fd = (s.strip->position(11, 13) - s.strip->position(9, 13)) / (2 * s.strip->ds());
  EXPECT_LE((jt.Xu - fd).norm(), 1e-3);
  EXPECT_LE(std::abs(s.patch->at(u, v).H), 1e-10);
}

TEST(Surface, ReferenceSetsAreCriticalAndMinimal) {
  for (int id : {1, 2, 3}) {
    const auto r = build_reference(reference_set(id));
    const auto& a = r.surface.audit;
    SCOPED_TRACE("set " + std::to_string(id));
    EXPECT_TRUE(r.critical);
    EXPECT_LE(a.core_el(), 1e-8);
    EXPECT_LE(a.core_kappa_n, 1e-8);
    EXPECT_LE(a.grid.max_abs_H, 1e-5);
    ASSERT_EQ(r.refinement.size(), 2u);
    EXPECT_LT(r.refinement[1], r.refinement[0]);
    EXPECT_LE(a.row_vs_curve, 1e-10);
    EXPECT_LE(a.real_axis_imag, 1e-10);
    EXPECT_LE(a.normal_vs_B, 1e-8);
    EXPECT_EQ(r.surface.mesh.vertices.size(), std::size_t(401 * 101));
  }
  EXPECT_EQ(reference_set(2).notes.size(), 1u);
  EXPECT_THROW(reference_set(4), Error);
}

TEST(Helicoid, ClosedFormDataAtUnitRadius) {
  const auto d = helicoid_helix_data(1.0, 1.0);
  EXPECT_EQ(d.tau_g, -0.5);
  EXPECT_EQ(std::abs(d.kappa_g), 0.5);
  EXPECT_EQ(d.kappa_n, 0.0);
}

TEST(Helicoid, PatchDarbouxDataMatchClosedForm) {
  for (double a : {1.0, -0.7}) {
    for (bool conf : {false, true}) {
      HelicoidPatch h(a, 0.3, 0.5, 2.0, 2 * pi, conf);
      for (const auto& [path, r, sgn] : {std::tuple{h.outer_path(), 2.0, 1.0}, std::tuple{h.inner_path(), 0.5, -1.0}}) {
        const auto ex = helicoid_helix_data(a, r);
        for (double l : {0.0, 1.0, 3.0}) {
          const auto bp = geom::boundary_point(h, path, l);
          EXPECT_NEAR(bp.kappa_g, sgn * ex.kappa_g, 1e-12);
          EXPECT_NEAR(bp.kappa_n, 0.0, 1e-12);
          EXPECT_NEAR(bp.tau_g, ex.tau_g, 1e-12);
          EXPECT_NEAR(bp.H, 0.0, 1e-12);
        }
      }
    }
  }
  EXPECT_THROW(HelicoidPatch(1, 0, 0.0, 1, 1), Error);
  EXPECT_THROW(HelicoidPatch(1, 0, -1, 1, 1), Error);
}

TEST(Helicoid, ConformalFormAndClosedFormJets) {
  HelicoidPatch h(1.3, 0, 0.5, 3.0, 2 * pi, true);
  const auto d = h.domain();
  for (double u : {d.u0, 0.5 * (d.u0 + d.u1), d.u1})
    for (double v : {0.0, 1.0, 5.0}) {
      const auto sp = h.at(u, v);
      EXPECT_LE(std::abs(sp.E - sp.G), 1e-10);
      EXPECT_LE(std::abs(sp.F), 1e-10);
      EXPECT_NEAR(sp.E, h.conformal_factor(u, v), 1e-12);
      EXPECT_NEAR(sp.K, h.gauss_curvature(u, v), 1e-12);
      const auto j = h.jet(u, v), f = h.fd_jet(u, v);
      EXPECT_LE((j.Xuv - f.Xuv).norm(), 1e-6);
      EXPECT_LE((j.Xuu - f.Xuu).norm(), 1e-6);
    }
}

TEST(Helicoid, DiscreteMeanCurvatureConvergesQuadratically) {
  HelicoidPatch h(1.0, 0.0, 1.0, 2.0, pi);
  std::vector<double> H;
  for (int n : {8, 16, 32}) H.push_back(max_interior_H(geom::mesh_from_patch(h, n, n)));
  EXPECT_GT(H[0] / H[1], 3.0);
  EXPECT_GT(H[1] / H[2], 3.0);
}

TEST(Helicoid, TwoBoundaryFitMatchesIndependentSolve) {
  const auto f = fit_helicoid_params(1.0, 1.0, 2.0, 1.0, 0.0, Sheet::plus);
  EXPECT_NEAR(f.eta, -157.0 / 210.0, 1e-12);
  EXPECT_NEAR(f.sigma, -13.0 / 210.0, 1e-12);
  EXPECT_FALSE(f.valid);
  Eigen::Matrix2d A;
  A << 1, -0.25, 1, -1.0 / 25;
  const Eigen::Vector2d x = A.partialPivLu().solve(Eigen::Vector2d(1.0 / 8, -4.0 / 125));
  EXPECT_NEAR(f.sigma, x(0), 1e-12);
  EXPECT_NEAR(f.eta, x(1), 1e-12);

  // Sheet - mirrors kappa_g and the fitted pair.
  const auto g = fit_helicoid_params(1.0, 1.0, 2.0, 1.0, 0.0, Sheet::minus);
  EXPECT_NEAR(g.kappa_g0, -f.kappa_g0, 1e-15);
  EXPECT_NEAR(g.sigma, -f.sigma, 1e-15);
  EXPECT_NEAR(g.eta, -f.eta, 1e-15);
  EXPECT_TRUE(g.valid);

  EXPECT_THROW(fit_helicoid_params(1.0, 1.0, 1.0, 1, 0, Sheet::plus), Error);
}

TEST(Helicoid, SingleBoundaryFit) {
  const auto f = fit_helicoid_single(1, 1, 1, 1, 1, Sheet::plus);
  EXPECT_NEAR(f.sigma, 7.0 / 8, 1e-12);
  EXPECT_TRUE(f.valid);
  // sigma = alpha/8 + beta/2 + eta/4 at a = r = 1.
  for (double al : {0.5, 2.0})
    for (double be : {-1.0, 0.3})
      for (double et : {-2.0, 1.5})
        EXPECT_NEAR(fit_helicoid_single(1, 1, al, be, et, Sheet::plus).sigma, al / 8 + be / 2 + et / 4, 1e-14);
}

TEST(Helicoid, FittedHelicesSatisfyBoundaryEquations) {
  for (auto mode : {HelicoidFitMode::same_sign, HelicoidFitMode::oriented})
    for (Sheet sh : {Sheet::plus, Sheet::minus}) {
      const auto f = fit_helicoid_params(0.8, 0.7, 1.9, 1.2, -0.4, sh, mode);
      const EnergyParams p{f.sigma, f.eta, 1.2, -0.4, true};
      for (auto [kg, tg] : {std::pair{f.kappa_g0, f.tau_g0}, std::pair{f.kappa_g1, f.tau_g1}}) {
        EXPECT_LE(std::abs(boundary::residual_normal(p, kg, 0.0, tg)), 1e-12);
        EXPECT_EQ(boundary::residual_tangential(p, kg, 0.0, tg, 0.0), 0.0);
      }
    }
}

TEST(Weierstrass, CatenoidMatchesClosedForm) {
  const auto w = weierstrass_patch(WeierstrassPreset::catenoid);
  auto cat = [](double x, double y) { return Vec3{-std::cosh(x) * std::cos(y), -std::cosh(x) * std::sin(y), x}; };
  const Vec3 X0 = cat(0.0, 0.0);
  for (double x : {-1.0, -0.3, 0.4, 1.0})
    for (double y : {0.0, 1.0, 3.0, 6.0}) {
      EXPECT_LE((w.position(x, y) - (cat(x, y) - X0)).norm(), 1e-12);
      EXPECT_LE(std::abs(w.mean_curvature(x, y)), 1e-12);
      EXPECT_NEAR(w.gauss_curvature(x, y), -1.0 / std::pow(std::cosh(x), 4), 1e-12);
    }
  // Waist circle: geodesic, normal curvature 1 in magnitude, no geodesic torsion.
  const auto bp = geom::boundary_point(w, geom::UvPath::v_line(0.0, 0.0, 2 * pi, true), 1.0);
  EXPECT_NEAR(bp.kappa_g, 0.0, 1e-12);
  EXPECT_NEAR(std::abs(bp.kappa_n), 1.0, 1e-12);
  EXPECT_NEAR(bp.tau_g, 0.0, 1e-12);
}

TEST(Weierstrass, MeshMeanCurvatureShrinksUnderRefinement) {
  const auto w = weierstrass_patch(WeierstrassPreset::catenoid, geom::Domain{-0.8, 0.8, 0.0, pi});
  const double h1 = max_interior_H(geom::mesh_from_patch(w, 8, 16));
  const double h2 = max_interior_H(geom::mesh_from_patch(w, 16, 32));
  EXPECT_GT(h1 / h2, 3.0);
}

TEST(Weierstrass, CurvatureIsNonpositiveAndMatchesData) {
  for (auto p : {WeierstrassPreset::catenoid, WeierstrassPreset::helicoid, WeierstrassPreset::enneper}) {
    const auto w = weierstrass_patch(p);
    const auto d = w.domain();
    for (int i = 0; i <= 6; ++i)
      for (int k = 0; k <= 6; ++k) {
        const double u = d.u0 + i * d.du() / 6, v = d.v0 + k * d.dv() / 6;
        const double K = w.gauss_curvature(u, v);
        EXPECT_LE(K, 0.0);
        EXPECT_NEAR(K, w.closed_form_K(u, v), 1e-10 * std::max(1.0, std::abs(K)));
        EXPECT_LE(std::abs(w.mean_curvature(u, v)), 1e-10);
      }
  }
  // Enneper with f = 1, g = z at the origin: K = -16 in this normalization.
  EXPECT_NEAR(weierstrass_patch(WeierstrassPreset::enneper).closed_form_K(0, 0), -16.0, 1e-14);
  EXPECT_NEAR(weierstrass_patch(WeierstrassPreset::enneper).gauss_curvature(0, 0), -16.0, 1e-12);
}

TEST(Weierstrass, RationalDataAndPoles) {
  const geom::Domain d{-1, 1, -1, 1};
  // f = 1, g = z reproduces Enneper.
  Rational f{{1.0}, {1.0}}, g{{0.0, 1.0}, {1.0}};
  WeierstrassPatch w(weierstrass_rational(f, g, d), d, 0.0);
  const auto e = weierstrass_patch(WeierstrassPreset::enneper, d, cdouble(0.0));
  EXPECT_LE((w.position(0.3, -0.7) - e.position(0.3, -0.7)).norm(), 1e-13);
  // g = 1 / (z - 0.5) has a pole inside.
  Rational gp{{1.0}, {-0.5, 1.0}};
  try {
    weierstrass_rational(f, gp, d);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::domain);
  }
  Rational gout{{1.0}, {-3.0, 1.0}};
  EXPECT_NO_THROW(weierstrass_rational(f, gout, d));
}
