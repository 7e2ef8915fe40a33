#pragma once
// Energy, Euler-Lagrange residuals and the scaling identity on a patch with
// boundary curves.

#include <memory>
#include <string>
#include <vector>

#include "plateau/audit/report.hpp"
#include "plateau/bjorling/helicoid.hpp"
#include "plateau/geom/mesh.hpp"
#include "plateau/geom/patch.hpp"
#include "plateau/params.hpp"

namespace plateau::audit {

/// A surface patch with its boundary components as domain paths, each
/// traversed positively (co-normal n = T x nu pointing out of the surface).
/// `period` is the translation identifying the ends of open paths on
/// quotient surfaces (helicoid strips in R^3 / Z); zero means every path
/// must close in space.
struct Configuration {
  std::shared_ptr<const geom::ParamPatch> patch;
  std::vector<geom::UvPath> boundary;
  Vec3 period = Vec3::Zero();
  std::string name;
  int chi = 1;
};

inline Configuration disk_configuration(double R) {
  return {std::make_shared<geom::DiskPatch>(R), {geom::UvPath::v_line(R, 0.0, 2 * pi, true)}, Vec3::Zero(),
          "disk", 1};
}

inline Configuration annulus_configuration(double r0, double r1) {
  auto p = std::make_shared<geom::PlanarAnnulusPatch>(r0, r1);
  const auto d = p->domain();
  return {p,
          {geom::UvPath::v_line(d.u1, 0.0, 2 * pi, true), geom::UvPath::v_line(d.u0, 2 * pi, 0.0, true)},
          Vec3::Zero(),
          "annulus",
          0};
}

/// Spherical cap of polar angle t0 on the unit sphere (t0 = pi/2: hemisphere).
inline Configuration cap_configuration(double t0) {
  return {std::make_shared<geom::SpherePatch>(1.0, t0), {geom::UvPath::v_line(t0, 0.0, 2 * pi, true)},
          Vec3::Zero(), t0 == pi / 2 ? "hemisphere" : "cap", 1};
}

/// One full turn of the helicoid between radii r0 < r1, as an annulus in
/// R^3 modulo the screw translation (0, 0, 2 pi a).
inline Configuration helicoid_configuration(double a, double r0, double r1, bool conformal = false) {
  auto h = std::make_shared<bjorling::HelicoidPatch>(a, 0.0, r0, r1, 2 * pi, conformal);
  return {h, {h->outer_path(), h->inner_path()}, Vec3(0, 0, 2 * pi * a), "helicoid", 0};
}

/// Helicoid annulus whose helices are traversed in the directions matching a
/// fit's kappa_g signs (see bjorling::fitted_paths).
inline Configuration fitted_helicoid_configuration(double a, double r0, double r1, const bjorling::HelicoidFit& f) {
  auto h = std::make_shared<bjorling::HelicoidPatch>(a, 0.0, r0, r1, 2 * pi);
  const auto paths = bjorling::fitted_paths(*h, f);
  return {h, {paths.outer, paths.inner}, Vec3(0, 0, 2 * pi * a), "fitted_helicoid", 0};
}

namespace detail {

inline void check_closed(const Configuration& c) {
  require(c.patch != nullptr, "configuration has no patch");
  require(!c.boundary.empty(), "configuration has no boundary");
  for (std::size_t i = 0; i < c.boundary.size(); ++i) {
    const auto& p = c.boundary[i];
    const Vec2 a = p.at(p.t0), b = p.at(p.t1);
    const Vec3 gap = c.patch->position(b.x(), b.y()) - c.patch->position(a.x(), a.y());
    const double scale = std::max(1.0, c.patch->position(a.x(), a.y()).norm());
    const double tol = 1e-9 * scale;
    const bool closed = gap.norm() <= tol || (c.period.norm() > 0 && ((gap - c.period).norm() <= tol ||
                                                                      (gap + c.period).norm() <= tol));
    if (!closed)
      throw Error(ErrorKind::precondition,
                  "boundary component " + std::to_string(i) + " is not closed (gap " + fmt17(gap.norm()) + ")");
  }
}

/// Composite Gauss-Legendre over the patch domain: sum of f(u, v) * weight.
template <class F>
double surface_quadrature(const geom::ParamPatch& patch, int cells, int order, F&& f) {
  const auto d = patch.domain();
  const GaussRule g = gauss_legendre(order);
  const double hu = d.du() / cells, hv = d.dv() / cells;
  double acc = 0.0;
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j)
      for (int a = 0; a < order; ++a)
        for (int b = 0; b < order; ++b) {
          const double u = d.u0 + hu * (i + 0.5 * (g.x[a] + 1));
          const double v = d.v0 + hv * (j + 0.5 * (g.x[b] + 1));
          acc += g.w[a] * g.w[b] * 0.25 * hu * hv * f(u, v);
        }
  return acc;
}

/// Composite Gauss-Legendre along a path of f(BoundaryPoint) ds.
template <class F>
double line_quadrature(const geom::ParamPatch& patch, const geom::UvPath& path, int pieces, int order, F&& f) {
  const GaussRule g = gauss_legendre(order);
  const double h = (path.t1 - path.t0) / pieces;
  double acc = 0.0;
  for (int i = 0; i < pieces; ++i)
    for (int a = 0; a < order; ++a) {
      const auto bp = geom::boundary_point(patch, path, path.t0 + h * (i + 0.5 * (g.x[a] + 1)));
      acc += g.w[a] * 0.5 * h * bp.speed * f(bp);
    }
  return acc;
}

}  // namespace detail

struct QuadratureOptions {
  int surface_cells = 16;
  int boundary_pieces = 32;
  int order = 8;
};

struct EnergyTerms {
  double area = 0.0, total_K = 0.0, length = 0.0, bending = 0.0;  // bending = oint kappa^2 ds
  double area_term = 0.0, gauss_term = 0.0, bend_term = 0.0, total = 0.0;
};

inline EnergyTerms energy_terms(const Configuration& c, const EnergyParams& p, QuadratureOptions q = {}) {
  detail::check_closed(c);
  EnergyTerms e;
  const auto& patch = *c.patch;
  e.area = detail::surface_quadrature(patch, q.surface_cells, q.order,
                                      [&](double u, double v) { return patch.at(u, v).area_element; });
  e.total_K = detail::surface_quadrature(patch, q.surface_cells, q.order, [&](double u, double v) {
    const auto sp = patch.at(u, v);
    return sp.K * sp.area_element;
  });
  for (const auto& path : c.boundary) {
    e.length += detail::line_quadrature(patch, path, q.boundary_pieces, q.order, [](const auto&) { return 1.0; });
    e.bending += detail::line_quadrature(patch, path, q.boundary_pieces, q.order, [](const geom::BoundaryPoint& b) {
      return b.kappa_g * b.kappa_g + b.kappa_n * b.kappa_n;
    });
  }
  e.area_term = p.sigma * e.area;
  e.gauss_term = p.eta * e.total_K;
  e.bend_term = p.alpha * e.bending + p.beta * e.length;
  e.total = e.area_term + e.gauss_term + e.bend_term;
  return e;
}

/// The same terms on a triangle mesh: area, angle-defect total curvature and
/// a polygon bending energy sum turn^2 / dual length over each boundary loop.
inline EnergyTerms energy_terms(const geom::TriMesh& mesh_in, const EnergyParams& p) {
  geom::TriMesh mesh = mesh_in;
  geom::build_topology(mesh);
  require(!mesh.boundary_loops.empty(), "energy: mesh has no boundary");
  EnergyTerms e;
  e.area = geom::mesh_area(mesh);
  e.total_K = geom::discrete_gauss_bonnet(mesh).total_K;
  for (const auto& loop : mesh.boundary_loops) {
    const int n = int(loop.size());
    for (int i = 0; i < n; ++i) {
      const Vec3& a = mesh.vertices[loop[(i + n - 1) % n]];
      const Vec3& b = mesh.vertices[loop[i]];
      const Vec3& c = mesh.vertices[loop[(i + 1) % n]];
      const double l0 = (b - a).norm(), l1 = (c - b).norm();
      const double turn = std::acos(std::clamp((b - a).dot(c - b) / (l0 * l1), -1.0, 1.0));
      e.length += l1;
      e.bending += turn * turn / (0.5 * (l0 + l1));
    }
  }
  e.area_term = p.sigma * e.area;
  e.gauss_term = p.eta * e.total_K;
  e.bend_term = p.alpha * e.bending + p.beta * e.length;
  e.total = e.area_term + e.gauss_term + e.bend_term;
  return e;
}

inline AuditReport energy_report(const EnergyTerms& e) {
  AuditReport r;
  const double inf = std::numeric_limits<double>::infinity();
  r.add("energy.area", e.area, e.area, inf);
  r.add("energy.area_term", e.area_term, e.area_term, inf);
  r.add("energy.gauss_term", e.gauss_term, e.gauss_term, inf);
  r.add("energy.bend_term", e.bend_term, e.bend_term, inf);
  r.add("energy.total", e.total, e.total, inf);
  return r;
}

// ---------------------------------------------------------------------------
// Euler-Lagrange residuals

/// Boundary residuals with J = 2 alpha T'' + (3 alpha kappa^2 - beta) T written
/// in the Darboux frame (T' = kg n + kn nu, n' = -kg T + tg nu,
/// nu' = -kn T - tg n):
///   eq11 = J'.nu + eta tg',  eq12 = J'.n - eta tg^2 + sigma.
struct BoundaryResidual {
  double eq10 = 0.0, eq11 = 0.0, eq12 = 0.0;
};

inline BoundaryResidual boundary_residual(const EnergyParams& p, double kg, double kgp, double kgpp, double kn,
                                          double knp, double knpp, double tg, double tgp) {
  const double k2 = kg * kg + kn * kn;
  const double A = kgp - kn * tg, Ap = kgpp - knp * tg - kn * tgp;
  const double Bv = knp + kg * tg, Bvp = knpp + kgp * tg + kg * tgp;
  BoundaryResidual r;
  r.eq10 = p.eta * kn;
  r.eq11 = (p.alpha * k2 - p.beta) * kn + 2 * p.alpha * A * tg + 2 * p.alpha * Bvp + p.eta * tgp;
  r.eq12 = (p.alpha * k2 - p.beta) * kg + 2 * p.alpha * Ap - 2 * p.alpha * Bv * tg - p.eta * tg * tg + p.sigma;
  return r;
}

struct ElOptions {
  int samples = 256;    // per boundary component
  int surface_grid = 32;
  double tolerance = 1e-8;
};

/// Sup-norms of H on the patch and of the three boundary equations on each
/// component. Derivatives in s come from 7-point Fornberg stencils of the
/// sampled Darboux data (periodic on closed paths).
inline AuditReport el_residuals(const Configuration& c, const EnergyParams& p, ElOptions o = {}) {
  detail::check_closed(c);
  AuditReport rep;
  const auto& patch = *c.patch;
  const auto d = patch.domain();
  double H = 0.0;
  for (int i = 0; i <= o.surface_grid; ++i)
    for (int j = 0; j <= o.surface_grid; ++j) {
      // Stay off the edges so polar parameterizations are not sampled at the pole.
      const double u = d.u0 + d.du() * (i + 0.5) / (o.surface_grid + 1);
      const double v = d.v0 + d.dv() * (j + 0.5) / (o.surface_grid + 1);
      H = std::max(H, std::abs(patch.mean_curvature(u, v)));
    }
  rep.bound("el.eq9_H", H, o.tolerance);
  double e10 = 0, e11 = 0, e12 = 0;
  for (std::size_t b = 0; b < c.boundary.size(); ++b) {
    const auto& path = c.boundary[b];
    const auto field = geom::darboux_from_patch(patch, path, (path.t1 - path.t0) / o.samples);
    std::vector<double> s = field.column(&geom::DarbouxSample::s);
    auto kg = field.column(&geom::DarbouxSample::kappa_g);
    auto kn = field.column(&geom::DarbouxSample::kappa_n);
    auto tg = field.column(&geom::DarbouxSample::tau_g);
    const bool periodic = path.closed;
    if (periodic) {  // drop the repeated endpoint
      s.pop_back();
      kg.pop_back();
      kn.pop_back();
      tg.pop_back();
    }
    const double L = field.length;
    if (!std::isfinite(L) || L <= 0.0) throw Error(ErrorKind::accuracy, "boundary length estimate failed");
    auto D = [&](const std::vector<double>& f, int order) { return differentiate(s, f, order, periodic, L); };
    const auto kgp = D(kg, 1), kgpp = D(kg, 2), knp = D(kn, 1), knpp = D(kn, 2), tgp = D(tg, 1);
    double m10 = 0, m11 = 0, m12 = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto r = boundary_residual(p, kg[i], kgp[i], kgpp[i], kn[i], knp[i], knpp[i], tg[i], tgp[i]);
      if (!std::isfinite(r.eq11) || !std::isfinite(r.eq12))
        throw Error(ErrorKind::accuracy, "non-finite boundary derivative estimate");
      m10 = std::max(m10, std::abs(r.eq10));
      m11 = std::max(m11, std::abs(r.eq11));
      m12 = std::max(m12, std::abs(r.eq12));
    }
    const std::string pre = "el.boundary" + std::to_string(b) + ".";
    rep.bound(pre + "eq10", m10, o.tolerance);
    rep.bound(pre + "eq11", m11, o.tolerance);
    rep.bound(pre + "eq12", m12, o.tolerance);
    e10 = std::max(e10, m10);
    e11 = std::max(e11, m11);
    e12 = std::max(e12, m12);
  }
  rep.bound("el.eq10", e10, o.tolerance);
  rep.bound("el.eq11", e11, o.tolerance);
  rep.bound("el.eq12", e12, o.tolerance);
  return rep;
}

inline double el_max(const AuditReport& r) {
  return std::max({r.at("el.eq9_H").value, r.at("el.eq10").value, r.at("el.eq11").value, r.at("el.eq12").value});
}

// ---------------------------------------------------------------------------
// Scaling identity 2 sigma A = oint (alpha kappa^2 - beta) ds

inline AuditReport scaling_identity_check(const Configuration& c, const EnergyParams& p, double tol = 1e-10,
                                          QuadratureOptions q = {}) {
  const auto e = energy_terms(c, p, q);
  AuditReport r;
  const double lhs = 2 * p.sigma * e.area;
  const double rhs = p.alpha * e.bending - p.beta * e.length;
  r.add("scaling.identity", lhs, rhs, tol, false, "2 sigma A vs oint (alpha kappa^2 - beta) ds");
  return r;
}

}  // namespace plateau::audit
