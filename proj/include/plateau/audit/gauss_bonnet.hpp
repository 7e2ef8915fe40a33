#pragma once
// Gauss-Bonnet checks (discrete and smooth) and the torsion flux through the
// boundary components of a conformal annulus.

#include <string>
#include <vector>

#include "plateau/audit/energy.hpp"
#include "plateau/audit/report.hpp"
#include "plateau/geom/mesh.hpp"

namespace plateau::audit {

/// Signed turning of a closed polygon about `axis`: the sum of exterior angles
/// measured in the plane orthogonal to axis. Counterclockwise loops give +2 pi.
inline double polygon_turning(const geom::TriMesh& m, const std::vector<int>& loop, const Vec3& axis) {
  const int n = int(loop.size());
  double t = 0.0;
  for (int i = 0; i < n; ++i) {
    Vec3 a = m.vertices[loop[i]] - m.vertices[loop[(i + n - 1) % n]];
    Vec3 b = m.vertices[loop[(i + 1) % n]] - m.vertices[loop[i]];
    a -= a.dot(axis) * axis;
    b -= b.dot(axis) * axis;
    t += std::atan2(axis.dot(a.cross(b)), a.dot(b));
  }
  return t;
}

namespace detail {
/// Unit normal of the best-fit plane when every vertex lies on it.
inline std::optional<Vec3> plane_normal(const geom::TriMesh& m, double tol = 1e-12) {
  if (m.faces.empty()) return std::nullopt;
  Vec3 acc = Vec3::Zero();
  for (const auto& f : m.faces)
    acc += (m.vertices[f[1]] - m.vertices[f[0]]).cross(m.vertices[f[2]] - m.vertices[f[0]]);
  if (acc.norm() == 0.0) return std::nullopt;
  const Vec3 nrm = acc.normalized();
  const Vec3& p0 = m.vertices[m.faces[0][0]];
  double scale = 1.0;
  for (const auto& v : m.vertices) scale = std::max(scale, (v - p0).norm());
  for (const auto& v : m.vertices)
    if (std::abs((v - p0).dot(nrm)) > tol * scale) return std::nullopt;
  return nrm;
}
}  // namespace detail

/// Discrete identity  sum of interior angle defects = sum of boundary
/// geodesic curvatures + 2 pi chi. On planar genus-zero meshes the per-loop
/// totals are also checked against the turning of each boundary polygon:
/// the outer loop turns once counterclockwise and every hole clockwise, so
/// oint kappa_g = -2 pi (2 - m) for m loops.
inline AuditReport gauss_bonnet_check(const geom::TriMesh& mesh_in, double tol = 1e-10) {
  geom::TriMesh mesh = mesh_in;
  geom::build_topology(mesh);
  const auto gb = geom::discrete_gauss_bonnet(mesh);
  AuditReport r;
  r.add("gb.discrete", gb.total_K, gb.total_kappa_g + 2 * pi * gb.chi, tol, false,
        "angle defects vs exterior angles + 2 pi chi");
  r.add("gb.chi", gb.chi, gb.chi, 0.0);
  const int m = int(mesh.boundary_loops.size());
  if (const auto axis = detail::plane_normal(mesh); axis && mesh.genus() == 0 && m > 0) {
    r.add("gb.planar_total", gb.total_kappa_g, -2 * pi * (2 - m), tol, false, "turning angles, m loops");
    for (int i = 0; i < m; ++i) {
      const double turn = polygon_turning(mesh, mesh.boundary_loops[i], *axis);
      r.add("gb.loop" + std::to_string(i) + ".turning", gb.loop_kappa_g[i],
            kGeodesicCurvatureSign * -turn, tol);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Smooth Gauss-Bonnet by composite midpoint sums

struct SmoothGaussBonnet {
  double total_K = 0.0, total_kappa_g = 0.0;
  int chi = 0;
  double residual() const { return total_K - total_kappa_g - 2 * pi * chi; }
};

/// Midpoint sums with n x n surface cells and 4n pieces per boundary path.
inline SmoothGaussBonnet smooth_gauss_bonnet(const Configuration& c, int n) {
  detail::check_closed(c);
  require(n >= 1, "smooth_gauss_bonnet: need n >= 1");
  const auto& patch = *c.patch;
  const auto d = patch.domain();
  SmoothGaussBonnet g;
  g.chi = c.chi;
  const double hu = d.du() / n, hv = d.dv() / n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const auto sp = patch.at(d.u0 + (i + 0.5) * hu, d.v0 + (j + 0.5) * hv);
      g.total_K += sp.K * sp.area_element * hu * hv;
    }
  for (const auto& path : c.boundary) {
    const int pieces = 4 * n;
    const double h = (path.t1 - path.t0) / pieces;
    for (int i = 0; i < pieces; ++i) {
      const auto bp = geom::boundary_point(patch, path, path.t0 + (i + 0.5) * h);
      g.total_kappa_g += bp.kappa_g * bp.speed * h;
    }
  }
  return g;
}

/// Three refinement levels n, 2n, 4n; reports each residual, whether they
/// decrease (residuals below `floor` count as converged), and the observed
/// order log2(r1/r2), log2(r2/r3).
inline AuditReport smooth_gauss_bonnet_check(const Configuration& c, int n0 = 8, double tol = 1e-2,
                                             double floor = 1e-12) {
  AuditReport r;
  std::vector<double> res;
  for (int level = 0; level < 3; ++level) {
    const auto g = smooth_gauss_bonnet(c, n0 << level);
    res.push_back(std::abs(g.residual()));
    r.bound("gb.smooth.level" + std::to_string(level), res.back(), tol);
  }
  auto down = [&](int i) { return res[i + 1] < res[i] || std::max(res[i], res[i + 1]) <= floor; };
  r.flag("gb.smooth.decreasing", down(0) && down(1));
  const double inf = std::numeric_limits<double>::infinity();
  if (res[1] > 0 && res[2] > 0) {
    const double p1 = std::log2(res[0] / res[1]), p2 = std::log2(res[1] / res[2]);
    r.add("gb.smooth.order", p2, p2, inf, false, "coarse order " + fmt17(p1));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Torsion flux

struct TorsionFlux {
  std::vector<double> flux;  // one per component, in boundary order
  double difference = 0.0;   // |flux[0] - flux[1]|
  bool same_strict_sign = false;
};

/// oint tau_g e^zeta dv over the v-lines u = u0 and u = u1 of a conformal
/// patch, both taken with increasing v (tau_g does not depend on the
/// traversal direction).
inline TorsionFlux torsion_flux(const geom::ParamPatch& patch, int pieces = 64, int order = 8) {
  if (!patch.conformal())
    throw Error(ErrorKind::precondition, "torsion_flux: patch is not conformal");
  const auto d = patch.domain();
  const GaussRule g = gauss_legendre(order);
  TorsionFlux out;
  for (double u : {d.u0, d.u1}) {
    const auto path = geom::UvPath::v_line(u, d.v0, d.v1, true);
    const double h = path.t1 / pieces;
    double acc = 0.0;
    for (int i = 0; i < pieces; ++i)
      for (int a = 0; a < order; ++a) {
        const double t = h * (i + 0.5 * (g.x[a] + 1));
        const auto bp = geom::boundary_point(patch, path, t);
        const Vec2 uv = path.at(t);
        acc += g.w[a] * 0.5 * h * bp.tau_g * patch.conformal_factor(uv.x(), uv.y());
      }
    out.flux.push_back(acc);
  }
  out.difference = std::abs(out.flux[0] - out.flux[1]);
  out.same_strict_sign = (out.flux[0] > 0 && out.flux[1] > 0) || (out.flux[0] < 0 && out.flux[1] < 0);
  return out;
}

inline AuditReport torsion_flux_check(const geom::ParamPatch& patch, double tol = 1e-10) {
  const auto f = torsion_flux(patch);
  AuditReport r;
  const double inf = std::numeric_limits<double>::infinity();
  r.add("flux.inner", f.flux[0], f.flux[0], inf);
  r.add("flux.outer", f.flux[1], f.flux[1], inf);
  r.add("flux.difference", f.flux[0], f.flux[1], tol);
  r.add("flux.same_strict_sign", f.same_strict_sign ? 1.0 : 0.0, f.same_strict_sign ? 1.0 : 0.0, inf, false,
        "1: both fluxes share a strict sign");
  return r;
}

}  // namespace plateau::audit
