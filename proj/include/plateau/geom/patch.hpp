#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "plateau/geom/curve.hpp"
#include "plateau/numerics.hpp"
#include "plateau/params.hpp"

namespace plateau::geom {

struct Domain {
  double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;
  double du() const { return u1 - u0; }
  double dv() const { return v1 - v0; }
};

/// Position with first and second partial derivatives.
struct PatchJet {
  Vec3 X, Xu, Xv, Xuu, Xuv, Xvv;
};

/// First/second fundamental forms, unit normal and curvatures at a point.
/// Sign conventions: nu = Xu x Xv / |Xu x Xv|, e = Xuu . nu, H = (k1 + k2)/2.
struct SurfacePoint {
  Vec3 normal;
  double E, F, G;
  double e, f, g;
  double H, K;
  double area_element;
};

inline constexpr double kSingularMetric = 1e-14;

inline SurfacePoint surface_point(const PatchJet& j) {
  SurfacePoint p;
  p.E = j.Xu.dot(j.Xu);
  p.F = j.Xu.dot(j.Xv);
  p.G = j.Xv.dot(j.Xv);
  const double det = p.E * p.G - p.F * p.F;
  if (!(det >= kSingularMetric))
    throw Error(ErrorKind::singular_patch, "first fundamental form is degenerate (det=" +
                                               fmt17(det) + ")");
  const Vec3 c = j.Xu.cross(j.Xv);
  p.normal = c / c.norm();
  p.e = j.Xuu.dot(p.normal);
  p.f = j.Xuv.dot(p.normal);
  p.g = j.Xvv.dot(p.normal);
  p.H = (p.e * p.G - 2 * p.f * p.F + p.g * p.E) / (2 * det);
  p.K = (p.e * p.g - p.f * p.f) / det;
  p.area_element = std::sqrt(det);
  return p;
}

/// Smooth parametric surface over a rectangle. Subclasses supply positions
/// and, where they have them, closed-form jets.
class ParamPatch {
 public:
  virtual ~ParamPatch() = default;

  virtual Domain domain() const = 0;
  virtual Vec3 position(double u, double v) const = 0;

  /// Closed-form jet when available; the default differentiates positions.
  virtual PatchJet jet(double u, double v) const { return fd_jet(u, v); }

  /// Fourth-order central differences of position().
  PatchJet fd_jet(double u, double v, double rel_step = 1e-3) const {
    const Domain d = domain();
    const double hu = rel_step * std::max(1.0, std::abs(d.du()));
    const double hv = rel_step * std::max(1.0, std::abs(d.dv()));
    auto P = [&](double a, double b) { return position(u + a * hu, v + b * hv); };
    PatchJet j;
    j.X = P(0, 0);
    j.Xu = (-P(2, 0) + 8 * P(1, 0) - 8 * P(-1, 0) + P(-2, 0)) / (12 * hu);
    j.Xv = (-P(0, 2) + 8 * P(0, 1) - 8 * P(0, -1) + P(0, -2)) / (12 * hv);
    j.Xuu = (-P(2, 0) + 16 * P(1, 0) - 30 * j.X + 16 * P(-1, 0) - P(-2, 0)) / (12 * hu * hu);
    j.Xvv = (-P(0, 2) + 16 * P(0, 1) - 30 * j.X + 16 * P(0, -1) - P(0, -2)) / (12 * hv * hv);
    auto Du = [&](double b) -> Vec3 {
      return (-P(2, b) + 8 * P(1, b) - 8 * P(-1, b) + P(-2, b)) / (12 * hu);
    };
    j.Xuv = (-Du(2) + 8 * Du(1) - 8 * Du(-1) + Du(-2)) / (12 * hv);
    return j;
  }

  SurfacePoint at(double u, double v) const { return surface_point(jet(u, v)); }

  Vec3 normal(double u, double v) const { return at(u, v).normal; }
  virtual double mean_curvature(double u, double v) const { return at(u, v).H; }
  virtual double gauss_curvature(double u, double v) const { return at(u, v).K; }

  /// Conformal patches have E = G, F = 0 with E = e^zeta.
  virtual bool conformal() const { return false; }
  virtual double conformal_factor(double u, double v) const {
    require(conformal(), "conformal_factor: patch is not conformal");
    return at(u, v).E;
  }
};

// ---------------------------------------------------------------------------
// Standard patches with closed-form jets

/// The plane z = 0 over [u0,u1] x [v0,v1].
class PlanePatch final : public ParamPatch {
 public:
  explicit PlanePatch(Domain d = {}) : d_(d) {}
  Domain domain() const override { return d_; }
  Vec3 position(double u, double v) const override { return {u, v, 0.0}; }
  PatchJet jet(double u, double v) const override {
    return {position(u, v), Vec3::UnitX(), Vec3::UnitY(), Vec3::Zero(), Vec3::Zero(), Vec3::Zero()};
  }
  bool conformal() const override { return true; }

 private:
  Domain d_;
};

/// Flat disk of radius R in polar coordinates (r, phi), normal +z.
class DiskPatch final : public ParamPatch {
 public:
  explicit DiskPatch(double radius = 1.0) : R_(radius) {
    require(radius > 0.0, "DiskPatch: radius must be > 0");
  }
  double radius() const { return R_; }
  Domain domain() const override { return {0.0, R_, 0.0, 2 * pi}; }
  Vec3 position(double r, double p) const override {
    return {r * std::cos(p), r * std::sin(p), 0.0};
  }
  PatchJet jet(double r, double p) const override {
    const double c = std::cos(p), s = std::sin(p);
    return {{r * c, r * s, 0}, {c, s, 0}, {-r * s, r * c, 0},
            Vec3::Zero(), {-s, c, 0}, {-r * c, -r * s, 0}};
  }

 private:
  double R_;
};

/// Planar annulus e^{u0} <= r <= e^{u1} in log-polar (conformal) coordinates.
class PlanarAnnulusPatch final : public ParamPatch {
 public:
  PlanarAnnulusPatch(double r0, double r1) : u0_(std::log(r0)), u1_(std::log(r1)) {
    require(0.0 < r0 && r0 < r1, "PlanarAnnulusPatch: need 0 < r0 < r1");
  }
  Domain domain() const override { return {u0_, u1_, 0.0, 2 * pi}; }
  Vec3 position(double u, double v) const override {
    const double r = std::exp(u);
    return {r * std::cos(v), r * std::sin(v), 0.0};
  }
  PatchJet jet(double u, double v) const override {
    const double r = std::exp(u), c = std::cos(v), s = std::sin(v);
    const Vec3 X{r * c, r * s, 0};
    const Vec3 Xv{-r * s, r * c, 0};
    return {X, X, Xv, X, Xv, -X};
  }
  bool conformal() const override { return true; }
  double conformal_factor(double u, double) const override { return std::exp(2 * u); }

 private:
  double u0_, u1_;
};

/// Sphere of radius R in polar coordinates (theta from the north pole, phi),
/// outward normal; theta in [0, theta_max].
class SpherePatch final : public ParamPatch {
 public:
  explicit SpherePatch(double radius = 1.0, double theta_max = pi / 2)
      : R_(radius), tmax_(theta_max) {
    require(radius > 0.0 && theta_max > 0.0 && theta_max <= pi, "SpherePatch: bad extent");
  }
  Domain domain() const override { return {0.0, tmax_, 0.0, 2 * pi}; }
  Vec3 position(double t, double p) const override {
    return R_ * Vec3{std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)};
  }
  PatchJet jet(double t, double p) const override {
    const double st = std::sin(t), ct = std::cos(t), sp = std::sin(p), cp = std::cos(p);
    PatchJet j;
    j.X = R_ * Vec3{st * cp, st * sp, ct};
    j.Xu = R_ * Vec3{ct * cp, ct * sp, -st};
    j.Xv = R_ * Vec3{-st * sp, st * cp, 0};
    j.Xuu = -j.X;
    j.Xuv = R_ * Vec3{-ct * sp, ct * cp, 0};
    j.Xvv = R_ * Vec3{-st * cp, -st * sp, 0};
    return j;
  }

 private:
  double R_, tmax_;
};

// ---------------------------------------------------------------------------
// Curves in the parameter domain

/// A path lambda -> (u, v) over [t0, t1]. Derivatives default to fourth-order
/// differences of `at`; supply them when known in closed form.
struct UvPath {
  std::function<Vec2(double)> at;
  double t0 = 0.0, t1 = 1.0;
  bool closed = false;
  std::function<Vec2(double)> velocity;
  std::function<Vec2(double)> acceleration;

  Vec2 d1(double t) const {
    if (velocity) return velocity(t);
    const double h = 1e-3 * (t1 - t0);
    return (-at(t + 2 * h) + 8 * at(t + h) - 8 * at(t - h) + at(t - 2 * h)) / (12 * h);
  }
  Vec2 d2(double t) const {
    if (acceleration) return acceleration(t);
    const double h = 1e-3 * (t1 - t0);
    return (-at(t + 2 * h) + 16 * at(t + h) - 30 * at(t) + 16 * at(t - h) - at(t - 2 * h)) /
           (12 * h * h);
  }

  /// u = const, v running from v0 to v1 (reverse traversal when v1 < v0).
  static UvPath v_line(double u, double v0, double v1, bool closed) {
    UvPath p;
    const double dir = v1 >= v0 ? 1.0 : -1.0;
    p.t0 = 0.0;
    p.t1 = std::abs(v1 - v0);
    p.closed = closed;
    p.at = [=](double t) { return Vec2(u, v0 + dir * t); };
    p.velocity = [=](double) { return Vec2(0.0, dir); };
    p.acceleration = [](double) { return Vec2(0.0, 0.0); };
    return p;
  }
  /// v = const, u running from u0 to u1.
  static UvPath u_line(double v, double u0, double u1, bool closed) {
    UvPath p;
    const double dir = u1 >= u0 ? 1.0 : -1.0;
    p.t0 = 0.0;
    p.t1 = std::abs(u1 - u0);
    p.closed = closed;
    p.at = [=](double t) { return Vec2(u0 + dir * t, v); };
    p.velocity = [=](double) { return Vec2(dir, 0.0); };
    p.acceleration = [](double) { return Vec2(0.0, 0.0); };
    return p;
  }
};

/// Everything the boundary audits need at one point of a surface curve.
struct BoundaryPoint {
  double lambda = 0.0;
  double speed = 0.0;  // |dC/dlambda|
  Vec2 uv, duv;
  Vec2 n_uv;  // co-normal in parameter coordinates
  Vec3 X, T, nu, n;
  double kappa_g = 0.0, kappa_n = 0.0, tau_g = 0.0, theta = 0.0;
  double K = 0.0, H = 0.0;
  double E = 0.0;  // first fundamental form, for conformal factors
};

/// Darboux data of the surface curve X(path(lambda)) at one parameter.
/// tau_g = II(T, n), which equals -nu' . n.
inline BoundaryPoint boundary_point(const ParamPatch& patch, const UvPath& path, double lambda) {
  BoundaryPoint b;
  b.lambda = lambda;
  b.uv = path.at(lambda);
  b.duv = path.d1(lambda);
  const Vec2 dd = path.d2(lambda);
  const PatchJet j = patch.jet(b.uv.x(), b.uv.y());
  const SurfacePoint sp = surface_point(j);
  const double du = b.duv.x(), dv = b.duv.y();
  const Vec3 Cl = j.Xu * du + j.Xv * dv;
  const Vec3 Cll = j.Xuu * du * du + 2 * j.Xuv * du * dv + j.Xvv * dv * dv + j.Xu * dd.x() +
                   j.Xv * dd.y();
  b.speed = Cl.norm();
  require(b.speed > 0.0, "boundary curve has zero speed");
  b.X = j.X;
  b.T = Cl / b.speed;
  const Vec3 Tp = (Cll - Cll.dot(b.T) * b.T) / (b.speed * b.speed);
  b.nu = sp.normal;
  b.n = b.T.cross(b.nu);
  b.kappa_g = kGeodesicCurvatureSign * Tp.dot(b.n);
  b.kappa_n = Tp.dot(b.nu);

  // Tangent vectors in parameter coordinates via the inverse metric.
  Eigen::Matrix2d g;
  g << sp.E, sp.F, sp.F, sp.G;
  const Eigen::Matrix2d ginv = g.inverse();
  auto to_uv = [&](const Vec3& w) -> Vec2 { return ginv * Vec2(w.dot(j.Xu), w.dot(j.Xv)); };
  const Vec2 Tuv = to_uv(b.T);
  b.n_uv = to_uv(b.n);
  Eigen::Matrix2d II;
  II << sp.e, sp.f, sp.f, sp.g;
  b.tau_g = Tuv.dot(II * b.n_uv);

  const double kt = Tp.norm();
  if (kt > 1e-14) {
    const Vec3 N = Tp / kt;
    b.theta = std::atan2(b.n.dot(N), b.nu.dot(N));
  }
  b.K = sp.K;
  b.H = sp.H;
  b.E = sp.E;
  return b;
}

/// Samples `count + 1` points uniformly in lambda (the last repeats the first
/// on closed paths).
inline std::vector<BoundaryPoint> boundary_points(const ParamPatch& patch, const UvPath& path,
                                                  int count) {
  require(count >= 2, "boundary_points: need >= 2 intervals");
  std::vector<BoundaryPoint> pts;
  pts.reserve(count + 1);
  const double h = (path.t1 - path.t0) / count;
  for (int i = 0; i <= count; ++i)
    pts.push_back(boundary_point(patch, path, i == count ? path.t1 : path.t0 + i * h));
  return pts;
}

/// Darboux data along a curve in the patch domain, sampled uniformly in the
/// path parameter with spacing at most `step`. Arc length is accumulated by
/// Simpson's rule with midpoint speeds.
inline DarbouxField darboux_from_patch(const ParamPatch& patch, const UvPath& path,
                                       double step) {
  const int n = step_count(path.t1 - path.t0, step);
  const double h = (path.t1 - path.t0) / n;
  const auto pts = boundary_points(patch, path, n);
  DarbouxField out;
  out.closed = path.closed;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    if (i > 0) {
      const double mid = boundary_point(patch, path, path.t0 + (i - 0.5) * h).speed;
      s += h / 6.0 * (pts[i - 1].speed + 4 * mid + pts[i].speed);
    }
    const auto& b = pts[i];
    out.samples.push_back({s, b.kappa_g, b.kappa_n, b.tau_g, b.theta});
  }
  out.length = s;
  return out;
}

}  // namespace plateau::geom
