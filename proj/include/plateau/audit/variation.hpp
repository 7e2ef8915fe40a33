#pragma once
// First variation of the total geodesic curvature of the boundary,
//   d/de oint kappa_g ds = oint ([tau_g' nu + K n] . dC + kappa_n d_n(nu . dX)) ds,
// checked against centered differences of the perturbed patches X + e dX.

#include <array>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "plateau/audit/energy.hpp"
#include "plateau/audit/report.hpp"
#include "plateau/geom/patch.hpp"

namespace plateau::audit {

/// Ambient displacement field dX = F(X) with first and second derivatives,
/// so the perturbed patch has closed-form jets by the chain rule.
struct VariationField {
  std::function<Vec3(const Vec3&)> F;
  std::function<Mat3(const Vec3&)> DF;                  // DF(i, j) = dF_i / dx_j
  std::function<std::array<Mat3, 3>(const Vec3&)> D2F;  // D2F[i](j, k)
  std::string name;

  /// D2F[a, b] as a vector.
  Vec3 hess(const Vec3& p, const Vec3& a, const Vec3& b) const {
    const auto h = D2F(p);
    return {a.dot(h[0] * b), a.dot(h[1] * b), a.dot(h[2] * b)};
  }
};

inline VariationField translation_field(const Vec3& c) {
  return {[c](const Vec3&) { return c; }, [](const Vec3&) { return Mat3::Zero().eval(); },
          [](const Vec3&) { return std::array<Mat3, 3>{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()}; }, "translation"};
}

/// Infinitesimal rotation w x p.
inline VariationField rotation_field(const Vec3& w) {
  Mat3 W;
  W << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return {[W](const Vec3& p) { return (W * p).eval(); }, [W](const Vec3&) { return W; },
          [](const Vec3&) { return std::array<Mat3, 3>{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()}; }, "rotation"};
}

/// Normal bump sin^6(pi rho / R) e_z for rho = |(x, y)| < R, zero outside:
/// vanishes with its normal derivative on the circle rho = R.
inline VariationField disk_bump_field(double R) {
  auto prof = [R](double rho, int k) {
    // k-th derivative of sin^6(pi rho / R) in rho.
    const double w = pi / R, s = std::sin(w * rho), c = std::cos(w * rho);
    if (k == 0) return std::pow(s, 6);
    if (k == 1) return 6 * w * std::pow(s, 5) * c;
    return 6 * w * w * (5 * std::pow(s, 4) * c * c - std::pow(s, 6));
  };
  VariationField f;
  f.name = "disk_bump";
  f.F = [=](const Vec3& p) {
    const double rho = std::hypot(p.x(), p.y());
    return Vec3(0, 0, rho < R ? prof(rho, 0) : 0.0);
  };
  f.DF = [=](const Vec3& p) {
    Mat3 J = Mat3::Zero();
    const double rho = std::hypot(p.x(), p.y());
    if (rho < R && rho > 0) {
      const double d = prof(rho, 1) / rho;
      J(2, 0) = d * p.x();
      J(2, 1) = d * p.y();
    }
    return J;
  };
  f.D2F = [=](const Vec3& p) {
    std::array<Mat3, 3> h{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
    const double rho = std::hypot(p.x(), p.y());
    if (rho < R && rho > 0) {
      const double f1 = prof(rho, 1), f2 = prof(rho, 2);
      const Eigen::Vector2d e(p.x() / rho, p.y() / rho);
      const Eigen::Matrix2d H = f2 * e * e.transpose() + f1 / rho * (Eigen::Matrix2d::Identity() - e * e.transpose());
      h[2].topLeftCorner<2, 2>() = H;
    }
    return h;
  };
  return f;
}

/// Sum of `terms` random modes per component,
///   F_i(p) = sum a sin(k . p + phase),
/// with integer wave numbers (times `z_scale` along z, so fields can be made
/// periodic under a screw translation). Deterministic for a given seed.
inline VariationField random_trig_field(std::uint64_t seed, int terms = 3, int max_k = 2, double z_scale = 1.0,
                                        double amplitude = 0.3) {
  struct Mode {
    int comp;
    Vec3 k;
    double a, phase;
  };
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> kd(-max_k, max_k);
  std::uniform_real_distribution<double> ad(-amplitude, amplitude), pd(0.0, 2 * pi);
  auto modes = std::make_shared<std::vector<Mode>>();
  for (int i = 0; i < 3; ++i)
    for (int t = 0; t < terms; ++t) {
      const Vec3 k(kd(rng), kd(rng), kd(rng) * z_scale);
      const double a = ad(rng), ph = pd(rng);
      modes->push_back({i, k, a, ph});
    }
  VariationField f;
  f.name = "random_trig";
  f.F = [modes](const Vec3& p) {
    Vec3 out = Vec3::Zero();
    for (const auto& m : *modes) out(m.comp) += m.a * std::sin(m.k.dot(p) + m.phase);
    return out;
  };
  f.DF = [modes](const Vec3& p) {
    Mat3 J = Mat3::Zero();
    for (const auto& m : *modes) J.row(m.comp) += m.a * std::cos(m.k.dot(p) + m.phase) * m.k.transpose();
    return J;
  };
  f.D2F = [modes](const Vec3& p) {
    std::array<Mat3, 3> h{Mat3::Zero(), Mat3::Zero(), Mat3::Zero()};
    for (const auto& m : *modes) h[m.comp] -= m.a * std::sin(m.k.dot(p) + m.phase) * m.k * m.k.transpose();
    return h;
  };
  return f;
}

/// X + eps F(X) with chain-rule jets.
class PerturbedPatch final : public geom::ParamPatch {
 public:
  PerturbedPatch(std::shared_ptr<const geom::ParamPatch> base, VariationField field, double eps)
      : base_(std::move(base)), f_(std::move(field)), eps_(eps) {}

  geom::Domain domain() const override { return base_->domain(); }
  Vec3 position(double u, double v) const override {
    const Vec3 X = base_->position(u, v);
    return X + eps_ * f_.F(X);
  }
  geom::PatchJet jet(double u, double v) const override {
    const auto j = base_->jet(u, v);
    const Mat3 J = f_.DF(j.X);
    geom::PatchJet o;
    o.X = j.X + eps_ * f_.F(j.X);
    o.Xu = j.Xu + eps_ * J * j.Xu;
    o.Xv = j.Xv + eps_ * J * j.Xv;
    o.Xuu = j.Xuu + eps_ * (J * j.Xuu + f_.hess(j.X, j.Xu, j.Xu));
    o.Xuv = j.Xuv + eps_ * (J * j.Xuv + f_.hess(j.X, j.Xu, j.Xv));
    o.Xvv = j.Xvv + eps_ * (J * j.Xvv + f_.hess(j.X, j.Xv, j.Xv));
    return o;
  }

 private:
  std::shared_ptr<const geom::ParamPatch> base_;
  VariationField f_;
  double eps_;
};

struct VariationOptions {
  std::vector<double> epsilons{1e-2, 5e-3, 2.5e-3};
  int samples = 400;           // per boundary component (trapezoid, periodic integrands)
  double normal_step = 2e-3;   // co-normal stencil spacing, in arc length
  double rigid_tol = 1e-10;
  double min_order = 1.9;
  double tau_sign = 1.0;       // sign in front of tau_g' nu (kept as a switch for the sign study)
  double min_mismatch = 1e-12; // below this the order is not estimated
};

namespace detail {

/// Trapezoid sum of f(BoundaryPoint, lambda) ds over a path (periodic integrand).
template <class F>
double periodic_sum(const geom::ParamPatch& patch, const geom::UvPath& path, int n, F&& f) {
  const double h = (path.t1 - path.t0) / n;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lam = path.t0 + i * h;
    const auto bp = geom::boundary_point(patch, path, lam);
    acc += f(bp, lam) * bp.speed * h;
  }
  return acc;
}

inline void check_immersed(const geom::ParamPatch& patch, const geom::UvPath& path, int n) {
  const double h = (path.t1 - path.t0) / n;
  for (int i = 0; i < n; ++i) {
    const Vec2 uv = path.at(path.t0 + i * h);
    const auto j = patch.jet(uv.x(), uv.y());
    const double area = j.Xu.cross(j.Xv).norm();
    if (!(area > 1e-10 * std::max(1.0, j.Xu.squaredNorm() + j.Xv.squaredNorm())))
      throw Error(ErrorKind::step_size, "perturbed patch degenerates on the boundary; reduce epsilon");
  }
}

}  // namespace detail

/// Total geodesic curvature sum over all boundary components.
inline double total_geodesic_curvature(const geom::ParamPatch& patch, const std::vector<geom::UvPath>& paths,
                                       int samples) {
  double t = 0.0;
  for (const auto& p : paths) {
    detail::check_immersed(patch, p, samples);
    t += detail::periodic_sum(patch, p, samples, [](const geom::BoundaryPoint& b, double) { return b.kappa_g; });
  }
  return t;
}

/// Right-hand side of the variation formula.
inline double variation_formula(const Configuration& c, const VariationField& f, VariationOptions o = {}) {
  const auto& patch = *c.patch;
  double total = 0.0;
  for (const auto& path : c.boundary) {
    const int n = o.samples;
    const double h = (path.t1 - path.t0) / n;
    std::vector<geom::BoundaryPoint> pts;
    std::vector<double> lam(n), tg(n);
    for (int i = 0; i < n; ++i) {
      lam[i] = path.t0 + i * h;
      pts.push_back(geom::boundary_point(patch, path, lam[i]));
      tg[i] = pts[i].tau_g;
    }
    // tau_g' = (d tau_g / d lambda) / speed on the uniform periodic grid.
    auto tgp = differentiate(lam, tg, 1, true, path.t1 - path.t0);
    for (int i = 0; i < n; ++i) tgp[i] /= pts[i].speed;
    for (int i = 0; i < n; ++i) {
      const auto& b = pts[i];
      const Vec3 dC = f.F(b.X);
      // d_n (nu . dX): one-sided fourth-order stencil stepping inward along -n.
      auto psi = [&](double t) {
        const Vec2 uv = b.uv - t * b.n_uv;
        return patch.normal(uv.x(), uv.y()).dot(f.F(patch.position(uv.x(), uv.y())));
      };
      const double k = o.normal_step;
      const double dn =
          (25 * psi(0) - 48 * psi(k) + 36 * psi(2 * k) - 16 * psi(3 * k) + 3 * psi(4 * k)) / (12 * k);
      const double integrand = (o.tau_sign * tgp[i] * b.nu + b.K * b.n).dot(dC) + b.kappa_n * dn;
      total += integrand * b.speed * h;
    }
  }
  return total;
}

struct VariationResult {
  double formula = 0.0;
  std::vector<double> fd;        // centered differences per epsilon
  std::vector<double> mismatch;  // |fd - formula|
  std::vector<double> orders;    // log(m_i / m_{i+1}) / log(e_i / e_{i+1})
};

inline VariationResult geodesic_variation(const Configuration& c, const VariationField& f, VariationOptions o = {}) {
  detail::check_closed(c);
  require(o.epsilons.size() >= 2, "geodesic_variation: need >= 2 epsilons");
  for (std::size_t i = 1; i < o.epsilons.size(); ++i)
    require(o.epsilons[i] < o.epsilons[i - 1] && o.epsilons[i] > 0, "geodesic_variation: epsilons must decrease");
  VariationResult r;
  r.formula = variation_formula(c, f, o);
  for (double e : o.epsilons) {
    const PerturbedPatch plus(c.patch, f, e), minus(c.patch, f, -e);
    const double d = (total_geodesic_curvature(plus, c.boundary, o.samples) -
                      total_geodesic_curvature(minus, c.boundary, o.samples)) /
                     (2 * e);
    r.fd.push_back(d);
    r.mismatch.push_back(std::abs(d - r.formula));
  }
  for (std::size_t i = 0; i + 1 < r.mismatch.size(); ++i)
    r.orders.push_back(std::log(r.mismatch[i] / r.mismatch[i + 1]) / std::log(o.epsilons[i] / o.epsilons[i + 1]));
  return r;
}

/// With `expect_zero` (rigid motions, variations vanishing to first order on
/// the boundary) both sides are checked against zero; otherwise the observed
/// order of the mismatch is checked.
inline AuditReport geodesic_variation_check(const Configuration& c, const VariationField& f, bool expect_zero,
                                            VariationOptions o = {}) {
  const auto v = geodesic_variation(c, f, o);
  AuditReport rep;
  const double inf = std::numeric_limits<double>::infinity();
  rep.add("variation.formula", v.formula, v.formula, inf);
  for (std::size_t i = 0; i < v.fd.size(); ++i)
    rep.add("variation.mismatch" + std::to_string(i), v.fd[i], v.formula, expect_zero ? o.rigid_tol : inf, false,
            "eps " + fmt17(o.epsilons[i]));
  if (expect_zero) {
    rep.bound("variation.zero_formula", std::abs(v.formula), o.rigid_tol);
  } else {
    double worst = inf;
    for (double p : v.orders) worst = std::min(worst, p);
    const bool resolved = v.mismatch.back() > o.min_mismatch;
    rep.add("variation.order", resolved ? worst : 0.0, o.min_order, inf, false,
            resolved ? "" : "mismatch at roundoff level");
    auto& rec = rep.add("variation.order_ok", resolved && worst >= o.min_order ? 1.0 : 0.0, 1.0, 0.0);
    rec.note = "observed order " + fmt17(worst) + " >= " + fmt17(o.min_order);
  }
  return rep;
}

}  // namespace plateau::audit
