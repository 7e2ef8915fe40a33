#pragma once
// Helicoid X(r, th) = (r cos th, r sin th, a th + b) and its critical
// annuli between two r = const helices.

#include <cmath>
#include <optional>

#include "plateau/geom/patch.hpp"
#include "plateau/params.hpp"

namespace plateau::bjorling {

/// Darboux data of the helix r = const on the helicoid. kappa_g is given for
/// traversal with increasing th and the normal Xr x Xth; reversing the
/// traversal flips its sign, tau_g is unchanged.
struct HelixDarboux {
  double kappa_g = 0.0;
  double kappa_n = 0.0;
  double tau_g = 0.0;
};

inline HelixDarboux helicoid_helix_data(double a, double r) {
  const double q = a * a + r * r;
  return {-r / q, 0.0, -a / q};
}

/// Parameterized by (r, th) or, in conformal form, by (u, th) with
/// r = |a| sinh u and conformal factor a^2 cosh^2 u.
class HelicoidPatch final : public geom::ParamPatch {
 public:
  HelicoidPatch(double a, double b, double r0, double r1, double theta_max, bool conformal = false)
      : a_(a), b_(b), r0_(r0), r1_(r1), tmax_(theta_max), conformal_(conformal) {
    require(a != 0.0, "helicoid: a must be nonzero");
    require(r0 > 0.0 && r0 < r1, "helicoid: need 0 < r0 < r1");
    require(theta_max > 0.0, "helicoid: theta_max must be > 0");
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double r0() const { return r0_; }
  double r1() const { return r1_; }
  double theta_max() const { return tmax_; }

  double u_of(double r) const { return std::asinh(r / std::abs(a_)); }
  double r_of(double u) const { return conformal_ ? std::abs(a_) * std::sinh(u) : u; }

  geom::Domain domain() const override {
    if (conformal_) return {u_of(r0_), u_of(r1_), 0.0, tmax_};
    return {r0_, r1_, 0.0, tmax_};
  }

  Vec3 position(double u, double th) const override {
    const double r = r_of(u);
    return {r * std::cos(th), r * std::sin(th), a_ * th + b_};
  }

  geom::PatchJet jet(double u, double th) const override {
    const double c = std::cos(th), s = std::sin(th);
    const double r = r_of(u);
    const double r1 = conformal_ ? std::abs(a_) * std::cosh(u) : 1.0;
    const double r2 = conformal_ ? r : 0.0;
    geom::PatchJet j;
    j.X = {r * c, r * s, a_ * th + b_};
    j.Xu = r1 * Vec3{c, s, 0};
    j.Xv = {-r * s, r * c, a_};
    j.Xuu = r2 * Vec3{c, s, 0};
    j.Xuv = r1 * Vec3{-s, c, 0};
    j.Xvv = {-r * c, -r * s, 0};
    return j;
  }

  double mean_curvature(double, double) const override { return 0.0; }
  double gauss_curvature(double u, double) const override {
    const double r = r_of(u), q = a_ * a_ + r * r;
    return -a_ * a_ / (q * q);
  }

  bool conformal() const override { return conformal_; }
  double conformal_factor(double u, double th) const override {
    require(conformal_, "conformal_factor: patch is not in conformal form");
    (void)th;
    const double ch = std::cosh(u);
    return a_ * a_ * ch * ch;
  }

  /// Outer helix traversed with increasing th, inner one backwards: the
  /// positively oriented boundary of the strip.
  geom::UvPath outer_path() const {
    const auto d = domain();
    return geom::UvPath::v_line(d.u1, 0.0, tmax_, false);
  }
  geom::UvPath inner_path() const {
    const auto d = domain();
    return geom::UvPath::v_line(d.u0, tmax_, 0.0, false);
  }

  /// Area of the full strip, closed form.
  double area() const {
    auto F = [&](double r) {
      const double A = std::abs(a_);
      return 0.5 * (r * std::sqrt(a_ * a_ + r * r) + a_ * a_ * std::asinh(r / A));
    };
    return tmax_ * (F(r1_) - F(r0_));
  }

 private:
  double a_, b_, r0_, r1_, tmax_;
  bool conformal_;
};

/// How kappa_g signs are assigned to the two helices in the fit.
/// `same_sign`: kappa_g = sheet * r / (a^2 + r^2) on both (the boundary
/// system's sheet reading). `oriented`: signs of the positively oriented
/// annulus with normal sheet * (Xr x Xth), i.e. +r0/.. on the inner helix and
/// -r1/.. on the outer one for sheet +.
enum class HelicoidFitMode { same_sign, oriented };

struct HelicoidFit {
  double sigma = 0.0;
  double eta = 0.0;
  bool valid = false;  // sigma > 0
  double kappa_g0 = 0.0, kappa_g1 = 0.0;
  double tau_g0 = 0.0, tau_g1 = 0.0;
  double determinant = 0.0;
};

namespace detail {
inline double helix_normal_rhs(double alpha, double beta, double kg, double tg) {
  return -(alpha * kg * kg - 2 * alpha * tg * tg - beta) * kg;
}
}  // namespace detail

/// Solves sigma - tau_g(ri)^2 eta = -(alpha kg(ri)^2 - 2 alpha tau_g(ri)^2 - beta) kg(ri)
/// at r0 and r1 for (sigma, eta).
inline HelicoidFit fit_helicoid_params(double a, double r0, double r1, double alpha, double beta,
                                       Sheet sheet, HelicoidFitMode mode = HelicoidFitMode::same_sign) {
  require(a != 0.0, "fit_helicoid_params: a must be nonzero");
  require(r0 > 0.0 && r1 > 0.0, "fit_helicoid_params: radii must be > 0");
  require(r0 != r1, "fit_helicoid_params: r0 == r1 makes the system singular");
  const double e = sign_of(sheet);
  const double q0 = a * a + r0 * r0, q1 = a * a + r1 * r1;
  HelicoidFit f;
  f.kappa_g0 = e * r0 / q0;
  f.kappa_g1 = (mode == HelicoidFitMode::oriented ? -e : e) * r1 / q1;
  f.tau_g0 = -a / q0;
  f.tau_g1 = -a / q1;
  const double t0 = f.tau_g0 * f.tau_g0, t1 = f.tau_g1 * f.tau_g1;
  f.determinant = t0 - t1;
  require(f.determinant != 0.0, "fit_helicoid_params: singular system");
  const double b0 = detail::helix_normal_rhs(alpha, beta, f.kappa_g0, f.tau_g0);
  const double b1 = detail::helix_normal_rhs(alpha, beta, f.kappa_g1, f.tau_g1);
  f.eta = (b0 - b1) / (t1 - t0);
  f.sigma = b0 + t0 * f.eta;
  f.valid = f.sigma > 0.0;
  return f;
}

/// Single helix: sigma from the normal equation with eta given.
inline HelicoidFit fit_helicoid_single(double a, double r, double alpha, double beta, double eta,
                                       Sheet sheet) {
  require(a != 0.0 && r > 0.0, "fit_helicoid_single: need a != 0 and r > 0");
  const double q = a * a + r * r;
  HelicoidFit f;
  f.kappa_g0 = f.kappa_g1 = sign_of(sheet) * r / q;
  f.tau_g0 = f.tau_g1 = -a / q;
  f.eta = eta;
  f.sigma = detail::helix_normal_rhs(alpha, beta, f.kappa_g0, f.tau_g0) + f.tau_g0 * f.tau_g0 * eta;
  f.valid = f.sigma > 0.0;
  return f;
}

/// Paths along the two helices, each traversed in the direction whose
/// kappa_g matches the fitted sign (tau_g does not depend on direction).
struct FittedPaths {
  geom::UvPath inner, outer;
};

inline FittedPaths fitted_paths(const HelicoidPatch& h, const HelicoidFit& f) {
  const auto d = h.domain();
  const double obs0 = helicoid_helix_data(h.a(), h.r0()).kappa_g;
  const double obs1 = helicoid_helix_data(h.a(), h.r1()).kappa_g;
  FittedPaths p;
  const bool fwd0 = (obs0 > 0) == (f.kappa_g0 > 0);
  const bool fwd1 = (obs1 > 0) == (f.kappa_g1 > 0);
  p.inner = fwd0 ? geom::UvPath::v_line(d.u0, 0.0, h.theta_max(), false)
                 : geom::UvPath::v_line(d.u0, h.theta_max(), 0.0, false);
  p.outer = fwd1 ? geom::UvPath::v_line(d.u1, 0.0, h.theta_max(), false)
                 : geom::UvPath::v_line(d.u1, h.theta_max(), 0.0, false);
  return p;
}

}  // namespace plateau::bjorling
