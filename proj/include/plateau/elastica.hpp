#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "plateau/geom/curve.hpp"
#include "plateau/numerics.hpp"
#include "plateau/params.hpp"

namespace plateau::elastica {

/// Q(k) = alpha k^3 - beta k + sigma; its real roots are the curvatures of
/// area-constrained elastic circles.
inline double circle_polynomial(const EnergyParams& p, double k) {
  return (p.alpha * k * k - p.beta) * k + p.sigma;
}

inline double circle_polynomial_scale(const EnergyParams& p, double k) {
  return std::abs(p.alpha) * std::abs(k * k * k) + std::abs(p.beta * k) + std::abs(p.sigma);
}

enum class CircleCase {
  single,       // discriminant < 0: one real root
  tangent,      // discriminant = 0: a simple and a double root
  three_roots,  // discriminant > 0: three distinct roots
};

inline const char* to_string(CircleCase c) {
  switch (c) {
    case CircleCase::single: return "single";
    case CircleCase::tangent: return "tangent";
    case CircleCase::three_roots: return "three_roots";
  }
  return "?";
}

struct CircleRoot {
  double kappa = 0.0;
  int multiplicity = 1;
  double residual = 0.0;  // |Q(kappa)|
};

struct CircleRoots {
  std::vector<CircleRoot> roots;  // ascending
  CircleCase kind = CircleCase::single;
  /// alpha (4 beta^3 - 27 alpha sigma^2), the cubic's discriminant divided by alpha.
  double discriminant = 0.0;
  std::size_t count() const { return roots.size(); }
};

namespace detail {

// Root of a monotone cubic on [lo, hi] with a sign change: Newton steps
// safeguarded by bisection, finished when the bracket cannot shrink.
inline double bracketed_root(const EnergyParams& p, double lo, double hi) {
  double flo = circle_polynomial(p, lo);
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    const double fx = circle_polynomial(p, x);
    if (fx == 0.0) return x;
    if ((fx < 0) == (flo < 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    const double dfx = 3 * p.alpha * x * x - p.beta;
    double nx = dfx != 0.0 ? x - fx / dfx : 0.5 * (lo + hi);
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (nx == x || hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
      return nx;
    x = nx;
  }
  return x;
}

}  // namespace detail

/// Real roots of Q with multiplicities. The count follows the sign of the
/// discriminant, treated as zero within a relative 1e-12.
inline CircleRoots circle_roots(const EnergyParams& p) {
  p.validate();
  if (p.alpha == 0.0)
    throw Error(ErrorKind::domain, "alpha = 0: circle roots degenerate, use the alpha-zero solution");

  CircleRoots out;
  out.discriminant = p.alpha * (4 * p.beta * p.beta * p.beta - 27 * p.alpha * p.sigma * p.sigma);
  const double disc_scale =
      std::abs(p.alpha) * (4 * std::abs(p.beta * p.beta * p.beta) + 27 * std::abs(p.alpha) * p.sigma * p.sigma);
  if (std::abs(out.discriminant) <= 1e-12 * disc_scale)
    out.kind = CircleCase::tangent;
  else
    out.kind = out.discriminant > 0 ? CircleCase::three_roots : CircleCase::single;

  // Monic form k^3 + a k + b, Cauchy bound on the roots.
  const double a = -p.beta / p.alpha, b = p.sigma / p.alpha;
  const double bound = 1.0 + std::max(std::abs(a), std::abs(b));
  auto sign = [&](double k) { return circle_polynomial(p, k) * (p.alpha > 0 ? 1.0 : -1.0); };

  std::vector<double> breaks{-bound};
  if (a < 0) {
    const double c = std::sqrt(-a / 3);
    breaks.push_back(-c);
    breaks.push_back(c);
  }
  breaks.push_back(bound);

  auto push = [&](double k, int mult) {
    out.roots.push_back({k, mult, std::abs(circle_polynomial(p, k))});
  };
  if (out.kind == CircleCase::tangent) {
    // The double root sits at the critical point where the monic cubic
    // touches zero; the simple root is on the other side.
    const double c = std::sqrt(std::max(0.0, -a / 3));
    const double dbl = (b > 0) ? c : -c;
    const double simple = -2 * dbl;  // roots sum to zero
    const double polished = std::abs(simple) > 0 ? detail::bracketed_root(
                                                       p, simple - 0.5 * std::abs(simple) - 1e-300,
                                                       simple + 0.5 * std::abs(simple) + 1e-300)
                                                 : simple;
    push(std::min(dbl, polished), dbl < polished ? 2 : 1);
    push(std::max(dbl, polished), dbl < polished ? 1 : 2);
    return out;
  }
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i], hi = breaks[i + 1];
    const double flo = sign(lo), fhi = sign(hi);
    if (flo == 0.0) {
      push(lo, 1);
    } else if ((flo < 0) != (fhi < 0) && fhi != 0.0) {
      push(detail::bracketed_root(p, lo, hi), 1);
    }
  }
  if (out.kind == CircleCase::three_roots && out.roots.size() != 3)
    throw Error(ErrorKind::accuracy, "circle_roots: discriminant and root count disagree");
  return out;
}

/// Constant of integration of the curvature equation:
/// d = k'^2 + k^4/4 - (beta/2alpha) k^2 + (sigma/alpha) k.
inline double first_integral_d(const EnergyParams& p, double kg, double kgp) {
  require(p.alpha != 0.0, "first_integral_d: alpha must be nonzero");
  return kgp * kgp + 0.25 * kg * kg * kg * kg - p.beta / (2 * p.alpha) * kg * kg + p.sigma / p.alpha * kg;
}

/// Right-hand side of 2 alpha k'' + (alpha k^2 - beta) k + sigma = 0.
inline double elastica_accel(const EnergyParams& p, double k) {
  return -((p.alpha * k * k - p.beta) * k + p.sigma) / (2 * p.alpha);
}

struct ElasticaSample {
  double s = 0.0;
  double kappa_g = 0.0;
  double kappa_g_prime = 0.0;
};

struct ElasticaSolution {
  EnergyParams params;
  std::vector<ElasticaSample> samples;
  double d = 0.0;
  std::optional<double> period;
  double max_d_drift = 0.0;  // max_s |d(s) - d(0)|
  double length = 0.0;
  double step = 0.0;  // actual uniform step used

  double relative_drift() const { return max_d_drift / std::max(1.0, std::abs(d)); }
  std::vector<double> kappa_g() const {
    std::vector<double> v;
    for (const auto& s : samples) v.push_back(s.kappa_g);
    return v;
  }
};

namespace detail {

using Planar = Eigen::Matrix<double, 5, 1>;  // k, k', x, y, phi

inline Planar planar_rhs(const EnergyParams& p, const Planar& y) {
  Planar d;
  d << y(1), elastica_accel(p, y(0)), std::cos(y(4)), std::sin(y(4)), -kGeodesicCurvatureSign * y(0);
  return d;
}

// Hermite interpolation of (k, k') on one step.
inline Vec2 hermite(const Vec2& y0, const Vec2& f0, const Vec2& y1, const Vec2& f1, double h, double t) {
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * f0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h * f1;
}

}  // namespace detail

/// RK4 integration of the curvature equation from (kg0, kgp0). The period is
/// the first return of the state through the section transversal to the flow
/// at the initial point; it is reported when the return lands within 1e-8.
inline ElasticaSolution elastica_integrate(const EnergyParams& p, double kg0, double kgp0, double length,
                                          double step) {
  p.validate();
  require(p.alpha != 0.0, "elastica_integrate: alpha must be nonzero");
  require(step > 0.0 && length > 0.0, "elastica_integrate: step and length must be positive");
  require(std::isfinite(kg0) && std::isfinite(kgp0), "elastica_integrate: non-finite initial data");

  const int n = step_count(length, step);
  const double h = length / n;
  ElasticaSolution sol;
  sol.params = p;
  sol.length = length;
  sol.step = h;
  sol.d = first_integral_d(p, kg0, kgp0);
  sol.samples.reserve(n + 1);
  sol.samples.push_back({0.0, kg0, kgp0});

  auto f = [&](const Vec2& y) { return Vec2(y(1), elastica_accel(p, y(0))); };
  const Vec2 y0(kg0, kgp0);
  const Vec2 f0 = f(y0);
  const double fnorm2 = f0.squaredNorm();
  auto section = [&](const Vec2& y) { return (y - y0).dot(f0); };

  Vec2 y = y0;
  double g_prev = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2 yn = rk4_step(f, y, h);
    const double s = (i + 1 == n) ? length : (i + 1) * h;
    if (!(std::abs(yn(0)) <= 1e6) || !std::isfinite(yn(1)))
      throw Error(ErrorKind::divergence, "kappa_g blew up at s=" + fmt17(s), s);
    sol.samples.push_back({s, yn(0), yn(1)});
    sol.max_d_drift = std::max(sol.max_d_drift, std::abs(first_integral_d(p, yn(0), yn(1)) - sol.d));

    if (!sol.period && fnorm2 > 0.0 && i > 0) {
      const double g = section(yn);
      const double scale = std::max(1.0, y0.norm());
      if (g_prev < 0.0 && g >= 0.0 && (yn - y0).norm() < 1e-2 * scale) {
        // Refine the crossing on the Hermite interpolant by bisection.
        const Vec2 fa = f(y), fb = f(yn);
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (section(detail::hermite(y, fa, yn, fb, h, mid)) < 0.0) lo = mid;
          else hi = mid;
        }
        const double t = 0.5 * (lo + hi);
        const Vec2 yc = detail::hermite(y, fa, yn, fb, h, t);
        if ((yc - y0).norm() <= 1e-8 * scale) sol.period = s - h + t * h;
      }
      g_prev = g;
    } else if (i == 0) {
      g_prev = section(yn);
    }
    y = yn;
  }
  return sol;
}

/// Total geodesic curvature of the solution, by Simpson's rule.
inline double total_geodesic_curvature(const ElasticaSolution& sol) {
  return simpson(sol.kappa_g(), sol.step);
}

/// Turning number -(1/2pi) oint kappa_g ds of the planar curve.
inline double turning_number(const ElasticaSolution& sol) {
  return -kGeodesicCurvatureSign * total_geodesic_curvature(sol) / (2 * pi);
}

/// Planar curve in z = 0 with x' = cos phi, y' = sin phi, phi' = -kappa_g,
/// starting at the origin along +x. Frenet data: N = z x T, B = +z and the
/// signed curvature kappa = -kappa_g, tau = 0. The state is re-integrated
/// with the solution's step so kappa_g matches the samples exactly.
inline geom::ArcCurve elastica_to_curve(const ElasticaSolution& sol, double closure_tol = 1e-6) {
  require(!sol.samples.empty() && sol.step > 0.0, "elastica_to_curve: empty solution");
  for (const auto& s : sol.samples)
    require(std::isfinite(s.kappa_g) && std::isfinite(s.kappa_g_prime), "elastica_to_curve: non-finite samples");
  const EnergyParams& p = sol.params;
  detail::Planar y;
  y << sol.samples[0].kappa_g, sol.samples[0].kappa_g_prime, 0.0, 0.0, 0.0;
  auto rhs = [&](const detail::Planar& st) { return detail::planar_rhs(p, st); };

  geom::ArcCurve c;
  c.length = sol.length;
  auto record = [&](const detail::Planar& st, double s) {
    geom::CurveSample cs;
    cs.s = s;
    cs.position = {st(2), st(3), 0.0};
    cs.T = {std::cos(st(4)), std::sin(st(4)), 0.0};
    cs.N = {-std::sin(st(4)), std::cos(st(4)), 0.0};
    cs.B = Vec3::UnitZ();
    cs.kappa = -kGeodesicCurvatureSign * st(0);
    cs.tau = 0.0;
    c.samples.push_back(cs);
  };
  record(y, 0.0);
  for (std::size_t i = 1; i < sol.samples.size(); ++i) {
    y = rk4_step(rhs, y, sol.step);
    record(y, sol.samples[i].s);
  }
  const auto& a = c.samples.front();
  const auto& b = c.samples.back();
  c.closure_gap = (b.position - a.position).norm();
  c.closure_tolerance = closure_tol;
  c.closed = c.closure_gap <= closure_tol && (b.T - a.T).norm() <= closure_tol;
  return c;
}

/// Max over interior samples of |2 alpha k'' + (alpha k^2 - beta) k + sigma|,
/// with k'' from high-order differences of the sampled k' (independent of
/// the integrator's right-hand side).
inline double ode_residual(const ElasticaSolution& sol) {
  std::vector<double> s, kp;
  for (const auto& x : sol.samples) {
    s.push_back(x.s);
    kp.push_back(x.kappa_g_prime);
  }
  if (s.size() < 8) return 0.0;
  const auto kpp = differentiate(s, kp, 1, false, 0.0, 7);
  double r = 0.0;
  const EnergyParams& p = sol.params;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double k = sol.samples[i].kappa_g;
    r = std::max(r, std::abs(2 * p.alpha * kpp[i] + (p.alpha * k * k - p.beta) * k + p.sigma));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Buckled rings

struct RingGuess {
  double kappa_g0 = 0.0;          // curvature at a turning point (kappa_g' = 0)
  std::optional<double> period;   // detected from kappa_g0 when absent
  int lobes = 1;                  // number of curvature periods in the closed ring
};

struct RingTolerances {
  double shooting = 1e-11;  // Newton tolerance on the two shooting residuals
  double closure = 1e-6;
  double ode = 1e-8;
  double step = 1e-3;
  int max_iterations = 40;
};

struct RingResult {
  geom::ArcCurve curve;
  ElasticaSolution solution;
  int iterations = 0;
  bool circular = false;
  int lobes = 1;
  double period = 0.0;
  double periodicity_residual = 0.0;  // |kappa_g'(P)| and |kappa_g(P) - kappa_g0|
  double curvature_residual = 0.0;    // |oint kappa_g + 2 pi n|
  double closure_gap = 0.0;
  double ode_residual = 0.0;
  double turning_number = 0.0;
};

namespace detail {

struct Shot {
  double kp_end = 0.0, k_end = 0.0, phi_end = 0.0;
};

inline Shot shoot_period(const EnergyParams& p, double k0, double P, double step) {
  const int n = step_count(P, step);
  const double h = P / n;
  Planar y;
  y << k0, 0.0, 0.0, 0.0, 0.0;
  auto rhs = [&](const Planar& st) { return planar_rhs(p, st); };
  for (int i = 0; i < n; ++i) {
    y = rk4_step(rhs, y, h);
    if (!(std::abs(y(0)) <= 1e6)) throw Error(ErrorKind::divergence, "ring shooting diverged", i * h);
  }
  return {y(1), y(0), y(4)};
}

}  // namespace detail

/// Closed area-constrained elastica ("buckled ring") with the given turning
/// number made of `guess.lobes` curvature periods. Starting at a turning
/// point, Newton iteration on (kappa_g0, period) drives kappa_g'(P) to zero
/// and the per-period rotation to -2 pi n / lobes. A circle root with the
/// matching orientation is returned immediately.
inline RingResult buckled_ring_shoot(const EnergyParams& p, int turning, const RingGuess& guess,
                                     const RingTolerances& tol = {}) {
  p.validate();
  require(p.alpha != 0.0, "buckled_ring_shoot: alpha must be nonzero");
  require(turning != 0, "buckled_ring_shoot: turning number must be nonzero");
  require(guess.lobes >= 1, "buckled_ring_shoot: lobes must be >= 1");
  require(std::isfinite(guess.kappa_g0), "buckled_ring_shoot: non-finite guess");

  RingResult res;
  res.lobes = guess.lobes;
  const double target = -2 * pi * turning / kGeodesicCurvatureSign;  // oint kappa_g
  double k0 = guess.kappa_g0;

  auto finish = [&](double kstart, double total_length) {
    res.solution = elastica_integrate(p, kstart, 0.0, total_length, tol.step);
    res.curve = elastica_to_curve(res.solution, tol.closure);
    res.closure_gap = res.curve.closure_gap;
    res.turning_number = turning_number(res.solution);
    res.curvature_residual = std::abs(total_geodesic_curvature(res.solution) - target);
    res.ode_residual = ode_residual(res.solution);
  };

  // Circle branch.
  if (std::abs(circle_polynomial(p, k0)) <= 1e-12 * circle_polynomial_scale(p, k0)) {
    if (k0 == 0.0 || (k0 < 0) != (target < 0))
      throw Error(ErrorKind::precondition, "circle of curvature " + fmt17(k0) +
                                               " cannot have turning number " + std::to_string(turning));
    res.circular = true;
    res.lobes = 1;
    res.period = target / k0;
    finish(k0, res.period);
    return res;
  }

  double P = 0.0;
  if (guess.period) {
    P = *guess.period;
  } else {
    const auto probe = elastica_integrate(p, k0, 0.0, 400.0, tol.step);
    if (!probe.period)
      throw Error(ErrorKind::non_convergence, "no curvature period found from kappa_g0=" + fmt17(k0));
    P = *probe.period;
  }
  require(P > 0.0, "buckled_ring_shoot: period must be positive");
  const double per_period = target / guess.lobes;

  auto residual = [&](double k, double per) {
    const auto sh = detail::shoot_period(p, k, per, tol.step);
    // phi' = -sign kappa_g, so oint kappa_g over one period = -phi(P)/sign.
    return Vec2(sh.kp_end, -sh.phi_end / kGeodesicCurvatureSign - per_period);
  };

  Vec2 r = residual(k0, P);
  double best = r.norm();
  int it = 0;
  for (; it < tol.max_iterations && r.norm() > tol.shooting; ++it) {
    const double hk = 1e-6 * std::max(1.0, std::abs(k0)), hp = 1e-6 * std::max(1.0, P);
    Eigen::Matrix2d J;
    J.col(0) = (residual(k0 + hk, P) - residual(k0 - hk, P)) / (2 * hk);
    J.col(1) = (residual(k0, P + hp) - residual(k0, P - hp)) / (2 * hp);
    Vec2 dx = J.colPivHouseholderQr().solve(-r);
    if (!dx.allFinite())
      throw Error(ErrorKind::non_convergence, "singular shooting Jacobian; best residual " + fmt17(best));
    // Backtrack to keep the period positive and the residual decreasing.
    double lam = 1.0;
    Vec2 rn;
    for (int b = 0; b < 30; ++b, lam *= 0.5) {
      if (P + lam * dx(1) <= 0.0) continue;
      try {
        rn = residual(k0 + lam * dx(0), P + lam * dx(1));
      } catch (const Error&) {
        continue;
      }
      if (rn.norm() < r.norm() || lam < 1e-6) break;
    }
    k0 += lam * dx(0);
    P += lam * dx(1);
    r = rn;
    best = std::min(best, r.norm());
  }
  res.iterations = it;
  if (!(r.norm() <= tol.shooting * 1e3))
    throw Error(ErrorKind::non_convergence,
                "buckled ring shooting did not converge: best residual " + fmt17(best) +
                    ", periodicity " + fmt17(std::abs(r(0))) + ", rotation " + fmt17(std::abs(r(1))));

  res.period = P;
  finish(k0, P * guess.lobes);
  const auto& last = res.solution.samples.back();
  res.periodicity_residual = std::max(std::abs(last.kappa_g_prime), std::abs(last.kappa_g - k0));
  double kmin = k0, kmax = k0;
  for (const auto& s : res.solution.samples) {
    kmin = std::min(kmin, s.kappa_g);
    kmax = std::max(kmax, s.kappa_g);
  }
  res.circular = (kmax - kmin) <= 1e-8 * std::max(1.0, std::abs(k0));
  if (res.closure_gap > tol.closure)
    throw Error(ErrorKind::non_convergence,
                "shooting converged but the ring does not close: gap " + fmt17(res.closure_gap));
  return res;
}

}  // namespace plateau::elastica
