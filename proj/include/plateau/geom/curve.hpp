#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "plateau/numerics.hpp"
#include "plateau/params.hpp"

namespace plateau::geom {

struct CurveSample {
  double s = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 T = Vec3::UnitX(), N = Vec3::UnitY(), B = Vec3::UnitZ();
  double kappa = 0.0;
  double tau = 0.0;
};

/// Arc-length sampled space curve with its Frenet frame. kappa is signed
/// relative to the stored N: the frame is continued through curvature zeros
/// instead of flipping, so kappa < 0 past an inflection.
struct ArcCurve {
  std::vector<CurveSample> samples;
  double length = 0.0;
  bool closed = false;
  double closure_gap = 0.0;        // |C(L) - C(0)|
  double closure_tolerance = 0.0;  // tolerance the flag was tested against

  std::size_t size() const { return samples.size(); }

  double max_frame_defect() const {
    double d = 0.0;
    for (const auto& c : samples) {
      d = std::max({d, std::abs(c.T.norm() - 1.0), std::abs(c.N.norm() - 1.0),
                    std::abs(c.B.norm() - 1.0), std::abs(c.T.dot(c.N)), std::abs(c.T.dot(c.B)),
                    std::abs(c.N.dot(c.B)), (c.B - c.T.cross(c.N)).norm()});
    }
    return d;
  }
};

/// Initial placement for curve reconstruction.
struct Frame {
  Vec3 origin = Vec3::Zero();
  Vec3 T = Vec3::UnitX();
  Vec3 N = Vec3::UnitY();
  Vec3 B = Vec3::UnitZ();
};

using ScalarFn = std::function<double(double)>;

/// Integrates the Frenet equations with fixed-step RK4 and re-orthonormalizes
/// the frame after every step. The closed flag requires both position and
/// frame to return to their initial values within `closure_tol`.
inline ArcCurve frenet_reconstruct(const ScalarFn& kappa, const ScalarFn& tau, double length,
                                   double step, const Frame& initial = {},
                                   double closure_tol = 1e-8) {
  require(step > 0.0, "frenet_reconstruct: step must be > 0");
  require(length > 0.0, "frenet_reconstruct: length must be > 0");
  const int n = step_count(length, step);
  const double h = length / n;

  using State = Eigen::Matrix<double, 12, 1>;
  auto pack = [](const Vec3& C, const Vec3& T, const Vec3& N, const Vec3& B) {
    State y;
    y << C, T, N, B;
    return y;
  };

  auto eval = [&](const ScalarFn& f, double s, const char* name) {
    const double v = f(s);
    if (!std::isfinite(v))
      throw Error(ErrorKind::integration_failure,
                  std::string("non-finite ") + name + " at s=" + fmt17(s), s);
    return v;
  };

  ArcCurve out;
  out.length = length;
  out.samples.reserve(n + 1);

  Vec3 T0 = initial.T, N0 = initial.N, B0 = initial.B;
  orthonormalize(T0, N0, B0);
  State y = pack(initial.origin, T0, N0, B0);

  double s = 0.0;
  auto record = [&](const State& st, double at) {
    CurveSample c;
    c.s = at;
    c.position = st.segment<3>(0);
    c.T = st.segment<3>(3);
    c.N = st.segment<3>(6);
    c.B = st.segment<3>(9);
    c.kappa = eval(kappa, at, "kappa");
    c.tau = eval(tau, at, "tau");
    out.samples.push_back(c);
  };
  record(y, 0.0);

  for (int i = 0; i < n; ++i) {
    // The RHS depends on s; carry it through a small closure per stage.
    double stage_s = s;
    auto rhs_at = [&](double at) {
      return [&, at](const State& st) {
        const double k = eval(kappa, at, "kappa");
        const double t = eval(tau, at, "tau");
        const Vec3 T = st.segment<3>(3), N = st.segment<3>(6), B = st.segment<3>(9);
        State d;
        d << T, k * N, -k * T + t * B, -t * N;
        return d;
      };
    };
    const State k1 = rhs_at(stage_s)(y);
    const State k2 = rhs_at(stage_s + h / 2)(State(y + h / 2 * k1));
    const State k3 = rhs_at(stage_s + h / 2)(State(y + h / 2 * k2));
    const State k4 = rhs_at(stage_s + h)(State(y + h * k3));
    y += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);

    Vec3 T = y.segment<3>(3), N = y.segment<3>(6), B = y.segment<3>(9);
    orthonormalize(T, N, B);
    y.segment<3>(3) = T;
    y.segment<3>(6) = N;
    y.segment<3>(9) = B;
    s = (i + 1 == n) ? length : (i + 1) * h;
    record(y, s);
  }

  const auto& first = out.samples.front();
  const auto& last = out.samples.back();
  out.closure_gap = (last.position - first.position).norm();
  out.closure_tolerance = closure_tol;
  const double frame_gap = std::max({(last.T - first.T).norm(), (last.N - first.N).norm(),
                                     (last.B - first.B).norm()});
  out.closed = out.closure_gap <= closure_tol && frame_gap <= closure_tol;
  return out;
}

// ---------------------------------------------------------------------------

struct DarbouxSample {
  double s = 0.0;
  double kappa_g = 0.0;
  double kappa_n = 0.0;
  double tau_g = 0.0;
  double theta = 0.0;  // in [-pi, pi]
};

/// Darboux invariants along a surface boundary component.
struct DarbouxField {
  std::vector<DarbouxSample> samples;
  double length = 0.0;
  /// Periodic data (closed in the parameter domain). When closed, the last
  /// sample sits at s = length and repeats the first.
  bool closed = false;

  std::size_t size() const { return samples.size(); }

  std::vector<double> column(double DarbouxSample::*m) const {
    std::vector<double> v;
    v.reserve(samples.size());
    for (const auto& d : samples) v.push_back(d.*m);
    return v;
  }
};

/// Darboux data from a Frenet frame and a contact angle theta(s):
/// kappa_g = kappa sin(theta), kappa_n = kappa cos(theta), tau_g = theta' - tau,
/// with theta' from centered differences.
inline DarbouxField darboux_from_frenet(const ArcCurve& curve, const ScalarFn& theta) {
  require(curve.size() >= 2, "darboux_from_frenet: curve needs >= 2 samples");
  DarbouxField out;
  out.length = curve.length;
  out.closed = curve.closed;
  const double h = 1e-5 * std::max(1.0, curve.length);
  for (const auto& c : curve.samples) {
    const double th = theta(c.s);
    const double dth = (theta(c.s + h) - theta(c.s - h)) / (2 * h);
    DarbouxSample d;
    d.s = c.s;
    d.kappa_g = c.kappa * std::sin(th);
    d.kappa_n = c.kappa * std::cos(th);
    d.tau_g = dth - c.tau;
    d.theta = std::remainder(th, 2 * pi);
    out.samples.push_back(d);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct CurvatureEstimate {
  double kappa = 0.0;
  double tau = 0.0;
  bool degenerate = false;  // collinear window: kappa, tau reported as 0
};

/// Curvature and torsion of an ordered point sequence from local
/// least-squares quintic fits in the cumulative chord-length parameter over
/// 7-sample windows (centered, wrapping when closed). Fewer than 7 points
/// shrink the window to all points and the degree to points - 1.
inline std::vector<CurvatureEstimate> estimate_curvature_torsion(std::span<const Vec3> points,
                                                                 bool closed) {
  const int n = int(points.size());
  require(n >= 5, "estimate_curvature_torsion: need at least 5 points");
  for (int i = 0; i + 1 < n; ++i)
    require((points[i + 1] - points[i]).norm() > 0.0,
            "estimate_curvature_torsion: consecutive points must be distinct");

  const int window = std::min(7, n);
  const int degree = std::min(5, window - 1);
  const int half = window / 2;

  // Cumulative chord parameter, extended periodically when closed.
  std::vector<double> t(n, 0.0);
  for (int i = 1; i < n; ++i) t[i] = t[i - 1] + (points[i] - points[i - 1]).norm();
  const double period = closed ? t[n - 1] + (points[0] - points[n - 1]).norm() : 0.0;

  std::vector<CurvatureEstimate> out(n);
  Eigen::MatrixXd V(window, degree + 1);
  Eigen::MatrixXd P(window, 3);
  for (int i = 0; i < n; ++i) {
    int start = i - half;
    if (!closed) start = std::clamp(start, 0, n - window);
    double scale = 0.0;
    for (int j = 0; j < window; ++j) {
      int k = start + j;
      double shift = 0.0;
      if (closed) {
        while (k < 0) { k += n; shift -= period; }
        while (k >= n) { k -= n; shift += period; }
      }
      const double x = t[k] + shift - t[i];
      scale = std::max(scale, std::abs(x));
      P.row(j) = (points[k] - points[i]).transpose();
      V(j, 0) = x;  // temporarily store abscissa
    }
    // Scaled Vandermonde for conditioning.
    for (int j = 0; j < window; ++j) {
      const double x = V(j, 0) / scale;
      double p = 1.0;
      for (int d = 0; d <= degree; ++d) {
        V(j, d) = p;
        p *= x;
      }
    }
    const Eigen::MatrixXd coef = V.colPivHouseholderQr().solve(P);
    const Vec3 d1 = coef.row(1).transpose() / scale;
    const Vec3 d2 = 2.0 * coef.row(2).transpose() / (scale * scale);
    const Vec3 d3 = degree >= 3 ? Vec3(6.0 * coef.row(3).transpose() / (scale * scale * scale))
                                : Vec3::Zero();
    const Vec3 c12 = d1.cross(d2);
    const double sp = d1.norm();
    const double cn = c12.norm();
    CurvatureEstimate e;
    if (cn <= 1e-12 * sp * sp * sp / scale) {
      e.degenerate = true;
    } else {
      e.kappa = cn / (sp * sp * sp);
      e.tau = c12.dot(d3) / (cn * cn);
    }
    out[i] = e;
  }
  return out;
}

}  // namespace plateau::geom
