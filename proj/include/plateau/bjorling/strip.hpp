#pragma once
// Analytic continuation of a critical boundary curve into a complex strip
// z = s + it. The Frenet system and the curvature ODE are integrated with
// complex RK4, first along the real axis and then up and down vertical lines
// from every real node. The Schwarz integral W(z) = int n(w) dw is
// accumulated alongside by composite Simpson on the RK4 substeps.

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plateau/boundary_system.hpp"
#include "plateau/geom/curve.hpp"
#include "plateau/numerics.hpp"
#include "plateau/params.hpp"

namespace plateau::bjorling {

using CVec = Eigen::Matrix<cdouble, 14, 1>;  // kg, kg', C, T, N, B

/// Source of the curvature and torsion of the core curve. `boundary` follows
/// the reduced boundary system (tau_g = c / (2 alpha kg + eta)^2); `constant`
/// is a fixed (kappa, tau) used for circle and helix fixtures.
struct CoreModel {
  enum class Kind { boundary, constant };
  Kind kind = Kind::constant;
  EnergyParams params;
  Sheet sheet = Sheet::plus;
  double c = 0.0;
  double kappa = 0.0, tau = 0.0;
  double kg0 = 0.0, kgp0 = 0.0;
  geom::Frame frame;  // placement of C, T, N, B at z = 0

  static CoreModel from_boundary(const EnergyParams& p, const boundary::BoundaryState& s0, Sheet sh) {
    boundary::detail::check_params(p);
    require(2 * p.alpha * s0.kappa_g + p.eta != 0.0,
            "continue_boundary: 2 alpha kappa_g + eta must be nonzero initially");
    CoreModel m;
    m.kind = Kind::boundary;
    m.params = p;
    m.sheet = sh;
    m.c = boundary::torsion_constant(p, s0.kappa_g, s0.tau_g);
    m.kg0 = s0.kappa_g;
    m.kgp0 = s0.kappa_g_prime;
    return m;
  }
  static CoreModel constant_curvature(double kappa, double tau, Sheet sh = Sheet::plus,
                                      const geom::Frame& frame = {}) {
    CoreModel m;
    m.frame = frame;
    m.kind = Kind::constant;
    m.kappa = kappa;
    m.tau = tau;
    m.sheet = sh;
    m.kg0 = sign_of(sh) * kappa;
    return m;
  }

  double e() const { return sign_of(sheet); }

  cdouble tau_g(cdouble kg) const {
    if (kind == Kind::constant) return -tau;
    const cdouble w = 2 * params.alpha * kg + params.eta;
    return c / (w * w);
  }
  cdouble frenet_kappa(cdouble kg) const { return kind == Kind::constant ? cdouble(kappa) : e() * kg; }
  cdouble frenet_tau(cdouble kg) const { return -tau_g(kg); }

  /// d/dz of the state.
  CVec rhs(const CVec& y) const {
    CVec d;
    const cdouble kg = y(0);
    const cdouble k = frenet_kappa(kg), t = frenet_tau(kg);
    if (kind == Kind::constant) {
      d(0) = 0.0;
      d(1) = 0.0;
    } else {
      const auto& p = params;
      const cdouble tg = tau_g(kg);
      d(0) = y(1);
      d(1) = -((p.alpha * kg * kg - 2.0 * p.alpha * tg * tg - p.beta) * kg - p.eta * tg * tg + p.sigma) /
             (2 * p.alpha);
    }
    const auto T = y.segment<3>(5), N = y.segment<3>(8), B = y.segment<3>(11);
    d.segment<3>(2) = T;
    d.segment<3>(5) = k * N;
    d.segment<3>(8) = -k * T + t * B;
    d.segment<3>(11) = -t * N;
    return d;
  }

  CVec initial_state() const {
    CVec y = CVec::Zero();
    y(0) = kg0;
    y(1) = kgp0;
    Vec3 T = frame.T, N = frame.N, B = frame.B;
    orthonormalize(T, N, B);
    y.segment<3>(2) = frame.origin.cast<cdouble>();
    y.segment<3>(5) = T.cast<cdouble>();
    y.segment<3>(8) = N.cast<cdouble>();
    y.segment<3>(11) = B.cast<cdouble>();
    return y;
  }
};

/// One grid node of the strip: the continued state and the Schwarz integral.
struct StripNode {
  CVec y;
  CVec3 W;

  cdouble kappa_g() const { return y(0); }
  CVec3 C() const { return y.segment<3>(2); }
  CVec3 T() const { return y.segment<3>(5); }
  CVec3 N() const { return y.segment<3>(8); }
  CVec3 B() const { return y.segment<3>(11); }
};

struct StripOptions {
  double max_substep = 1e-3;
  double blowup = 1e8;
  double quadrature_tol = 1e-10;
};

/// Grid over [0, S] x [-T, T] with ns x nt intervals (nt even so t = 0 is a
/// grid row).
struct ComplexStrip {
  CoreModel model;
  double S = 0.0, T = 0.0;
  int ns = 0, nt = 0;
  StripOptions options;
  std::vector<StripNode> nodes;  // index j * (nt + 1) + k

  // Fine real-axis samples (s, kg, kg') at the RK4 substep spacing.
  std::vector<boundary::BoundaryState> core_fine;
  double core_step = 0.0;

  double quadrature_error = 0.0;  // Richardson estimate, summed along the worst path
  double max_frame_defect = 0.0;  // complex bilinear orthonormality defect

  double ds() const { return S / ns; }
  double dt() const { return 2 * T / nt; }
  int k0() const { return nt / 2; }
  double s_at(int j) const { return j == ns ? S : j * ds(); }
  double t_at(int k) const { return k == nt ? T : (k == k0() ? 0.0 : -T + k * dt()); }
  const StripNode& node(int j, int k) const { return nodes[std::size_t(j) * (nt + 1) + k]; }
  StripNode& node(int j, int k) { return nodes[std::size_t(j) * (nt + 1) + k]; }

  /// Surface point X = Re C - Im W.
  Vec3 position(int j, int k) const {
    const auto& nd = node(j, k);
    return nd.C().real() - nd.W.imag();
  }

  /// Largest imaginary part of any state component on the t = 0 row.
  double real_axis_imag() const {
    double m = 0.0;
    for (int j = 0; j <= ns; ++j) {
      const auto& nd = node(j, k0());
      m = std::max({m, nd.y.imag().cwiseAbs().maxCoeff(), nd.W.imag().cwiseAbs().maxCoeff()});
    }
    return m;
  }

  /// Boundary-system trajectory sampled along the real axis.
  boundary::Trajectory core_trajectory() const {
    boundary::Trajectory tr;
    tr.params = model.params;
    tr.sheet = model.sheet;
    tr.c = model.c;
    tr.length = S;
    tr.step = core_step;
    tr.states = core_fine;
    return tr;
  }
};

namespace detail {

inline cdouble bdot(const CVec3& a, const CVec3& b) { return (a.array() * b.array()).sum(); }

inline double frame_defect(const CVec& y) {
  const CVec3 T = y.segment<3>(5), N = y.segment<3>(8), B = y.segment<3>(11);
  return std::max({std::abs(bdot(T, T) - 1.0), std::abs(bdot(N, N) - 1.0), std::abs(bdot(B, B) - 1.0),
                   std::abs(bdot(T, N)), std::abs(bdot(T, B)), std::abs(bdot(N, B))});
}

inline bool blown_up(const CVec& y, const CVec3& W, double limit) {
  for (int i = 0; i < y.size(); ++i)
    if (!(std::abs(y(i)) <= limit)) return true;
  for (int i = 0; i < 3; ++i)
    if (!(std::abs(W(i)) <= limit)) return true;
  return false;
}

/// Result of one segment of continuation.
struct SegmentResult {
  CVec y;
  CVec3 W;
  double richardson = 0.0;
  bool ok = true;
};

/// Continues (y, W) along z -> z + delta with m RK4 substeps (m a multiple of
/// 4). W gains int n dz by composite Simpson on the substeps; the Richardson
/// estimate compares it with Simpson on every other substep.
inline SegmentResult continue_segment(const CoreModel& model, const CVec& y0, const CVec3& W0,
                                      cdouble delta, int m, double limit,
                                      std::vector<boundary::BoundaryState>* fine = nullptr,
                                      double s0 = 0.0) {
  const cdouble h = delta / double(m);
  const double e = model.e();
  auto f = [&](const CVec& y) { return CVec(model.rhs(y)); };
  std::vector<CVec3> nvals;
  nvals.reserve(m + 1);
  CVec y = y0;
  nvals.push_back(e * y.segment<3>(8));
  SegmentResult r;
  for (int i = 0; i < m; ++i) {
    y = rk4_step(f, y, h);
    nvals.push_back(e * y.segment<3>(8));
    if (fine) {
      const double s = s0 + (i + 1) * h.real();
      fine->push_back({s, y(0).real(), y(1).real(), model.tau_g(y(0)).real()});
    }
    if (blown_up(y, W0, limit)) {
      r.ok = false;
      r.y = y;
      r.W = W0;
      return r;
    }
  }
  CVec3 fine_sum = CVec3::Zero(), coarse_sum = CVec3::Zero();
  for (int i = 0; i <= m; ++i) {
    const double wf = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    fine_sum += wf * nvals[i];
    if (i % 2 == 0) {
      const int ic = i / 2, mc = m / 2;
      const double wc = (ic == 0 || ic == mc) ? 1.0 : (ic % 2 ? 4.0 : 2.0);
      coarse_sum += wc * nvals[i];
    }
  }
  const CVec3 Sf = fine_sum * (h / 3.0);
  const CVec3 Sc = coarse_sum * (2.0 * h / 3.0);
  r.y = y;
  r.W = W0 + Sf;
  r.richardson = (Sf - Sc).cwiseAbs().maxCoeff() / 15.0;
  if (blown_up(y, r.W, limit)) r.ok = false;
  return r;
}

inline int substeps(double length, double max_step) {
  const int m = int(std::ceil(length / max_step - 1e-9));
  return std::max(4, 4 * ((m + 3) / 4));
}

}  // namespace detail

/// Continues the core curve into the strip s in [0, S], |t| <= T on an
/// ns x nt grid. Blow-up (any component above options.blowup) raises
/// strip_truncation with where() = the largest |t| reached safely on every
/// column.
inline ComplexStrip continue_core(const CoreModel& model, double S, double T, int ns, int nt,
                                  StripOptions opt = {}) {
  require(S > 0.0 && T > 0.0, "continue_boundary: S and T must be positive");
  require(ns >= 4 && nt >= 4 && nt % 2 == 0, "continue_boundary: need ns >= 4 and even nt >= 4");
  ComplexStrip st;
  st.model = model;
  st.S = S;
  st.T = T;
  st.ns = ns;
  st.nt = nt;
  st.options = opt;
  st.nodes.resize(std::size_t(ns + 1) * (nt + 1));

  const double ds = S / ns, dt = 2 * T / nt;
  const int ms = detail::substeps(ds, opt.max_substep);
  const int mt = detail::substeps(dt, opt.max_substep);
  st.core_step = ds / ms;
  const int k0 = nt / 2;

  CVec y = model.initial_state();
  CVec3 W = CVec3::Zero();
  st.node(0, k0) = {y, W};
  st.core_fine.push_back({0.0, y(0).real(), y(1).real(), model.tau_g(y(0)).real()});
  double real_err = 0.0;
  std::vector<double> real_err_at(ns + 1, 0.0);
  for (int j = 0; j < ns; ++j) {
    auto r = detail::continue_segment(model, y, W, cdouble(ds, 0.0), ms, opt.blowup, &st.core_fine, j * ds);
    if (!r.ok)
      throw Error(ErrorKind::divergence, "core curve blew up near s=" + fmt17((j + 1) * ds), (j + 1) * ds);
    y = r.y;
    W = r.W;
    real_err += r.richardson;
    real_err_at[j + 1] = real_err;
    st.node(j + 1, k0) = {y, W};
    st.max_frame_defect = std::max(st.max_frame_defect, detail::frame_defect(y));
  }
  st.core_fine.back().s = S;

  double safe_T = T;
  bool truncated = false;
  for (int j = 0; j <= ns; ++j) {
    for (int dir : {+1, -1}) {
      CVec yy = st.node(j, k0).y;
      CVec3 WW = st.node(j, k0).W;
      double err = real_err_at[j];
      for (int q = 1; q <= k0; ++q) {
        auto r = detail::continue_segment(model, yy, WW, cdouble(0.0, dir * dt), mt, opt.blowup);
        if (!r.ok) {
          truncated = true;
          safe_T = std::min(safe_T, (q - 1) * dt);
          break;
        }
        yy = r.y;
        WW = r.W;
        err += r.richardson;
        st.quadrature_error = std::max(st.quadrature_error, err);
        st.node(j, k0 + dir * q) = {yy, WW};
        st.max_frame_defect = std::max(st.max_frame_defect, detail::frame_defect(yy));
      }
    }
  }
  if (truncated)
    throw Error(ErrorKind::strip_truncation,
                "complex continuation blew up; largest safe half-width T=" + fmt17(safe_T), safe_T);
  st.quadrature_error = std::max(st.quadrature_error, real_err);
  if (st.quadrature_error > opt.quadrature_tol)
    throw Error(ErrorKind::accuracy, "Schwarz integral Richardson estimate " +
                                         fmt17(st.quadrature_error) + " exceeds tolerance " +
                                         fmt17(opt.quadrature_tol));
  return st;
}

/// Strip for a critical boundary curve with initial data state0 on the given
/// sheet (nu = -sheet B along the real axis).
inline ComplexStrip continue_boundary(const EnergyParams& p, const boundary::BoundaryState& state0, Sheet sheet,
                                      double S, double T, int ns, int nt, StripOptions opt = {}) {
  return continue_core(CoreModel::from_boundary(p, state0, sheet), S, T, ns, nt, opt);
}

/// Real-valued integration of the same core ODE with the strip's substep,
/// giving the input curve as an ArcCurve sampled at the strip's s nodes.
inline geom::ArcCurve core_curve(const CoreModel& model, double S, int ns, double max_substep = 1e-3) {
  using RVec = Eigen::Matrix<double, 14, 1>;
  const double ds = S / ns;
  const int ms = detail::substeps(ds, max_substep);
  const double h = ds / ms;
  auto f = [&](const RVec& y) {
    const CVec d = model.rhs(y.cast<cdouble>());
    return RVec(d.real());
  };
  RVec y = model.initial_state().real();
  geom::ArcCurve out;
  out.length = S;
  auto record = [&](double s) {
    geom::CurveSample c;
    c.s = s;
    c.position = y.segment<3>(2);
    c.T = y.segment<3>(5);
    c.N = y.segment<3>(8);
    c.B = y.segment<3>(11);
    c.kappa = model.frenet_kappa(y(0)).real();
    c.tau = model.frenet_tau(y(0)).real();
    out.samples.push_back(c);
  };
  record(0.0);
  for (int j = 0; j < ns; ++j) {
    for (int i = 0; i < ms; ++i) y = rk4_step(f, y, h);
    record(j + 1 == ns ? S : (j + 1) * ds);
  }
  out.closure_gap = (out.samples.back().position - out.samples.front().position).norm();
  return out;
}

/// Continues the state stored at a grid node to an arbitrary point of the
/// strip along a straight segment.
inline StripNode evaluate_strip(const ComplexStrip& st, double s, double t) {
  const int j = std::clamp(int(std::lround(s / st.ds())), 0, st.ns);
  const int k = std::clamp(int(std::lround((t + st.T) / st.dt())), 0, st.nt);
  const StripNode& base = st.node(j, k);
  const cdouble delta(s - st.s_at(j), t - st.t_at(k));
  if (std::abs(delta) <= 1e-13 * std::max(1.0, st.S)) return base;
  const int m = detail::substeps(std::abs(delta), st.options.max_substep);
  const auto r = detail::continue_segment(st.model, base.y, base.W, delta, m, st.options.blowup);
  if (!r.ok) throw Error(ErrorKind::strip_truncation, "evaluation point left the continued region");
  return {r.y, r.W};
}

}  // namespace plateau::bjorling
