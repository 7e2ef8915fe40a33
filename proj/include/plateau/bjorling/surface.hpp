#pragma once
// Schwarz's solution of the Bjorling problem on a continued strip:
//   X(z) = Re( C(z) + i int_0^z C'(w) x nu(w) dw ),
// with C' x nu = T x (-sheet B) = sheet N = n, so X = Re C - Im W.

#include <memory>
#include <string>

#include "plateau/bjorling/strip.hpp"
#include "plateau/boundary_system.hpp"
#include "plateau/geom/mesh.hpp"
#include "plateau/geom/patch.hpp"

namespace plateau::bjorling {

class BjorlingPatch final : public geom::ParamPatch {
 public:
  explicit BjorlingPatch(std::shared_ptr<const ComplexStrip> strip) : st_(std::move(strip)) {}

  const ComplexStrip& strip() const { return *st_; }
  geom::Domain domain() const override { return {0.0, st_->S, -st_->T, st_->T}; }

  Vec3 position(double u, double v) const override {
    const StripNode nd = evaluate_strip(*st_, u, v);
    return nd.C().real() - nd.W.imag();
  }

  /// Closed-form jet from G' = T + i n and G'' = kappa N + i n'.
  geom::PatchJet jet(double u, double v) const override {
    const StripNode nd = evaluate_strip(*st_, u, v);
    const auto& m = st_->model;
    const double e = m.e();
    const cdouble k = m.frenet_kappa(nd.y(0)), t = m.frenet_tau(nd.y(0));
    const cdouble I(0.0, 1.0);
    const CVec3 T = nd.T(), N = nd.N(), B = nd.B();
    const CVec3 G1 = T + I * e * N;
    const CVec3 G2 = k * N + I * e * (-k * T + t * B);
    geom::PatchJet j;
    j.X = nd.C().real() - nd.W.imag();
    j.Xu = G1.real();
    j.Xv = -G1.imag();
    j.Xuu = G2.real();
    j.Xuv = -G2.imag();
    j.Xvv = -G2.real();
    return j;
  }

  bool conformal() const override { return true; }

 private:
  std::shared_ptr<const ComplexStrip> st_;
};

/// Curvatures from fourth-order differences of the grid positions alone
/// (independent of the analytic jets). Interior nodes only.
struct GridCurvature {
  double max_abs_H = 0.0;
  double max_abs_K = 0.0;
  double max_normal_vs_B = 0.0;  // along t = 0, from the same differences
  int nodes = 0;
};

inline GridCurvature grid_curvature(const ComplexStrip& st) {
  require(st.ns >= 4 && st.nt >= 4, "grid_curvature: need at least 4 x 4 intervals");
  GridCurvature g;
  const double hs = st.ds(), ht = st.dt();
  auto X = [&](int j, int k) { return st.position(j, k); };
  auto d1 = [](const Vec3& m2, const Vec3& m1, const Vec3& p1, const Vec3& p2, double h) -> Vec3 {
    return (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h);
  };
  auto d2 = [](const Vec3& m2, const Vec3& m1, const Vec3& c, const Vec3& p1, const Vec3& p2,
               double h) -> Vec3 { return (-m2 + 16 * m1 - 30 * c + 16 * p1 - p2) / (12 * h * h); };
  const double e = st.model.e();
  for (int j = 2; j <= st.ns - 2; ++j) {
    for (int k = 2; k <= st.nt - 2; ++k) {
      geom::PatchJet jt;
      jt.X = X(j, k);
      jt.Xu = d1(X(j - 2, k), X(j - 1, k), X(j + 1, k), X(j + 2, k), hs);
      jt.Xv = d1(X(j, k - 2), X(j, k - 1), X(j, k + 1), X(j, k + 2), ht);
      jt.Xuu = d2(X(j - 2, k), X(j - 1, k), jt.X, X(j + 1, k), X(j + 2, k), hs);
      jt.Xvv = d2(X(j, k - 2), X(j, k - 1), jt.X, X(j, k + 1), X(j, k + 2), ht);
      auto Du = [&](int kk) { return d1(X(j - 2, kk), X(j - 1, kk), X(j + 1, kk), X(j + 2, kk), hs); };
      jt.Xuv = d1(Du(k - 2), Du(k - 1), Du(k + 1), Du(k + 2), ht);
      const auto sp = geom::surface_point(jt);
      g.max_abs_H = std::max(g.max_abs_H, std::abs(sp.H));
      g.max_abs_K = std::max(g.max_abs_K, std::abs(sp.K));
      ++g.nodes;
      if (k == st.k0()) {
        const Vec3 nu = -e * st.node(j, k).B().real();
        g.max_normal_vs_B = std::max(g.max_normal_vs_B, (sp.normal - nu).norm());
      }
    }
  }
  return g;
}

/// Checks attached to every constructed surface.
struct BjorlingAudit {
  double row_vs_curve = 0.0;    // |X(s, 0) - C(s)| against an independent real integration
  double real_axis_imag = 0.0;  // imaginary residue on t = 0
  double normal_vs_B = 0.0;     // |nu(s, 0) - (-sheet B)| from the patch jets
  double core_kappa_n = 0.0;    // sup |kappa_n| along t = 0
  std::optional<double> core_tangential;  // Frenet-form boundary equations on the core
  std::optional<double> core_normal;
  double max_H_jet = 0.0;  // closed-form jets at the nodes
  GridCurvature grid;      // differences of the node positions
  double quadrature_error = 0.0;
  double frame_defect = 0.0;

  double core_el() const {
    return std::max(core_tangential.value_or(0.0), core_normal.value_or(0.0));
  }
};

struct BjorlingSurface {
  std::shared_ptr<const ComplexStrip> strip;
  std::shared_ptr<const BjorlingPatch> patch;
  geom::TriMesh mesh;
  BjorlingAudit audit;
};

inline BjorlingAudit audit_bjorling(const ComplexStrip& st, const BjorlingPatch& patch) {
  BjorlingAudit a;
  a.real_axis_imag = st.real_axis_imag();
  a.quadrature_error = st.quadrature_error;
  a.frame_defect = st.max_frame_defect;

  const auto curve = core_curve(st.model, st.S, st.ns, st.options.max_substep);
  const double e = st.model.e();
  const auto path = geom::UvPath::u_line(0.0, 0.0, st.S, false);
  for (int j = 0; j <= st.ns; ++j) {
    a.row_vs_curve = std::max(a.row_vs_curve, (st.position(j, st.k0()) - curve.samples[j].position).norm());
    const auto bp = geom::boundary_point(patch, path, st.s_at(j));
    a.normal_vs_B = std::max(a.normal_vs_B, (bp.nu - (-e * curve.samples[j].B)).norm());
    a.core_kappa_n = std::max(a.core_kappa_n, std::abs(bp.kappa_n));
  }
  if (st.model.kind == CoreModel::Kind::boundary) {
    const auto r = boundary::trajectory_residuals(st.core_trajectory());
    a.core_tangential = r.frenet_tangential;
    a.core_normal = r.frenet_normal;
  }
  for (int j = 0; j <= st.ns; ++j)
    for (int k = 0; k <= st.nt; ++k)
      a.max_H_jet = std::max(a.max_H_jet, std::abs(patch.at(st.s_at(j), st.t_at(k)).H));
  a.grid = grid_curvature(st);
  return a;
}

/// Builds the surface patch, its node mesh and the audit.
inline BjorlingSurface bjorling_surface(ComplexStrip strip) {
  BjorlingSurface out;
  out.strip = std::make_shared<const ComplexStrip>(std::move(strip));
  out.patch = std::make_shared<const BjorlingPatch>(out.strip);
  out.mesh = geom::mesh_from_patch(*out.patch, out.strip->ns + 1, out.strip->nt + 1);
  out.audit = audit_bjorling(*out.strip, *out.patch);
  return out;
}

/// Continues with half-width T, shrinking to 0.9 of the reported safe width
/// whenever the continuation blows up, and by 0.8 when the Schwarz integral
/// misses its tolerance.
inline ComplexStrip continue_adaptive(const CoreModel& model, double S, double T, int ns, int nt,
                                      StripOptions opt = {}, double min_T = 1e-2) {
  for (;;) {
    try {
      return continue_core(model, S, T, ns, nt, opt);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::strip_truncation && e.kind() != ErrorKind::accuracy) throw;
      const double next = e.kind() == ErrorKind::accuracy ? 0.8 * T : 0.9 * e.where();
      if (!(next >= min_T))
        throw Error(ErrorKind::strip_truncation,
                    "no strip of half-width >= " + fmt17(min_T) + " survives continuation", e.where());
      T = next;
    }
  }
}

/// Grid-difference |H| on a sequence of grids (ns x nt scaled by 1, 2, ...).
inline std::vector<double> h_refinement(const CoreModel& model, double S, double T,
                                        const std::vector<std::pair<int, int>>& grids,
                                        StripOptions opt = {}) {
  std::vector<double> out;
  for (auto [ns, nt] : grids) out.push_back(grid_curvature(continue_core(model, S, T, ns, nt, opt)).max_abs_H);
  return out;
}

/// CSV dump of the strip: s, t and the re/im parts of kappa_g, C, T, N, B, W.
inline void write_strip_csv(std::ostream& os, const ComplexStrip& st) {
  os << "s,t,kg_re,kg_im";
  for (const char* name : {"C", "T", "N", "B", "W"})
    for (const char* ax : {"x", "y", "z"}) os << ',' << name << ax << "_re," << name << ax << "_im";
  os << '\n';
  for (int j = 0; j <= st.ns; ++j) {
    for (int k = 0; k <= st.nt; ++k) {
      const auto& nd = st.node(j, k);
      os << fmt17(st.s_at(j)) << ',' << fmt17(st.t_at(k)) << ',' << fmt17(nd.y(0).real()) << ','
         << fmt17(nd.y(0).imag());
      for (int i = 2; i < 14; ++i) os << ',' << fmt17(nd.y(i).real()) << ',' << fmt17(nd.y(i).imag());
      for (int i = 0; i < 3; ++i) os << ',' << fmt17(nd.W(i).real()) << ',' << fmt17(nd.W(i).imag());
      os << '\n';
    }
  }
}

}  // namespace plateau::bjorling
