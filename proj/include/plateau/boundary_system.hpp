#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "plateau/elastica.hpp"
#include "plateau/numerics.hpp"
#include "plateau/params.hpp"

namespace plateau::boundary {

struct BoundaryState {
  double s = 0.0;
  double kappa_g = 0.0;
  double kappa_g_prime = 0.0;
  double tau_g = 0.0;
};

/// Frenet curvature and torsion of a boundary on the given sheet.
inline double frenet_kappa(Sheet sh, double kg) { return sign_of(sh) * kg; }
inline double frenet_tau(double tg) { return -tg; }

/// c = tau_g (2 alpha kappa_g + eta)^2, constant along critical boundaries.
inline double torsion_constant(const EnergyParams& p, double kg, double tg) {
  const double w = 2 * p.alpha * kg + p.eta;
  return tg * w * w;
}

/// Residual of 4 alpha kg' tg + 2 alpha kg tg' + eta tg' = 0.
inline double residual_tangential(const EnergyParams& p, double kg, double kgp, double tg, double tgp) {
  return 4 * p.alpha * kgp * tg + 2 * p.alpha * kg * tgp + p.eta * tgp;
}

/// Residual of 2 alpha kg'' + (alpha kg^2 - 2 alpha tg^2 - beta) kg - eta tg^2 + sigma = 0.
inline double residual_normal(const EnergyParams& p, double kg, double kgpp, double tg) {
  return 2 * p.alpha * kgpp + (p.alpha * kg * kg - 2 * p.alpha * tg * tg - p.beta) * kg - p.eta * tg * tg +
         p.sigma;
}

/// The same two equations written with the Frenet curvature and torsion on
/// a sheet (kappa_g = sheet kappa, tau_g = -tau):
///   4 alpha k' t + 2 alpha k t' + sheet eta t'                          (= -sheet * tangential)
///   2 alpha k'' + (alpha k^2 - 2 alpha t^2 - beta) k - sheet eta t^2 + sheet sigma  (= sheet * normal)
struct FrenetResiduals {
  double tangential = 0.0;
  double normal = 0.0;
};

inline FrenetResiduals frenet_residuals(const EnergyParams& p, Sheet sh, double k, double kp, double kpp,
                                        double t, double tp) {
  const double e = sign_of(sh);
  return {4 * p.alpha * kp * t + 2 * p.alpha * k * tp + e * p.eta * tp,
          2 * p.alpha * kpp + (p.alpha * k * k - 2 * p.alpha * t * t - p.beta) * k - e * p.eta * t * t +
              e * p.sigma};
}

struct Trajectory {
  EnergyParams params;
  Sheet sheet = Sheet::plus;
  std::vector<BoundaryState> states;
  double c = 0.0;
  double max_c_drift = 0.0;
  double length = 0.0;
  double step = 0.0;

  std::vector<double> column(double BoundaryState::*m) const {
    std::vector<double> v;
    v.reserve(states.size());
    for (const auto& x : states) v.push_back(x.*m);
    return v;
  }
};

namespace detail {

inline void check_params(const EnergyParams& p) {
  p.validate();
  require(p.alpha != 0.0, "boundary system: alpha must be nonzero (see alpha_zero_solution)");
  require(p.eta != 0.0, "boundary system: eta must be nonzero");
}

inline double kg_accel(const EnergyParams& p, double kg, double tg) {
  return -((p.alpha * kg * kg - 2 * p.alpha * tg * tg - p.beta) * kg - p.eta * tg * tg + p.sigma) /
         (2 * p.alpha);
}

}  // namespace detail

/// Integrates the boundary system reduced by the first integral: tau_g is
/// eliminated through tau_g = c / (2 alpha kappa_g + eta)^2 with c fixed by
/// the initial state, and the remaining second-order equation for kappa_g is
/// stepped with RK4.
inline Trajectory boundary_integrate(const EnergyParams& p, const BoundaryState& state0, double length,
                                     double step, Sheet sheet = Sheet::plus) {
  detail::check_params(p);
  require(step > 0.0 && length > 0.0, "boundary_integrate: step and length must be positive");
  const double w0 = 2 * p.alpha * state0.kappa_g + p.eta;
  require(w0 != 0.0, "boundary_integrate: 2 alpha kappa_g + eta must be nonzero initially");

  Trajectory tr;
  tr.params = p;
  tr.sheet = sheet;
  tr.c = torsion_constant(p, state0.kappa_g, state0.tau_g);
  const int n = step_count(length, step);
  const double h = length / n;
  tr.length = length;
  tr.step = h;
  const double c = tr.c;
  const double side = w0 > 0 ? 1.0 : -1.0;

  auto tau_of = [&](double kg) {
    const double w = 2 * p.alpha * kg + p.eta;
    return c / (w * w);
  };
  auto f = [&](const Vec2& y) { return Vec2(y(1), detail::kg_accel(p, y(0), tau_of(y(0)))); };

  Vec2 y(state0.kappa_g, state0.kappa_g_prime);
  tr.states.reserve(n + 1);
  tr.states.push_back({0.0, y(0), y(1), tau_of(y(0))});
  for (int i = 0; i < n; ++i) {
    const Vec2 yn = rk4_step(f, y, h);
    const double s = (i + 1 == n) ? length : (i + 1) * h;
    const double w = 2 * p.alpha * yn(0) + p.eta;
    if (!yn.allFinite() || w * side <= 0.0)
      throw Error(ErrorKind::chart_singularity,
                  "trajectory reached 2 alpha kappa_g + eta = 0 near s=" + fmt17(s), s);
    if (!(std::abs(yn(0)) <= 1e6))
      throw Error(ErrorKind::divergence, "kappa_g blew up at s=" + fmt17(s), s);
    const BoundaryState st{s, yn(0), yn(1), tau_of(yn(0))};
    tr.states.push_back(st);
    tr.max_c_drift = std::max(tr.max_c_drift, std::abs(torsion_constant(p, st.kappa_g, st.tau_g) - c));
    y = yn;
  }
  return tr;
}

struct TorsionInvariant {
  double c = 0.0;  // mean
  double max_drift = 0.0;
  double relative_drift() const { return max_drift / std::max(1.0, std::abs(c)); }
};

inline TorsionInvariant torsion_invariant(const EnergyParams& p, const Trajectory& tr) {
  require(p.eta != 0.0, "torsion_invariant: eta must be nonzero");
  require(!tr.states.empty(), "torsion_invariant: empty trajectory");
  TorsionInvariant out;
  std::vector<double> cs;
  for (const auto& s : tr.states) cs.push_back(torsion_constant(p, s.kappa_g, s.tau_g));
  double sum = 0.0;
  for (double v : cs) sum += v;
  out.c = sum / double(cs.size());
  for (double v : cs) out.max_drift = std::max(out.max_drift, std::abs(v - out.c));
  return out;
}

/// Residuals of both forms of the boundary equations along a trajectory,
/// with every derivative taken from the samples by 7-point differences (no
/// use of the integrator's right-hand side).
struct TrajectoryResiduals {
  double tangential = 0.0;         // max |4 a kg' tg + 2 a kg tg' + eta tg'|
  double normal = 0.0;             // max |2 a kg'' + ... + sigma|
  double frenet_tangential = 0.0;  // Frenet-form counterparts
  double frenet_normal = 0.0;
  double form_mismatch = 0.0;  // max over samples of ||Frenet| - |Darboux|| for both equations
};

inline TrajectoryResiduals trajectory_residuals(const Trajectory& tr) {
  const EnergyParams& p = tr.params;
  const auto s = tr.column(&BoundaryState::s);
  const auto kg = tr.column(&BoundaryState::kappa_g);
  const auto kgp = tr.column(&BoundaryState::kappa_g_prime);
  const auto tg = tr.column(&BoundaryState::tau_g);
  require(s.size() >= 8, "trajectory_residuals: need at least 8 samples");
  const auto kgpp = differentiate(s, kgp, 1, false, 0.0);
  const auto tgp = differentiate(s, tg, 1, false, 0.0);
  const double e = sign_of(tr.sheet);
  TrajectoryResiduals r;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double a = residual_tangential(p, kg[i], kgp[i], tg[i], tgp[i]);
    const double b = residual_normal(p, kg[i], kgpp[i], tg[i]);
    const auto fr = frenet_residuals(p, tr.sheet, e * kg[i], e * kgp[i], e * kgpp[i], -tg[i], -tgp[i]);
    r.tangential = std::max(r.tangential, std::abs(a));
    r.normal = std::max(r.normal, std::abs(b));
    r.frenet_tangential = std::max(r.frenet_tangential, std::abs(fr.tangential));
    r.frenet_normal = std::max(r.frenet_normal, std::abs(fr.normal));
    r.form_mismatch = std::max({r.form_mismatch, std::abs(fr.tangential + e * a), std::abs(fr.normal - e * b)});
  }
  return r;
}

/// Distance from the chart singularity and the torsion bound along a run.
struct ChartMargins {
  double min_chart = 0.0;  // min |2 alpha kg + eta|
  double max_tau_g = 0.0;
};

inline ChartMargins chart_margins(const Trajectory& tr) {
  ChartMargins m{std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& s : tr.states) {
    m.min_chart = std::min(m.min_chart, std::abs(2 * tr.params.alpha * s.kappa_g + tr.params.eta));
    m.max_tau_g = std::max(m.max_tau_g, std::abs(s.tau_g));
  }
  return m;
}

// ---------------------------------------------------------------------------

enum class Branch { tau_g_zero, const_kg, generic };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::tau_g_zero: return "TAU_G_ZERO";
    case Branch::const_kg: return "CONST_KG";
    case Branch::generic: return "GENERIC";
  }
  return "?";
}

struct BranchTag {
  Branch branch = Branch::generic;
  double max_tau_g = 0.0;
  double max_chart = 0.0;                 // max |2 alpha kg + eta|
  std::optional<double> param_residual;  // |8 sigma alpha^2 - eta (eta^2 - 4 alpha beta)| for CONST_KG
};

struct BranchTolerances {
  std::optional<double> tau_g;  // default 1e-8 * max(1, max|kappa_g|)
  std::optional<double> chart;  // default 1e-8 * max(|eta|, 2|alpha| max|kappa_g|)
};

inline double const_kg_relation(const EnergyParams& p) {
  return 8 * p.sigma * p.alpha * p.alpha - p.eta * (p.eta * p.eta - 4 * p.alpha * p.beta);
}

inline BranchTag classify_branch(const EnergyParams& p, const Trajectory& tr, BranchTolerances tol = {}) {
  require(!tr.states.empty(), "classify_branch: empty trajectory");
  BranchTag tag;
  double kmax = 0.0;
  for (const auto& s : tr.states) {
    tag.max_tau_g = std::max(tag.max_tau_g, std::abs(s.tau_g));
    tag.max_chart = std::max(tag.max_chart, std::abs(2 * p.alpha * s.kappa_g + p.eta));
    kmax = std::max(kmax, std::abs(s.kappa_g));
  }
  const double ttol = tol.tau_g.value_or(1e-8 * std::max(1.0, kmax));
  const double ctol = tol.chart.value_or(1e-8 * std::max(std::abs(p.eta), 2 * std::abs(p.alpha) * kmax));
  const bool tz = tag.max_tau_g <= ttol, ck = tag.max_chart <= ctol;
  if (tz && ck)
    throw Error(ErrorKind::accuracy, "ambiguous branch: max|tau_g|=" + fmt17(tag.max_tau_g) +
                                         " and max|2 alpha kappa_g + eta|=" + fmt17(tag.max_chart));
  if (tz) {
    tag.branch = Branch::tau_g_zero;
  } else if (ck) {
    tag.branch = Branch::const_kg;
    tag.param_residual = std::abs(const_kg_relation(p));
  }
  return tag;
}

// ---------------------------------------------------------------------------

struct AlphaZeroSolution {
  double radius = 0.0;  // -beta / sigma
  bool valid = false;   // beta < 0
  double kappa_g = 0.0; // sigma / beta on the boundary circle
  double residual = 0.0;
  std::string reason;
};

/// With alpha = 0 the only critical configurations are planar disks bounded
/// by a circle of radius -beta/sigma, which requires beta < 0.
inline AlphaZeroSolution alpha_zero_solution(const EnergyParams& p) {
  p.validate();
  require(p.alpha == 0.0, "alpha_zero_solution: alpha must be 0");
  require(p.eta != 0.0, "alpha_zero_solution: eta must be nonzero");
  AlphaZeroSolution out;
  out.radius = -p.beta / p.sigma;
  out.valid = p.beta < 0.0;
  if (p.beta != 0.0) {
    out.kappa_g = p.sigma / p.beta;
    out.residual = std::abs(-p.beta * out.kappa_g + p.sigma);
  } else {
    out.kappa_g = std::numeric_limits<double>::quiet_NaN();
    out.residual = std::numeric_limits<double>::quiet_NaN();
  }
  if (!out.valid) out.reason = "no critical disk: beta must be negative";
  return out;
}

}  // namespace plateau::boundary
