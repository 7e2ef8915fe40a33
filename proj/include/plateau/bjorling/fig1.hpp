#pragma once
// The three reference surfaces: boundary-system cores continued into strips
// and closed with Schwarz's formula. Initial data are our choice; only the
// rigidities are fixed.

#include <string>
#include <vector>

#include "plateau/bjorling/surface.hpp"

namespace plateau::bjorling {

struct ReferenceSet {
  int id = 0;
  EnergyParams params;
  boundary::BoundaryState state0;
  Sheet sheet = Sheet::plus;
  std::vector<std::string> notes;
};

inline ReferenceSet reference_set(int id) {
  ReferenceSet r;
  r.id = id;
  switch (id) {
    case 1:
      r.params = {1, -5, 1, 1};
      r.state0 = {0.0, 1.0, 0.0, 0.5};
      break;
    case 2:
      r.params = {1, 1, -1, 1};
      r.params.allow_nonphysical = true;
      r.state0 = {0.0, 1.0, 0.0, 0.5};
      r.notes.push_back("alpha = -1 < 0: outside the physical range, built with allow_nonphysical");
      break;
    case 3:
      r.params = {1, 6, 6, 0.11};
      r.state0 = {0.0, 0.2, 0.0, 0.3};
      break;
    default:
      throw Error(ErrorKind::precondition, "reference set must be 1, 2 or 3 (got " + std::to_string(id) + ")");
  }
  return r;
}

struct ReferenceOptions {
  double S = 2 * pi;
  double T = 0.3;
  int ns = 400;
  int nt = 100;
  StripOptions strip;
};

struct ReferenceSurface {
  ReferenceSet set;
  BjorlingSurface surface;
  double T_used = 0.0;
  std::vector<double> refinement;  // grid |H| at (ns/2, nt/2) and (ns, nt)
  bool critical = false;           // core equations within 1e-8
};

inline constexpr double kCriticalTolerance = 1e-8;

inline ReferenceSurface build_reference(const ReferenceSet& set, const ReferenceOptions& opt = {}) {
  ReferenceSurface out;
  out.set = set;
  const auto model = CoreModel::from_boundary(set.params, set.state0, set.sheet);
  auto strip = continue_adaptive(model, opt.S, opt.T, opt.ns, opt.nt, opt.strip);
  out.T_used = strip.T;
  if (out.T_used < opt.T) out.set.notes.push_back("strip half-width reduced to T=" + fmt17(out.T_used));
  out.surface = bjorling_surface(std::move(strip));
  out.refinement = h_refinement(model, opt.S, out.T_used, {{opt.ns / 2, opt.nt / 2}}, opt.strip);
  out.refinement.push_back(out.surface.audit.grid.max_abs_H);
  out.critical = out.surface.audit.core_el() <= kCriticalTolerance;
  return out;
}

}  // namespace plateau::bjorling
