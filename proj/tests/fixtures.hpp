#pragma once
// Random draws shared by the unit tests and the acceptance runner.

#include <cstdint>
#include <random>

#include "plateau/boundary_system.hpp"
#include "plateau/params.hpp"

namespace fixtures {

// Uniform in [0, 1) with the same bits on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : g_(seed) {}
  double uniform() { return double(g_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 g_;
};

struct BoundaryDraw {
  plateau::EnergyParams params;
  plateau::boundary::BoundaryState state0;
  plateau::boundary::Trajectory trajectory;
};

// Boundary-system trajectories that stay in the generic chart: chart margin
// min |2 alpha kg + eta| >= 0.25 and |tau_g| <= 2 over the run. `rejected`
// counts the draws that left that region.
inline std::vector<BoundaryDraw> generic_boundary_draws(int count, std::uint64_t seed, double length,
                                                        double step, int* rejected = nullptr) {
  using namespace plateau;
  Rng rng(seed);
  std::vector<BoundaryDraw> out;
  int rej = 0;
  while (int(out.size()) < count) {
    EnergyParams p;
    p.sigma = rng.uniform(0.5, 2.0);
    p.eta = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0);
    p.alpha = rng.uniform(0.5, 2.0);
    p.beta = rng.uniform(-2.0, 2.0);
    boundary::BoundaryState s0{0.0, rng.uniform(-2, 2), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (std::abs(2 * p.alpha * s0.kappa_g + p.eta) < 0.25) {
      ++rej;
      continue;
    }
    try {
      auto tr = boundary::boundary_integrate(p, s0, length, step);
      const auto m = boundary::chart_margins(tr);
      if (m.min_chart < 0.25 || m.max_tau_g > 2.0) {
        ++rej;
        continue;
      }
      out.push_back({p, s0, std::move(tr)});
    } catch (const Error&) {
      ++rej;
    }
  }
  if (rejected) *rejected = rej;
  return out;
}

}  // namespace fixtures
