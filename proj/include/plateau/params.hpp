#pragma once

#include <cmath>
#include <string>

#include "plateau/error.hpp"

namespace plateau {

/// Sign convention shared by every module: kappa_g = sign * (T' . n) with
/// n = T x nu the outward co-normal, so Gauss-Bonnet reads
/// int K = oint kappa_g + 2 pi chi and a positively oriented disk boundary has
/// kappa_g = -1/R.
inline constexpr double kGeodesicCurvatureSign = 1.0;

/// Rigidities of the energy
///   sigma * Area + eta * int K + oint (alpha kappa^2 + beta) ds.
/// sigma > 0 and alpha >= 0 are enforced unless `allow_nonphysical` is set
/// (one of the reference surfaces uses alpha = -1).
struct EnergyParams {
  double sigma = 1.0;  // surface tension
  double eta = 0.0;    // saddle-splay modulus
  double alpha = 1.0;  // flexural rigidity
  double beta = 0.0;   // edge tension
  bool allow_nonphysical = false;

  void validate() const {
    require(std::isfinite(sigma) && std::isfinite(eta) && std::isfinite(alpha) &&
                std::isfinite(beta),
            "energy parameters must be finite");
    if (!allow_nonphysical) {
      require(sigma > 0.0, "sigma must be > 0 (set allow_nonphysical to override)");
      require(alpha >= 0.0, "alpha must be >= 0 (set allow_nonphysical to override)");
    }
  }

  bool physical() const { return sigma > 0.0 && alpha >= 0.0; }
};

/// Contact-angle sheet theta = sheet * pi/2 of a critical boundary:
/// kappa_g = sheet * kappa, nu = -sheet * B, n = sheet * N, tau_g = -tau.
enum class Sheet : int { plus = 1, minus = -1 };

inline double sign_of(Sheet s) { return s == Sheet::plus ? 1.0 : -1.0; }

}  // namespace plateau
