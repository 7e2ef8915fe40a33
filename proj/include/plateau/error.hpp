#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace plateau {

enum class ErrorKind {
  precondition,
  integration_failure,
  divergence,
  chart_singularity,
  topology,
  meshing,
  singular_patch,
  accuracy,
  non_convergence,
  domain,
  strip_truncation,
  step_size,
};

inline std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::integration_failure: return "integration-failure";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::chart_singularity: return "chart-singularity";
    case ErrorKind::topology: return "topology";
    case ErrorKind::meshing: return "meshing";
    case ErrorKind::singular_patch: return "singular-patch";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::domain: return "domain";
    case ErrorKind::strip_truncation: return "strip-truncation";
    case ErrorKind::step_size: return "step-size";
  }
  return "unknown";
}

/// Every failure raised by the library. `where()` carries the arc length,
/// cell index or other locator when the failing operation has one (NaN
/// otherwise).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg,
        double where = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(std::string(to_string(kind)) + ": " + msg),
        kind_(kind),
        where_(where) {}

  ErrorKind kind() const noexcept { return kind_; }
  double where() const noexcept { return where_; }
  bool is_precondition() const noexcept { return kind_ == ErrorKind::precondition; }

 private:
  ErrorKind kind_;
  double where_;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(ErrorKind::precondition, msg);
}

}  // namespace plateau
