#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace airsea {

// SI exact values (2019 redefinition).
inline constexpr double kElectronCharge = 1.602176634e-19;  // C
inline constexpr double kBoltzmann = 1.380649e-23;          // J/K

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Inverse of std::erf on (-1, 1). Bisection plus Newton polish; the few
/// callers (quantile bounds, folded-normal quantiles) are not hot paths.
inline double erf_inv(double p) {
  if (!(p > -1.0 && p < 1.0)) return std::numeric_limits<double>::quiet_NaN();
  if (p == 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  const double target = std::fabs(p);
  while (std::erf(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 40.0) break;  // erf saturates well before this
  }
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::erf(mid) < target ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  // Newton steps: d/dx erf(x) = 2/sqrt(pi) exp(-x^2)
  for (int i = 0; i < 3; ++i) {
    const double err = std::erf(x) - target;
    x -= err * 0.5 * std::sqrt(std::numbers::pi) * std::exp(x * x);
  }
  return p < 0.0 ? -x : x;
}

}  // namespace airsea
