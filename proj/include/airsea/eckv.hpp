#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "airsea/errors.hpp"
#include "airsea/quadrature.hpp"

namespace airsea {

/// Unified gravity-to-capillary directional wave spectrum,
/// psi(k, phi) = S(k) D(k, phi) / k. Constants follow the published
/// parameterization; the fully developed inverse wave age (0.84) is the
/// default since the calibration datasets do not report wave age.
struct EckvParams {
  double u10_mps = 10.0;          // wind speed at 10 m
  double inverse_wave_age = 0.84; // Omega_c; 0.84 = fully developed
  double gravity = 9.81;          // m/s^2
  double km = 370.0;              // capillary peak wavenumber, rad/m
  double cm = 0.23;               // minimum phase speed, m/s
  double cd10n = 0.00144;         // neutral drag coefficient for u* = sqrt(Cd) U10

  void check() const {
    if (!(u10_mps > 0.0)) throw std::invalid_argument("eckv: wind speed must be positive");
    if (!(inverse_wave_age >= 0.83 && inverse_wave_age <= 5.0))
      throw std::invalid_argument("eckv: inverse wave age must lie in [0.83, 5]");
  }
};

namespace detail {

struct EckvDerived {
  double u_star, gamma, sigma, alpha_p, alpha_m, kp, cp;
};

inline EckvDerived eckv_derived(const EckvParams& p) {
  EckvDerived d;
  d.u_star = std::sqrt(p.cd10n) * p.u10_mps;
  const double oc = p.inverse_wave_age;
  d.gamma = (oc < 1.0) ? 1.7 : 1.7 + 6.0 * std::log10(oc);
  d.sigma = 0.08 * (1.0 + 4.0 * std::pow(oc, -3.0));
  d.alpha_p = 0.006 * std::pow(oc, 0.55);
  d.alpha_m = (d.u_star <= p.cm) ? 0.01 * (1.0 + std::log(d.u_star / p.cm))
                                 : 0.01 * (1.0 + 3.0 * std::log(d.u_star / p.cm));
  const double k0 = p.gravity / (p.u10_mps * p.u10_mps);
  d.kp = k0 * oc * oc;
  d.cp = std::sqrt(p.gravity / d.kp);
  return d;
}

inline double phase_speed(double k, const EckvParams& p) {
  return std::sqrt((p.gravity / k) * (1.0 + (k / p.km) * (k / p.km)));
}

}  // namespace detail

/// Omnidirectional elevation-variance spectrum S(k), long-wave plus
/// short-wave curvature contributions over k^3. The peak-enhancement and
/// Pierson-Moskowitz cutoff factors multiply both sides (the variant that
/// keeps the short-wave side bounded at large scales).
inline double eckv_omnidirectional_spectrum(double k, const EckvParams& p) {
  if (!(k > 0.0)) throw std::domain_error("eckv spectrum: k must be positive");
  p.check();
  const auto d = detail::eckv_derived(p);
  const double c = detail::phase_speed(k, p);
  const double sqrt_kkp = std::sqrt(k / d.kp);
  const double l_pm = std::exp(-1.25 * (d.kp / k) * (d.kp / k));
  const double peak = std::exp(-(sqrt_kkp - 1.0) * (sqrt_kkp - 1.0) / (2.0 * d.sigma * d.sigma));
  const double j_p = std::pow(d.gamma, peak);
  const double f_p = l_pm * j_p * std::exp(-p.inverse_wave_age / std::sqrt(10.0) * (sqrt_kkp - 1.0));
  const double f_m = l_pm * j_p * std::exp(-0.25 * (k / p.km - 1.0) * (k / p.km - 1.0));
  const double b_l = 0.5 * d.alpha_p * (d.cp / c) * f_p;
  const double b_h = 0.5 * d.alpha_m * (p.cm / c) * f_m;
  return (b_l + b_h) / (k * k * k);
}

/// Angular spreading D(k, phi) = [1 + Delta(k) cos(2 phi)] / (2 pi);
/// unit-normalized over (-pi, pi] by construction for every k.
inline double eckv_spreading(double k, double phi_rad, const EckvParams& p) {
  if (!(k > 0.0)) throw std::domain_error("eckv spreading: k must be positive");
  p.check();
  const auto d = detail::eckv_derived(p);
  const double c = detail::phase_speed(k, p);
  const double a0 = 0.1733;  // ln(2)/4
  const double ap = 4.0;
  const double am = 0.13 * d.u_star / p.cm;
  const double delta =
      std::tanh(a0 + ap * std::pow(c / d.cp, 2.5) + am * std::pow(p.cm / c, 2.5));
  return (1.0 + delta * std::cos(2.0 * phi_rad)) / (2.0 * std::numbers::pi);
}

/// Directional spectrum psi(k, phi) = S(k) D(k, phi) / k.
inline double eckv_psi(double k, double phi_rad, const EckvParams& p) {
  return eckv_omnidirectional_spectrum(k, p) * eckv_spreading(k, phi_rad, p) / k;
}

inline constexpr double kEckvKMin = 1e-3;  // rad/m
inline constexpr double kEckvKMax = 1e5;   // rad/m

namespace detail {

/// Spectral moment int k^order S(k) dk on the standard log span; the panel
/// count doubles until the Kronrod/Gauss discrepancy meets rel_tol.
template <class SpectrumFn>
inline double spectral_moment(SpectrumFn&& s_of_k, int order, double rel_tol) {
  int panels = 160;
  QuadResult r;
  for (int attempt = 0; attempt < 5; ++attempt) {
    r = integrate_log_panels(
        [&](double k) { return std::pow(k, order) * s_of_k(k); }, kEckvKMin, kEckvKMax, panels);
    if (r.abs_error <= rel_tol * std::fabs(r.value)) return r.value;
    panels *= 2;
  }
  throw NumericError("eckv spectral moment: quadrature not converged; partial sum " +
                     std::to_string(r.value) + " with error estimate " +
                     std::to_string(r.abs_error));
}

}  // namespace detail

/// Mean square slope int k^2 S(k) dk over [1e-3, 1e5] rad/m.
inline double eckv_mean_square_slope(const EckvParams& p, double rel_tol = 1e-4) {
  p.check();
  return detail::spectral_moment([&](double k) { return eckv_omnidirectional_spectrum(k, p); }, 2,
                                 rel_tol);
}

/// Elevation variance int S(k) dk; significant wave height is 4 sqrt(var).
inline double eckv_elevation_variance(const EckvParams& p, double rel_tol = 1e-4) {
  p.check();
  return detail::spectral_moment([&](double k) { return eckv_omnidirectional_spectrum(k, p); }, 0,
                                 rel_tol);
}

}  // namespace airsea
