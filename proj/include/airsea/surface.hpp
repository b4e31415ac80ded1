#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "airsea/empirical_pdf.hpp"
#include "airsea/math_util.hpp"
#include "airsea/rng.hpp"

namespace airsea {

// ---------------------------------------------------------------------------
// Transmitter tilt models
// ---------------------------------------------------------------------------

/// Wind-driven slope statistics with variance linear in wind speed:
/// sigma_U^2 = 0.003 + 0.00512 U. Calibrated for U in [1, 14] m/s;
/// construction outside that range is allowed but flagged.
struct CoxMunkModel {
  double wind_speed_mps = 0.0;
  double slope_variance = 0.0;  // tan^2 units
  bool wind_in_validity_range = true;

  static CoxMunkModel from_wind_speed(double u_mps) {
    CoxMunkModel m;
    m.wind_speed_mps = u_mps;
    m.slope_variance = 0.003 + 0.00512 * u_mps;
    m.wind_in_validity_range = (u_mps >= 1.0 && u_mps <= 14.0);
    if (!(m.slope_variance > 0.0))
      throw std::invalid_argument("cox-munk: slope variance must be positive");
    return m;
  }
};

/// Tilt-angle density per radian on [0, pi/2).
/// normalized=true (default) scales the printed marginal by 2*pi so it
/// integrates to one; normalized=false reproduces the source expression
/// verbatim (which carries the joint-density 1/(2*pi*sigma^2) prefactor and
/// integrates to 1/(2*pi)).
inline double cm_pdf(double phi_t_rad, const CoxMunkModel& model, bool normalized = true) {
  if (!(phi_t_rad >= 0.0 && phi_t_rad < std::numbers::pi / 2.0))
    throw std::domain_error("cm_pdf: phi_t must lie in [0, pi/2)");
  const double s2 = model.slope_variance;
  const double t = std::tan(phi_t_rad);
  const double sec = 1.0 / std::cos(phi_t_rad);
  const double core = t * sec * sec / (2.0 * std::numbers::pi * s2) *
                      std::exp(-t * t / (2.0 * s2));
  return normalized ? 2.0 * std::numbers::pi * core : core;
}

/// CDF of the normalized marginal: 1 - exp(-tan^2(phi)/(2 sigma^2)).
inline double cm_cdf(double phi_t_rad, const CoxMunkModel& model) {
  if (phi_t_rad <= 0.0) return 0.0;
  if (phi_t_rad >= std::numbers::pi / 2.0) return 1.0;
  const double t = std::tan(phi_t_rad);
  return -std::expm1(-t * t / (2.0 * model.slope_variance));
}

/// Inverse CDF; u in (0,1). arctan(sqrt(-2 sigma^2 ln(1-u))), in [0, pi/2).
inline double cm_quantile(double u, const CoxMunkModel& model) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("cm_quantile: u must be in (0,1)");
  return std::atan(std::sqrt(-2.0 * model.slope_variance * std::log1p(-u)));
}

/// Draw phi_t (radians) by exact inverse-CDF sampling.
inline double cm_sample(Rng& rng, const CoxMunkModel& model) {
  return cm_quantile(rng.unit_open(), model);
}

enum class MwLaw { Linear, Power };

/// Wind-speed laws for the Weibull shape/scale parameters.
/// Linear: k = 1.7454 + 0.0071 U, lambda = 13.6485 + 0.2406 U.
/// Power:  k = 1.6506 U^0.0428,  lambda = 11.4724 U^0.1499.
inline std::pair<double, double> mw_params(double u_mps, MwLaw law = MwLaw::Linear) {
  if (!(u_mps > 0.0)) throw std::domain_error("mw_params: wind speed must be positive");
  if (law == MwLaw::Linear)
    return {1.7454 + 0.0071 * u_mps, 13.6485 + 0.2406 * u_mps};
  return {1.6506 * std::pow(u_mps, 0.0428), 11.4724 * std::pow(u_mps, 0.1499)};
}

/// Weibull tilt-angle model in degrees; shape/scale tied to wind speed.
/// Calibrated against 6-15.2 m/s data; out-of-range winds are flagged.
struct ModifiedWeibullModel {
  double wind_speed_mps = 0.0;
  double shape_k = 0.0;
  double scale_lambda_deg = 0.0;  // degrees
  MwLaw law = MwLaw::Linear;
  bool wind_in_validity_range = true;

  static ModifiedWeibullModel from_wind_speed(double u_mps, MwLaw law = MwLaw::Linear) {
    const auto [k, lam] = mw_params(u_mps, law);
    ModifiedWeibullModel m;
    m.wind_speed_mps = u_mps;
    m.shape_k = k;
    m.scale_lambda_deg = lam;
    m.law = law;
    m.wind_in_validity_range = (u_mps >= 6.0 && u_mps <= 15.2);
    m.check();
    return m;
  }

  static ModifiedWeibullModel from_params(double k, double lambda_deg) {
    ModifiedWeibullModel m;
    m.shape_k = k;
    m.scale_lambda_deg = lambda_deg;
    m.check();
    return m;
  }

  void check() const {
    if (!(shape_k > 1.0)) throw std::invalid_argument("modified weibull: shape k must be > 1");
    if (!(scale_lambda_deg > 0.0))
      throw std::invalid_argument("modified weibull: scale lambda must be > 0");
  }
};

/// Density per degree. Support truncated at 90 degrees (the tail mass there
/// is below 1e-9 for all in-range winds, an accepted bias).
inline double mw_pdf(double phi_t_deg, const ModifiedWeibullModel& model) {
  if (!(phi_t_deg >= 0.0)) throw std::domain_error("mw_pdf: phi_t must be non-negative");
  if (phi_t_deg > 90.0) return 0.0;
  if (phi_t_deg == 0.0) return 0.0;  // shape > 1 vanishes at the origin
  const double r = phi_t_deg / model.scale_lambda_deg;
  return model.shape_k / model.scale_lambda_deg * std::pow(r, model.shape_k - 1.0) *
         std::exp(-std::pow(r, model.shape_k));
}

inline double mw_cdf(double phi_t_deg, const ModifiedWeibullModel& model) {
  if (phi_t_deg <= 0.0) return 0.0;
  return -std::expm1(-std::pow(phi_t_deg / model.scale_lambda_deg, model.shape_k));
}

/// Weibull quantile, lambda * (-ln(1-u))^(1/k); u in (0,1). May exceed the
/// 90-degree truncation point for u extremely close to one.
inline double mw_quantile(double u, const ModifiedWeibullModel& model) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("mw_quantile: u must be in (0,1)");
  return model.scale_lambda_deg * std::pow(-std::log1p(-u), 1.0 / model.shape_k);
}

/// Draw phi_t (degrees); draws beyond 90 degrees are rejected and redrawn.
inline double mw_sample(Rng& rng, const ModifiedWeibullModel& model) {
  for (;;) {
    const double v = mw_quantile(rng.unit_open(), model);
    if (v <= 90.0) return v;
  }
}

// ---------------------------------------------------------------------------
// Empirical tilt model
// ---------------------------------------------------------------------------

/// Tabulated tilt-angle distribution. The loaded curve must integrate to
/// 1 +/- 0.02; it is then renormalized exactly so the sampler, CDF and
/// capacity quadratures see a proper density.
class EmpiricalSlopeModel {
 public:
  explicit EmpiricalSlopeModel(EmpiricalPdf pdf) : pdf_(std::move(pdf)) {
    pdf_.validate(0.98, 1.02);
    const double area = pdf_.trapezoid_area();
    for (double& d : pdf_.densities_per_deg) d /= area;
    cdf_.resize(pdf_.size(), 0.0);
    for (std::size_t i = 1; i < pdf_.size(); ++i)
      cdf_[i] = cdf_[i - 1] + 0.5 * (pdf_.densities_per_deg[i] + pdf_.densities_per_deg[i - 1]) *
                                  (pdf_.angles_deg[i] - pdf_.angles_deg[i - 1]);
  }

  const EmpiricalPdf& pdf() const { return pdf_; }

  double pdf_deg(double angle_deg) const { return pdf_.density_at(angle_deg); }

  double cdf_deg(double angle_deg) const {
    const auto& x = pdf_.angles_deg;
    if (angle_deg <= x.front()) return 0.0;
    if (angle_deg >= x.back()) return 1.0;
    const auto it = std::upper_bound(x.begin(), x.end(), angle_deg);
    const std::size_t hi = static_cast<std::size_t>(it - x.begin());
    const std::size_t lo = hi - 1;
    const double t = angle_deg - x[lo];
    const double f0 = pdf_.densities_per_deg[lo];
    const double slope = (pdf_.densities_per_deg[hi] - f0) / (x[hi] - x[lo]);
    return cdf_[lo] + f0 * t + 0.5 * slope * t * t;
  }

  /// Exact inverse of the piecewise-quadratic (trapezoid) CDF.
  double quantile_deg(double u) const {
    if (!(u > 0.0 && u < 1.0))
      throw std::domain_error("empirical quantile: u must be in (0,1)");
    const double p = u * cdf_.back();  // guard residual rounding in the table
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), p);
    std::size_t hi = static_cast<std::size_t>(it - cdf_.begin());
    if (hi == 0) hi = 1;
    if (hi >= cdf_.size()) hi = cdf_.size() - 1;
    const std::size_t lo = hi - 1;
    const auto& x = pdf_.angles_deg;
    const double dp = p - cdf_[lo];
    const double f0 = pdf_.densities_per_deg[lo];
    const double w = x[hi] - x[lo];
    const double slope = (pdf_.densities_per_deg[hi] - f0) / w;
    double t;
    if (std::fabs(slope) * w < 1e-12 * (f0 + 1e-300)) {
      t = dp / f0;
    } else {
      const double disc = f0 * f0 + 2.0 * slope * dp;
      t = (disc <= 0.0) ? dp / std::max(f0, 1e-300)
                        : (std::sqrt(disc) - f0) / slope;
    }
    return std::min(std::max(x[lo] + t, x[lo]), x[hi]);
  }

  double sample(Rng& rng) const { return quantile_deg(rng.unit_open()); }

 private:
  EmpiricalPdf pdf_;
  std::vector<double> cdf_;
};

// ---------------------------------------------------------------------------
// Receiver tilt
// ---------------------------------------------------------------------------

/// Receiver incidence angle: |N(0, sigma^2)| in degrees, clamped to [0, 90].
/// Field-of-view truncation is not applied here; out-of-FoV draws are kept
/// and zeroed by the channel gate.
struct RxTiltModel {
  double sigma_deg = 0.0;

  static RxTiltModel with_sigma(double sigma_deg) {
    if (!(sigma_deg >= 0.0))
      throw std::invalid_argument("rx tilt: sigma must be non-negative");
    return RxTiltModel{sigma_deg};
  }
};

inline double rx_sample(Rng& rng, const RxTiltModel& model) {
  if (model.sigma_deg == 0.0) return 0.0;
  const double v = std::fabs(model.sigma_deg * rng.normal());
  return std::min(v, 90.0);
}

/// Folded-normal density per radian (angles in radians).
inline double rx_pdf_rad(double phi_r_rad, double sigma_deg) {
  const double s = deg_to_rad(sigma_deg);
  return std::sqrt(2.0 / std::numbers::pi) / s * std::exp(-phi_r_rad * phi_r_rad / (2.0 * s * s));
}

inline double rx_quantile_rad(double p, double sigma_deg) {
  return deg_to_rad(sigma_deg) * std::numbers::sqrt2 * erf_inv(p);
}

/// Probability the received beam lies inside the FoV: erf(FoV/(sigma sqrt 2)).
/// A rigid receiver (sigma = 0) is always inside.
inline double p_in(double sigma_phi_r_deg, double fov_deg) {
  if (!(fov_deg > 0.0 && fov_deg <= 90.0))
    throw std::domain_error("p_in: FoV must lie in (0, 90] degrees");
  if (sigma_phi_r_deg == 0.0) return 1.0;
  return std::erf(fov_deg / (sigma_phi_r_deg * std::numbers::sqrt2));
}

inline double p_out(double sigma_phi_r_deg, double fov_deg) {
  return 1.0 - p_in(sigma_phi_r_deg, fov_deg);
}

// ---------------------------------------------------------------------------
// Tagged transmitter-tilt variant
// ---------------------------------------------------------------------------

using SlopeModel = std::variant<CoxMunkModel, ModifiedWeibullModel, EmpiricalSlopeModel>;

/// Density per radian at phi_t (radians), uniform across model kinds.
inline double slope_pdf_rad(const SlopeModel& model, double phi_t_rad) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CoxMunkModel>) {
          if (phi_t_rad >= std::numbers::pi / 2.0) return 0.0;
          return cm_pdf(phi_t_rad, m, true);
        } else if constexpr (std::is_same_v<T, ModifiedWeibullModel>) {
          return mw_pdf(rad_to_deg(phi_t_rad), m) * 180.0 / std::numbers::pi;
        } else {
          return m.pdf_deg(rad_to_deg(phi_t_rad)) * 180.0 / std::numbers::pi;
        }
      },
      model);
}

inline double slope_quantile_deg(const SlopeModel& model, double p) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CoxMunkModel>) {
          return rad_to_deg(cm_quantile(p, m));
        } else if constexpr (std::is_same_v<T, ModifiedWeibullModel>) {
          return mw_quantile(p, m);
        } else {
          return m.quantile_deg(p);
        }
      },
      model);
}

inline double slope_sample_deg(const SlopeModel& model, Rng& rng) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CoxMunkModel>) {
          return rad_to_deg(cm_sample(rng, m));
        } else if constexpr (std::is_same_v<T, ModifiedWeibullModel>) {
          return mw_sample(rng, m);
        } else {
          return m.sample(rng);
        }
      },
      model);
}

inline std::string slope_model_name(const SlopeModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, CoxMunkModel>) return "cm";
        else if constexpr (std::is_same_v<T, ModifiedWeibullModel>) return "mw";
        else return "empirical";
      },
      model);
}

/// Out-of-validity wind speeds are usable but travel with a warning record.
inline std::optional<std::string> slope_validity_warning(const SlopeModel& model) {
  if (const auto* cm = std::get_if<CoxMunkModel>(&model)) {
    if (!cm->wind_in_validity_range)
      return "cox-munk wind speed " + std::to_string(cm->wind_speed_mps) +
             " m/s outside calibrated range [1, 14]";
  } else if (const auto* mw = std::get_if<ModifiedWeibullModel>(&model)) {
    if (!mw->wind_in_validity_range)
      return "modified-weibull wind speed " + std::to_string(mw->wind_speed_mps) +
             " m/s outside calibrated range [6, 15.2]";
  }
  return std::nullopt;
}

}  // namespace airsea
