#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "airsea/math_util.hpp"

namespace airsea {

/// Vertical link split into an underwater leg and an atmospheric leg.
struct LinkGeometry {
  double z_w_m = 0.0;  // underwater depth
  double z_a_m = 0.0;  // air height

  double total_m() const { return z_w_m + z_a_m; }

  void check() const {
    if (!(z_w_m >= 0.0) || !(z_a_m >= 0.0))
      throw std::invalid_argument("geometry: leg lengths must be non-negative");
    if (!(total_m() > 0.0))
      throw std::invalid_argument("geometry: total range must be positive");
  }
};

struct TxModel {
  double lambertian_order = 1.0;  // m >= 1
  double p_tx_w = 0.0;
  double wavelength_nm = 0.0;

  void check() const {
    if (!(lambertian_order >= 1.0))
      throw std::invalid_argument("tx: Lambertian order must be >= 1");
    if (!(p_tx_w > 0.0)) throw std::invalid_argument("tx: transmit power must be positive");
  }
};

struct RxModel {
  double a_pd_m2 = 0.0;           // photodetector active area
  double t_a = 1.0;               // atmospheric transmittance
  double t_f = 1.0;               // optical filter transmittance
  double b_o_nm = 0.0;            // optical filter bandwidth
  double n_rf = 1.0;              // concentrator refractive index
  double fov_deg = 90.0;          // full receiver field of view
  double gain = 1.0;              // detector internal gain G
  double excess_noise = 1.0;      // excess noise factor F
  double responsivity_a_w = 0.0;  // R_e
  double dark_current_a = 0.0;    // I_d
  double load_ohm = 0.0;          // R_L
  double bandwidth_hz = 0.0;      // electrical bandwidth B_e

  double t_s() const { return t_a * t_f; }  // combined optical transmittance

  void check() const {
    if (!(a_pd_m2 > 0.0 && t_a > 0.0 && t_f > 0.0 && b_o_nm > 0.0 && n_rf > 0.0 &&
          gain > 0.0 && excess_noise > 0.0 && responsivity_a_w > 0.0 &&
          dark_current_a > 0.0 && load_ohm > 0.0 && bandwidth_hz > 0.0))
      throw std::invalid_argument("rx: all receiver parameters must be positive");
    if (!(fov_deg > 0.0 && fov_deg <= 90.0))
      throw std::invalid_argument("rx: FoV must lie in (0, 90] degrees");
  }
};

struct Environment {
  double k_w_per_m = 0.0;          // diffuse attenuation, water
  double k_a_db_per_km = 0.0;      // diffuse attenuation, air (dB/km as published)
  double l_t_w_m2_nm_sr = 0.0;     // upwelling solar radiance
  double temperature_k = 300.0;    // receiver noise temperature
  double wind_speed_mps = 0.0;
  double sigma_phi_r_deg = 0.0;    // Rx tilt standard deviation

  void check() const {
    if (!(k_w_per_m >= 0.0) || !(k_a_db_per_km >= 0.0))
      throw std::invalid_argument("env: attenuation coefficients must be non-negative");
    if (!(l_t_w_m2_nm_sr >= 0.0))
      throw std::invalid_argument("env: solar radiance must be non-negative");
    if (!(temperature_k > 0.0)) throw std::invalid_argument("env: temperature must be positive");
    if (!(sigma_phi_r_deg >= 0.0))
      throw std::invalid_argument("env: sigma_phi_r must be non-negative");
  }
};

/// SNR coefficients: gamma = mu^2 h^2 / (alpha h + beta).
struct NoiseCoeffs {
  double mu = 0.0;     // R_L * R_e * P_Tx
  double alpha = 0.0;  // signal-dependent (shot) term
  double beta = 0.0;   // signal-independent term
};

/// Published attenuation in dB/km to a Beer-Lambert coefficient in 1/m.
inline double k_a_per_m_from_db_per_km(double k_a_db_per_km) {
  return k_a_db_per_km / (10.0 * std::log10(std::numbers::e) * 1000.0);
}

/// Range-weighted water/air attenuation: (K_w Z_w + K_a Z_a) / Z.
inline double k_eff(const Environment& env, const LinkGeometry& geom) {
  const double z = geom.total_m();
  if (!(z > 0.0)) throw std::domain_error("k_eff: total range must be positive");
  return (env.k_w_per_m * geom.z_w_m + k_a_per_m_from_db_per_km(env.k_a_db_per_km) * geom.z_a_m) / z;
}

/// Optical concentrator gain n_rf^2 / sin^2(FoV).
inline double concentrator_gain(double n_rf, double fov_deg) {
  if (!(fov_deg > 0.0 && fov_deg <= 90.0))
    throw std::domain_error("concentrator_gain: FoV must lie in (0, 90] degrees");
  const double s = std::sin(deg_to_rad(fov_deg));
  return n_rf * n_rf / (s * s);
}

/// Deterministic path loss h_c = ((m+1)/2pi) (A_PD T_s g / Z^2) exp(-Z K_eff).
inline double path_loss(const LinkGeometry& geom, const TxModel& tx, const RxModel& rx,
                        const Environment& env) {
  const double z = geom.total_m();
  const double g = concentrator_gain(rx.n_rf, rx.fov_deg);
  return (tx.lambertian_order + 1.0) / (2.0 * std::numbers::pi) *
         (rx.a_pd_m2 * rx.t_s() * g / (z * z)) * std::exp(-z * k_eff(env, geom));
}

/// Instantaneous channel gain: h_c cos^m(phi_t) cos(phi_r), gated to zero when
/// the incidence angle exceeds the FoV.
inline double channel_gain(double h_c, double phi_t_deg, double phi_r_deg, double lambertian_order,
                           double fov_deg) {
  if (phi_r_deg > fov_deg) return 0.0;
  return h_c * std::pow(std::cos(deg_to_rad(phi_t_deg)), lambertian_order) *
         std::cos(deg_to_rad(phi_r_deg));
}

/// Lambertian order from the half-power half-angle: m = -ln 2 / ln cos(phi_half).
inline double lambertian_order_from_half_angle(double phi_half_deg) {
  if (!(phi_half_deg > 0.0 && phi_half_deg < 90.0))
    throw std::domain_error("lambertian order: half angle must lie in (0, 90) degrees");
  return -std::numbers::ln2 / std::log(std::cos(deg_to_rad(phi_half_deg)));
}

/// Solid angle subtended by a cone of full opening angle phi: 2pi(1 - cos(phi/2)).
inline double solid_angle_sr(double fov_full_deg) {
  if (!(fov_full_deg > 0.0 && fov_full_deg <= 360.0))
    throw std::domain_error("solid_angle: angle must lie in (0, 360] degrees");
  return 2.0 * std::numbers::pi * (1.0 - std::cos(deg_to_rad(fov_full_deg) / 2.0));
}

/// Background photocurrent from upwelling solar radiance:
/// I_b = R_e L_t Omega(FoV) T_a T_f B_o A_PD  (B_o in nm, L_t per nm).
inline double background_current(const RxModel& rx, double l_t_w_m2_nm_sr, double t_a, double t_f,
                                 double fov_full_deg) {
  return rx.responsivity_a_w * l_t_w_m2_nm_sr * solid_angle_sr(fov_full_deg) * t_a * t_f *
         rx.b_o_nm * rx.a_pd_m2;
}

/// mu = R_L R_e P_Tx; alpha = 2 q G F B_e R_L mu;
/// beta = R_L^2 2 q G F B_e (I_d + I_b) + 4 k_B T B_e R_L.
/// At the reference operating point the thermal term sits ~9 orders of
/// magnitude below the shot terms (ratio ~5.5e-10), so the default 300 K is
/// numerically inconsequential.
inline NoiseCoeffs noise_coeffs(const TxModel& tx, const RxModel& rx, double i_b_a,
                                double temperature_k) {
  NoiseCoeffs c;
  c.mu = rx.load_ohm * rx.responsivity_a_w * tx.p_tx_w;
  const double shot = 2.0 * kElectronCharge * rx.gain * rx.excess_noise * rx.bandwidth_hz;
  c.alpha = shot * rx.load_ohm * c.mu;
  c.beta = rx.load_ohm * rx.load_ohm * shot * (rx.dark_current_a + i_b_a) +
           4.0 * kBoltzmann * temperature_k * rx.bandwidth_hz * rx.load_ohm;
  return c;
}

/// Instantaneous electrical SNR gamma = mu^2 h^2 / (alpha h + beta); gamma(0) = 0.
inline double snr(double h, const NoiseCoeffs& c) {
  if (!(h >= 0.0)) throw std::domain_error("snr: channel gain must be non-negative");
  if (h == 0.0) return 0.0;
  return c.mu * c.mu * h * h / (c.alpha * h + c.beta);
}

}  // namespace airsea
