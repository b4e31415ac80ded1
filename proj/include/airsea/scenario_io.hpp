#pragma once

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "airsea/capacity.hpp"
#include "airsea/errors.hpp"
#include "airsea/result_table.hpp"

namespace airsea {

/// Reference operating point: 470 nm / 20 W Lambertian source (m = 20), SiPM
/// receiver, clear air over case-1 water, low-glint solar background. A bare
/// scenario reproduces this baseline; config keys override fields one by one.
inline LinkScenario default_scenario() {
  LinkScenario s;
  s.geometry = {10.0, 10.0};  // Z = 20 m, even water/air split
  s.tx.lambertian_order = 20.0;
  s.tx.p_tx_w = 20.0;
  s.tx.wavelength_nm = 470.0;
  s.rx.a_pd_m2 = 9e-6;
  s.rx.t_a = 0.98;
  s.rx.t_f = 1.0;
  s.rx.b_o_nm = 20.0;
  s.rx.n_rf = 1.5;
  s.rx.fov_deg = 30.0;  // the operating point at which I_b = 85 mA
  s.rx.gain = 1e6;
  s.rx.excess_noise = 1.1;
  s.rx.responsivity_a_w = 9e4;
  s.rx.dark_current_a = 1.10e-6;
  s.rx.load_ohm = 1e3;
  s.rx.bandwidth_hz = 5e6;  // R_b/2 at 10 Mbps
  s.env.k_w_per_m = 0.08;
  s.env.k_a_db_per_km = 0.19;
  s.env.l_t_w_m2_nm_sr = 0.025;
  s.env.temperature_k = 300.0;
  s.env.wind_speed_mps = 10.0;
  s.env.sigma_phi_r_deg = 10.0;
  s.slope_model = ModifiedWeibullModel::from_wind_speed(10.0);
  s.rx_tilt = RxTiltModel::with_sigma(10.0);
  return s;
}

namespace detail {

inline double get_number(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw ConfigError(std::string("config: '") + key + "' must be a number");
  return j[key].get<double>();
}

}  // namespace detail

/// Flat key/value scenario document (JSON object). All values SI except the
/// two published-unit exceptions (`k_a_db_per_km`, angles in degrees).
/// Unknown keys are rejected so typos cannot silently fall back to defaults.
inline LinkScenario scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  static const std::set<std::string> known = {
      "z_w_m", "z_a_m", "wavelength_nm", "p_tx_w", "lambertian_m", "tx_half_angle_deg",
      "a_pd_m2", "t_a", "t_f", "b_o_nm", "n_rf", "fov_deg", "sipm_gain", "excess_noise_f",
      "responsivity_a_per_w", "dark_current_a", "load_resistance_ohm", "b_e_hz",
      "k_w_per_m", "k_a_db_per_km", "l_t_w_m2_nm_sr", "temperature_k", "wind_speed_mps",
      "sigma_phi_r_deg", "slope_model", "mw_law", "empirical_pdf_csv"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ConfigError("config: unknown key '" + it.key() +
                        "' (see README for the scenario schema)");

  LinkScenario s = default_scenario();
  s.geometry.z_w_m = detail::get_number(j, "z_w_m", s.geometry.z_w_m);
  s.geometry.z_a_m = detail::get_number(j, "z_a_m", s.geometry.z_a_m);
  s.tx.wavelength_nm = detail::get_number(j, "wavelength_nm", s.tx.wavelength_nm);
  s.tx.p_tx_w = detail::get_number(j, "p_tx_w", s.tx.p_tx_w);
  if (j.contains("lambertian_m") && j.contains("tx_half_angle_deg"))
    throw ConfigError("config: give either 'lambertian_m' or 'tx_half_angle_deg', not both");
  s.tx.lambertian_order = detail::get_number(j, "lambertian_m", s.tx.lambertian_order);
  if (j.contains("tx_half_angle_deg"))
    s.tx.lambertian_order =
        lambertian_order_from_half_angle(detail::get_number(j, "tx_half_angle_deg", 15.0));
  s.rx.a_pd_m2 = detail::get_number(j, "a_pd_m2", s.rx.a_pd_m2);
  s.rx.t_a = detail::get_number(j, "t_a", s.rx.t_a);
  s.rx.t_f = detail::get_number(j, "t_f", s.rx.t_f);
  s.rx.b_o_nm = detail::get_number(j, "b_o_nm", s.rx.b_o_nm);
  s.rx.n_rf = detail::get_number(j, "n_rf", s.rx.n_rf);
  s.rx.fov_deg = detail::get_number(j, "fov_deg", s.rx.fov_deg);
  s.rx.gain = detail::get_number(j, "sipm_gain", s.rx.gain);
  s.rx.excess_noise = detail::get_number(j, "excess_noise_f", s.rx.excess_noise);
  s.rx.responsivity_a_w = detail::get_number(j, "responsivity_a_per_w", s.rx.responsivity_a_w);
  s.rx.dark_current_a = detail::get_number(j, "dark_current_a", s.rx.dark_current_a);
  s.rx.load_ohm = detail::get_number(j, "load_resistance_ohm", s.rx.load_ohm);
  s.rx.bandwidth_hz = detail::get_number(j, "b_e_hz", s.rx.bandwidth_hz);
  s.env.k_w_per_m = detail::get_number(j, "k_w_per_m", s.env.k_w_per_m);
  s.env.k_a_db_per_km = detail::get_number(j, "k_a_db_per_km", s.env.k_a_db_per_km);
  s.env.l_t_w_m2_nm_sr = detail::get_number(j, "l_t_w_m2_nm_sr", s.env.l_t_w_m2_nm_sr);
  s.env.temperature_k = detail::get_number(j, "temperature_k", s.env.temperature_k);
  s.env.wind_speed_mps = detail::get_number(j, "wind_speed_mps", s.env.wind_speed_mps);
  s.env.sigma_phi_r_deg = detail::get_number(j, "sigma_phi_r_deg", s.env.sigma_phi_r_deg);
  s.rx_tilt = RxTiltModel::with_sigma(s.env.sigma_phi_r_deg);

  MwLaw law = MwLaw::Linear;
  if (j.contains("mw_law")) {
    const std::string v = j["mw_law"].get<std::string>();
    if (v == "linear") law = MwLaw::Linear;
    else if (v == "power") law = MwLaw::Power;
    else throw ConfigError("config: mw_law must be 'linear' or 'power', got '" + v + "'");
  }
  std::string model = "mw";
  if (j.contains("slope_model")) {
    if (!j["slope_model"].is_string())
      throw ConfigError("config: slope_model must be a string");
    model = j["slope_model"].get<std::string>();
  }
  if (model == "mw") {
    s.slope_model = ModifiedWeibullModel::from_wind_speed(s.env.wind_speed_mps, law);
  } else if (model == "cm") {
    s.slope_model = CoxMunkModel::from_wind_speed(s.env.wind_speed_mps);
  } else if (model == "empirical") {
    if (!j.contains("empirical_pdf_csv"))
      throw ConfigError("config: slope_model 'empirical' requires 'empirical_pdf_csv'");
    s.slope_model =
        EmpiricalSlopeModel(EmpiricalPdf::from_csv_file(j["empirical_pdf_csv"].get<std::string>()));
  } else {
    throw ConfigError("config: slope_model must be 'cm', 'mw' or 'empirical', got '" + model +
                      "'");
  }
  s.check();
  return s;
}

inline LinkScenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  return scenario_from_json(j);
}

/// Canonical serialization used for the provenance hash; field order is fixed.
inline std::string scenario_fingerprint(const LinkScenario& s) {
  std::string out;
  const auto add = [&](const char* k, double v) {
    out += k;
    out += '=';
    out += format_cell(v);
    out += ';';
  };
  add("z_w", s.geometry.z_w_m);
  add("z_a", s.geometry.z_a_m);
  add("m", s.tx.lambertian_order);
  add("p_tx", s.tx.p_tx_w);
  add("wl", s.tx.wavelength_nm);
  add("a_pd", s.rx.a_pd_m2);
  add("t_a", s.rx.t_a);
  add("t_f", s.rx.t_f);
  add("b_o", s.rx.b_o_nm);
  add("n_rf", s.rx.n_rf);
  add("fov", s.rx.fov_deg);
  add("g", s.rx.gain);
  add("f", s.rx.excess_noise);
  add("r_e", s.rx.responsivity_a_w);
  add("i_d", s.rx.dark_current_a);
  add("r_l", s.rx.load_ohm);
  add("b_e", s.rx.bandwidth_hz);
  add("k_w", s.env.k_w_per_m);
  add("k_a", s.env.k_a_db_per_km);
  add("l_t", s.env.l_t_w_m2_nm_sr);
  add("temp", s.env.temperature_k);
  add("u", s.env.wind_speed_mps);
  add("sig_r", s.env.sigma_phi_r_deg);
  out += "model=" + slope_model_name(s.slope_model) + ';';
  if (const auto* mw = std::get_if<ModifiedWeibullModel>(&s.slope_model)) {
    add("mw_k", mw->shape_k);
    add("mw_lam", mw->scale_lambda_deg);
  } else if (const auto* cm = std::get_if<CoxMunkModel>(&s.slope_model)) {
    add("cm_s2", cm->slope_variance);
  }
  return out;
}

inline std::string scenario_hash_hex(const LinkScenario& s) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(scenario_fingerprint(s))));
  return buf;
}

}  // namespace airsea
