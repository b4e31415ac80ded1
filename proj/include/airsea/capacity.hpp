#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "airsea/channel.hpp"
#include "airsea/errors.hpp"
#include "airsea/quadrature.hpp"
#include "airsea/rng.hpp"
#include "airsea/surface.hpp"

namespace airsea {

/// Everything needed to evaluate one link: geometry, optics, environment and
/// the two misalignment models.
struct LinkScenario {
  LinkGeometry geometry;
  TxModel tx;
  RxModel rx;
  Environment env;
  SlopeModel slope_model;
  RxTiltModel rx_tilt;

  void check() const {
    geometry.check();
    tx.check();
    rx.check();
    env.check();
  }
};

/// Derived link-budget quantities for one scenario. The background current is
/// always recomputed from L_t and the FoV, so FoV sweeps move signal
/// collection and background noise together.
struct LinkBudget {
  double k_eff_per_m = 0.0;
  double concentrator_gain = 0.0;
  double h_c = 0.0;
  double solid_angle_sr = 0.0;
  double i_b_a = 0.0;
  NoiseCoeffs noise;
  double p_in = 0.0;
};

inline LinkBudget link_budget(const LinkScenario& s) {
  s.check();
  LinkBudget b;
  b.k_eff_per_m = k_eff(s.env, s.geometry);
  b.concentrator_gain = concentrator_gain(s.rx.n_rf, s.rx.fov_deg);
  b.h_c = path_loss(s.geometry, s.tx, s.rx, s.env);
  b.solid_angle_sr = solid_angle_sr(s.rx.fov_deg);
  b.i_b_a = background_current(s.rx, s.env.l_t_w_m2_nm_sr, s.rx.t_a, s.rx.t_f, s.rx.fov_deg);
  b.noise = noise_coeffs(s.tx, s.rx, b.i_b_a, s.env.temperature_k);
  b.p_in = p_in(s.rx_tilt.sigma_deg, s.rx.fov_deg);
  return b;
}

enum class CapacityMethod { AngleQuadrature, GainDensity, MonteCarlo };

inline const char* capacity_method_name(CapacityMethod m) {
  switch (m) {
    case CapacityMethod::AngleQuadrature: return "angle_quadrature";
    case CapacityMethod::GainDensity: return "gain_density";
    case CapacityMethod::MonteCarlo: return "monte_carlo";
  }
  return "?";
}

struct CapacityEstimate {
  double c_erg_bpshz = 0.0;
  CapacityMethod method = CapacityMethod::AngleQuadrature;
  double p_in = 1.0;
  double p_out = 0.0;
  double std_error = 0.0;     // Monte Carlo only
  std::uint64_t seed = 0;     // Monte Carlo only
  std::uint64_t samples = 0;  // Monte Carlo only
};

/// IM/DD capacity approximation C = 1/2 log2(1 + (e/2pi) gamma), with e
/// Euler's number (2.71828...), not the electron charge.
inline double instantaneous_capacity(double gamma) {
  if (!(gamma >= 0.0)) throw std::domain_error("capacity: gamma must be non-negative");
  return 0.5 * std::log2(1.0 + std::numbers::e / (2.0 * std::numbers::pi) * gamma);
}

namespace detail {

// Integration support of the tilt model, [q(eps), min(q(1-eps), 90 deg)] in
// radians, so spike-like densities are never missed by the outer panels.
inline std::pair<double, double> slope_support_rad(const SlopeModel& model) {
  const double eps = 1e-12;
  const double lo = deg_to_rad(slope_quantile_deg(model, eps));
  const double hi = deg_to_rad(std::min(slope_quantile_deg(model, 1.0 - eps), 90.0));
  return {std::max(lo * 0.5, 0.0), std::min(hi, std::numbers::pi / 2.0 * (1.0 - 1e-12))};
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed + 0x632BE59BD9B4E019ull * (index + 1);
  return airsea::detail::splitmix64(s);
}

}  // namespace detail

/// Ergodic capacity by nested adaptive quadrature in the angle domain:
/// C = int f_t(phi_t) int_0^FoV C(gamma(h(phi_t, phi_r))) f_r(phi_r) dphi_r dphi_t.
/// The out-of-FoV event contributes zero capacity, so it never appears
/// explicitly; P_in is reported from the same receiver-tilt density.
inline CapacityEstimate ergodic_capacity_angle(const LinkScenario& s, const QuadSpec& spec = {}) {
  const LinkBudget b = link_budget(s);
  const double m = s.tx.lambertian_order;
  const double fov_rad = deg_to_rad(s.rx.fov_deg);
  const double sigma = s.rx_tilt.sigma_deg;

  const auto cap_at = [&](double phi_t_rad, double phi_r_rad) {
    const double h = b.h_c * std::pow(std::cos(phi_t_rad), m) * std::cos(phi_r_rad);
    return instantaneous_capacity(snr(h, b.noise));
  };

  const auto [t_lo, t_hi] = detail::slope_support_rad(s.slope_model);
  QuadSpec inner_spec = spec;
  inner_spec.rel_tol = std::max(spec.rel_tol * 0.1, 1e-10);
  inner_spec.max_intervals = std::max(spec.max_intervals / 8, 200);

  CapacityEstimate out;
  out.method = CapacityMethod::AngleQuadrature;

  if (sigma == 0.0) {
    // rigid receiver: phi_r identically zero, always inside the FoV
    const auto q = integrate_adaptive(
        [&](double phi_t) { return cap_at(phi_t, 0.0) * slope_pdf_rad(s.slope_model, phi_t); },
        t_lo, t_hi, spec);
    if (!q.converged)
      throw NumericError("angle quadrature did not converge; achieved abs error " +
                         std::to_string(q.abs_error));
    out.c_erg_bpshz = q.value;
    out.p_in = 1.0;
    out.p_out = 0.0;
    return out;
  }

  const double r_hi = std::min(fov_rad, rx_quantile_rad(1.0 - 1e-13, sigma));
  const auto q = integrate_adaptive(
      [&](double phi_t) {
        const auto inner = integrate_adaptive(
            [&](double phi_r) { return cap_at(phi_t, phi_r) * rx_pdf_rad(phi_r, sigma); }, 0.0,
            r_hi, inner_spec);
        return inner.value * slope_pdf_rad(s.slope_model, phi_t);
      },
      t_lo, t_hi, spec);
  if (!q.converged)
    throw NumericError("angle quadrature did not converge; achieved abs error " +
                       std::to_string(q.abs_error));

  // P_in from the same density; cross-checkable against erf(FoV/(sigma sqrt 2)).
  // Integrating only to the tilt quantile keeps the density spike resolvable
  // at small sigma; the neglected tail mass is below 1e-13.
  const auto pq = integrate_adaptive([&](double phi_r) { return rx_pdf_rad(phi_r, sigma); }, 0.0,
                                     r_hi, QuadSpec{1e-12, 1e-15, 400});
  out.c_erg_bpshz = q.value;
  out.p_in = pq.value;
  out.p_out = 1.0 - pq.value;
  return out;
}

namespace detail {

// Density of X = cos^m(phi_t): f_t(arccos(x^{1/m})) x^{1/m-1} / (m sqrt(1-x^{2/m})).
inline double cos_pow_density(const SlopeModel& model, double m, double x) {
  if (!(x > 0.0) || x >= 1.0) return 0.0;
  const double xr = std::pow(x, 1.0 / m);
  const double phi = std::acos(xr);
  const double sin_phi = std::sqrt(std::max(1.0 - xr * xr, 0.0));
  if (sin_phi == 0.0) return 0.0;
  return slope_pdf_rad(model, phi) * std::pow(x, 1.0 / m - 1.0) / (m * sin_phi);
}

}  // namespace detail

/// Continuous part of the channel-gain density (the P_in-weighted term of the
/// gain mixture; the complementary P_out mass sits in a point at h = 0).
/// Built by change of variables from the angle densities:
///   X = cos^m(phi_t), Y = cos(phi_r) conditioned on phi_r <= FoV,
///   f_h'(h) = int f_X((h/h_c)/cos phi_r) f_r(phi_r)/P_in / (h_c cos phi_r) dphi_r.
/// Out-of-support h returns zero density.
inline double gain_density_h(const LinkScenario& s, double h, const QuadSpec& spec = {}) {
  const LinkBudget b = link_budget(s);
  if (!(h > 0.0) || h > b.h_c) return 0.0;
  const double m = s.tx.lambertian_order;
  const double sigma = s.rx_tilt.sigma_deg;
  const double xr = h / b.h_c;
  if (sigma == 0.0)
    return detail::cos_pow_density(s.slope_model, m, xr) / b.h_c * b.p_in;
  const double fov_rad = deg_to_rad(s.rx.fov_deg);
  const double upper = std::min({fov_rad, std::acos(std::min(xr, 1.0)),
                                 rx_quantile_rad(1.0 - 1e-13, sigma)});
  if (!(upper > 0.0)) return 0.0;
  const auto q = integrate_adaptive(
      [&](double phi_r) {
        const double y = std::cos(phi_r);
        return detail::cos_pow_density(s.slope_model, m, xr / y) *
               (rx_pdf_rad(phi_r, sigma) / b.p_in) / (b.h_c * y);
      },
      0.0, upper, spec);
  return q.value * b.p_in;
}

/// Ergodic capacity through the gain-domain density:
/// C = P_in int C(gamma(h)) f_h'(h) dh. The outer integral runs in the
/// substituted variable h = h_c u^m, which cancels the u -> 0 singularity of
/// f_h' exactly.
inline CapacityEstimate ergodic_capacity_gain(const LinkScenario& s, const QuadSpec& spec = {}) {
  const LinkBudget b = link_budget(s);
  const double m = s.tx.lambertian_order;
  const double sigma = s.rx_tilt.sigma_deg;
  const double fov_rad = deg_to_rad(s.rx.fov_deg);

  QuadSpec inner_spec = spec;
  inner_spec.rel_tol = std::max(spec.rel_tol * 0.1, 1e-10);
  inner_spec.max_intervals = std::max(spec.max_intervals / 8, 200);

  const double r_hi = (sigma > 0.0) ? rx_quantile_rad(1.0 - 1e-13, sigma) : 0.0;

  // f_h'(h_c u^m) * h_c * m * u^(m-1), the conditioned continuous density in u.
  const auto density_u = [&](double u) -> double {
    const double xr = std::pow(u, m);
    if (sigma == 0.0) {
      const double fx = detail::cos_pow_density(s.slope_model, m, xr);
      return fx * m * std::pow(u, m - 1.0);
    }
    const double upper = std::min({fov_rad, std::acos(std::min(xr, 1.0)), r_hi});
    if (!(upper > 0.0)) return 0.0;
    const auto inner = integrate_adaptive(
        [&](double phi_r) {
          const double y = std::cos(phi_r);
          return detail::cos_pow_density(s.slope_model, m, xr / y) *
                 (rx_pdf_rad(phi_r, sigma) / b.p_in) / y;
        },
        0.0, upper, inner_spec);
    return inner.value * m * std::pow(u, m - 1.0);
  };

  const auto q = integrate_adaptive(
      [&](double u) {
        const double h = b.h_c * std::pow(u, m);
        return instantaneous_capacity(snr(h, b.noise)) * density_u(u);
      },
      0.0, 1.0, spec);
  if (!q.converged)
    throw NumericError("gain-density quadrature did not converge; achieved abs error " +
                       std::to_string(q.abs_error));

  CapacityEstimate out;
  out.method = CapacityMethod::GainDensity;
  out.c_erg_bpshz = b.p_in * q.value;
  out.p_in = b.p_in;
  out.p_out = 1.0 - b.p_in;
  return out;
}

/// Seeded Monte-Carlo estimate. Work is split into fixed-size chunks, each
/// with a stream derived from (seed, chunk index); partial sums are reduced
/// in chunk order, so the result is bit-identical for any worker count.
inline CapacityEstimate monte_carlo_capacity(const LinkScenario& s, std::uint64_t n,
                                             std::uint64_t seed, unsigned workers = 0) {
  if (n < 1000) throw std::invalid_argument("monte carlo: need at least 1e3 samples");
  const LinkBudget b = link_budget(s);
  const double m = s.tx.lambertian_order;
  const double fov_deg = s.rx.fov_deg;

  constexpr std::uint64_t kChunk = 1ull << 16;
  const std::uint64_t n_chunks = (n + kChunk - 1) / kChunk;

  struct Partial {
    double sum = 0.0, sumsq = 0.0;
    std::uint64_t inside = 0;
  };
  std::vector<Partial> partials(n_chunks);

  const auto run_chunk = [&](std::uint64_t c) {
    Rng rng = Rng::derive(seed, c);
    const std::uint64_t lo = c * kChunk;
    const std::uint64_t count = std::min(kChunk, n - lo);
    Partial p;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double phi_t = slope_sample_deg(s.slope_model, rng);
      const double phi_r = rx_sample(rng, s.rx_tilt);
      const double h = channel_gain(b.h_c, phi_t, phi_r, m, fov_deg);
      const double c_inst = instantaneous_capacity(snr(h, b.noise));
      p.sum += c_inst;
      p.sumsq += c_inst * c_inst;
      if (phi_r <= fov_deg) ++p.inside;
    }
    partials[c] = p;
  };

  unsigned hw = workers ? workers : std::thread::hardware_concurrency();
  hw = std::max(1u, std::min<unsigned>(hw, static_cast<unsigned>(n_chunks)));
  if (hw == 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(hw);
    for (unsigned w = 0; w < hw; ++w)
      pool.emplace_back([&] {
        for (std::uint64_t c = next.fetch_add(1); c < n_chunks; c = next.fetch_add(1))
          run_chunk(c);
      });
    for (auto& t : pool) t.join();
  }

  double sum = 0.0, sumsq = 0.0;
  std::uint64_t inside = 0;
  for (const Partial& p : partials) {  // fixed reduction order
    sum += p.sum;
    sumsq += p.sumsq;
    inside += p.inside;
  }

  CapacityEstimate out;
  out.method = CapacityMethod::MonteCarlo;
  const double nd = static_cast<double>(n);
  out.c_erg_bpshz = sum / nd;
  const double var = std::max(0.0, (sumsq - nd * out.c_erg_bpshz * out.c_erg_bpshz) / (nd - 1.0));
  out.std_error = std::sqrt(var / nd);
  out.p_in = static_cast<double>(inside) / nd;
  out.p_out = 1.0 - out.p_in;
  out.seed = seed;
  out.samples = n;
  return out;
}

inline CapacityEstimate evaluate_capacity(const LinkScenario& s, CapacityMethod method,
                                          std::uint64_t mc_samples = 1000000,
                                          std::uint64_t seed = 1, const QuadSpec& spec = {},
                                          unsigned workers = 0) {
  switch (method) {
    case CapacityMethod::AngleQuadrature: return ergodic_capacity_angle(s, spec);
    case CapacityMethod::GainDensity: return ergodic_capacity_gain(s, spec);
    case CapacityMethod::MonteCarlo: return monte_carlo_capacity(s, mc_samples, seed, workers);
  }
  throw std::logic_error("unknown capacity method");
}

// ---------------------------------------------------------------------------
// Parameter sweeps
// ---------------------------------------------------------------------------

enum class SweepAxis { Range, Wind, Fov, SigmaPhiR, SolarRadiance };

inline const char* sweep_axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::Range: return "Z";
    case SweepAxis::Wind: return "U";
    case SweepAxis::Fov: return "FoV";
    case SweepAxis::SigmaPhiR: return "sigma_phi_r";
    case SweepAxis::SolarRadiance: return "L_t";
  }
  return "?";
}

/// Rebuilds a scenario with one axis value applied. Range sweeps keep the
/// water/air split even: Z_w = Z_a = Z/2. Wind sweeps re-derive the slope
/// model from the new wind speed (empirical tables cannot be re-parameterized
/// and raise ConfigError).
inline LinkScenario apply_sweep_value(LinkScenario s, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::Range:
      if (!(value > 0.0)) throw ConfigError("Z sweep: range must be positive");
      s.geometry.z_w_m = value / 2.0;
      s.geometry.z_a_m = value / 2.0;
      break;
    case SweepAxis::Wind:
      s.env.wind_speed_mps = value;
      if (std::holds_alternative<CoxMunkModel>(s.slope_model)) {
        s.slope_model = CoxMunkModel::from_wind_speed(value);
      } else if (const auto* mw = std::get_if<ModifiedWeibullModel>(&s.slope_model)) {
        const MwLaw law = mw->law;
        s.slope_model = ModifiedWeibullModel::from_wind_speed(value, law);
      } else {
        throw ConfigError("U sweep: empirical slope model cannot be re-parameterized");
      }
      break;
    case SweepAxis::Fov:
      s.rx.fov_deg = value;
      break;
    case SweepAxis::SigmaPhiR:
      s.rx_tilt.sigma_deg = value;
      s.env.sigma_phi_r_deg = value;
      break;
    case SweepAxis::SolarRadiance:
      s.env.l_t_w_m2_nm_sr = value;
      break;
  }
  s.check();
  return s;
}

struct SweepPoint {
  double axis_value = 0.0;
  CapacityEstimate estimate;
  bool ok = false;
  std::string error;
};

/// One estimate per axis value; per-point failures are recorded and the sweep
/// continues. Monte-Carlo points draw from seeds mixed per point index so a
/// fixed master seed reproduces the whole table.
inline std::vector<SweepPoint> capacity_sweep(const LinkScenario& base, SweepAxis axis,
                                              std::span<const double> values,
                                              CapacityMethod method,
                                              std::uint64_t mc_samples = 1000000,
                                              std::uint64_t seed = 1, const QuadSpec& spec = {},
                                              unsigned workers = 0) {
  if (values.empty()) throw std::invalid_argument("sweep: need at least one axis value");
  std::vector<SweepPoint> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    SweepPoint p;
    p.axis_value = values[i];
    try {
      const LinkScenario s = apply_sweep_value(base, axis, values[i]);
      p.estimate = evaluate_capacity(s, method, mc_samples, detail::mix_seed(seed, i), spec, workers);
      p.ok = true;
    } catch (const std::exception& e) {
      p.ok = false;
      p.error = e.what();
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace airsea
