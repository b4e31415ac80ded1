// Command-line front end: scenario evaluation, parameter sweeps, surface
// statistics, fitting/regression utilities and link-budget audits, all
// emitting provenance-stamped CSV. Exit codes: 0 success, 2 config error,
// 3 numeric failure.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "airsea/capacity.hpp"
#include "airsea/eckv.hpp"
#include "airsea/fitting.hpp"
#include "airsea/result_table.hpp"
#include "airsea/scenario_io.hpp"
#include "airsea/version.hpp"

namespace {

using namespace airsea;

struct GlobalOpts {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 1;
  std::uint64_t samples = 1000000;
  unsigned workers = 0;  // 0 = hardware default
};

std::vector<double> parse_list(const std::string& csv, const char* what) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError(std::string(what) + ": cannot parse '" + tok + "' as a number");
    }
  }
  if (out.empty()) throw ConfigError(std::string(what) + ": empty value list");
  return out;
}

LinkScenario scenario_for(const GlobalOpts& g) {
  return g.config_path.empty() ? default_scenario() : load_scenario(g.config_path);
}

void stamp(ResultTable& t, const GlobalOpts& g, const std::string& command,
           const LinkScenario* s = nullptr) {
  t.set_provenance("command", command);
  t.set_provenance("config", g.config_path.empty() ? "<builtin-defaults>" : g.config_path);
  if (s) t.set_provenance("scenario_hash", scenario_hash_hex(*s));
  t.set_provenance("seed", std::to_string(g.seed));
  t.set_provenance("samples", std::to_string(g.samples));
  if (s) {
    if (auto w = slope_validity_warning(s->slope_model)) t.set_provenance("warning", *w);
  }
}

void emit(const ResultTable& t, const GlobalOpts& g) {
  if (g.out_path.empty()) {
    t.write_csv(std::cout);
  } else {
    t.write_csv_file(g.out_path);
  }
}

CapacityMethod parse_method(const std::string& m) {
  if (m == "quad" || m == "angle" || m == "angle_quadrature") return CapacityMethod::AngleQuadrature;
  if (m == "gain" || m == "gain_density") return CapacityMethod::GainDensity;
  if (m == "mc" || m == "monte_carlo") return CapacityMethod::MonteCarlo;
  throw ConfigError("unknown method '" + m + "' (expected quad, gain or mc)");
}

SweepAxis parse_axis(const std::string& a) {
  if (a == "Z" || a == "z") return SweepAxis::Range;
  if (a == "U" || a == "u" || a == "wind") return SweepAxis::Wind;
  if (a == "FoV" || a == "fov") return SweepAxis::Fov;
  if (a == "sigma_phi_r" || a == "sigma") return SweepAxis::SigmaPhiR;
  if (a == "L_t" || a == "lt" || a == "solar") return SweepAxis::SolarRadiance;
  throw ConfigError("unknown sweep axis '" + a + "' (expected Z, U, FoV, sigma_phi_r or L_t)");
}

// ---------------------------------------------------------------------------

int cmd_slope_pdf(const GlobalOpts& g, const std::string& models_csv, const std::string& winds_csv,
                  double grid_min, double grid_max, double grid_step, bool cm_verbatim,
                  const std::string& command) {
  std::vector<std::string> models;
  {
    std::stringstream ss(models_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) models.push_back(tok);
  }
  const std::vector<double> winds = parse_list(winds_csv, "--wind");
  if (!(grid_step > 0.0) || !(grid_max >= grid_min))
    throw ConfigError("slope-pdf: bad grid specification");

  ResultTable t({"model", "wind_mps", "angle_deg", "density_per_deg"});
  stamp(t, g, command);
  for (const std::string& model : models) {
    for (double u : winds) {
      SlopeModel sm;
      if (model == "cm") {
        sm = CoxMunkModel::from_wind_speed(u);
      } else if (model == "mw") {
        sm = ModifiedWeibullModel::from_wind_speed(u);
      } else {
        throw ConfigError("slope-pdf: model must be 'cm' or 'mw', got '" + model + "'");
      }
      if (auto w = slope_validity_warning(sm)) t.set_provenance("warning", *w);
      for (double a = grid_min; a <= grid_max + 1e-12; a += grid_step) {
        double density;
        if (model == "cm" && cm_verbatim) {
          const auto& cm = std::get<CoxMunkModel>(sm);
          density = a < 90.0 ? cm_pdf(deg_to_rad(a), cm, false) * std::numbers::pi / 180.0 : 0.0;
        } else {
          density = slope_pdf_rad(sm, deg_to_rad(a)) * std::numbers::pi / 180.0;
        }
        t.add_row({model, format_cell(u), format_cell(a), format_cell(density)});
      }
    }
  }
  emit(t, g);
  return 0;
}

int cmd_fit(const GlobalOpts& g, const std::string& input, const std::string& families_csv,
            const std::string& command) {
  const EmpiricalPdf pdf = EmpiricalPdf::from_csv_file(input);
  std::vector<Family> families;
  if (families_csv == "all") {
    families.assign(std::begin(kAllFamilies), std::end(kAllFamilies));
  } else {
    std::stringstream ss(families_csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      bool found = false;
      for (Family f : kAllFamilies)
        if (tok == family_name(f)) {
          families.push_back(f);
          found = true;
        }
      if (!found) throw ConfigError("fit: unknown family '" + tok + "'");
    }
    if (families.empty()) throw ConfigError("fit: empty family list");
  }
  const RankedFits fits = rank_families(pdf, families);
  ResultTable t({"rank", "family", "param1", "param2", "mse"});
  stamp(t, g, command);
  t.set_provenance("input", input);
  t.set_provenance("grid_resolution_deg", format_cell(pdf.grid_resolution_deg));
  for (const std::string& n : fits.notices) t.set_provenance("notice", n);
  int rank = 1;
  for (const FitResult& f : fits.ranked) {
    t.add_row({std::to_string(rank++), family_name(f.family), format_cell(f.params[0]),
               f.params.size() > 1 ? format_cell(f.params[1]) : "",
               format_cell(f.mse)});
  }
  emit(t, g);
  return 0;
}

int cmd_regress(const GlobalOpts& g, const std::string& input, const std::string& law,
                const std::string& command) {
  // (U, value) series; with no input the built-in reference series are used
  // (shape and scale from the calibration wind speeds).
  struct Series {
    std::string name;
    std::vector<std::pair<double, double>> pts;
  };
  std::vector<Series> series;
  if (input.empty()) {
    series.push_back({"k", {{6.1, 1.7671}, {8.7, 1.8373}, {15.2, 1.8446}}});
    series.push_back({"lambda", {{6.1, 15.2100}, {8.7, 15.6100}, {15.2, 17.3429}}});
  } else {
    std::ifstream in(input);
    if (!in) throw ConfigError("cannot open regression input: " + input);
    Series s{"value", {}};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line.front() == '#' || line.find("u_mps") == 0) continue;
      std::stringstream row(line);
      std::string a, b;
      if (!std::getline(row, a, ',') || !std::getline(row, b, ','))
        throw ConfigError("regress: expected 'u_mps,value' at line " + std::to_string(line_no));
      try {
        s.pts.emplace_back(std::stod(a), std::stod(b));
      } catch (const std::exception&) {
        throw ConfigError("regress: unparseable number at line " + std::to_string(line_no));
      }
    }
    series.push_back(std::move(s));
  }

  ResultTable t({"series", "law", "a", "b", "mae"});
  stamp(t, g, command);
  for (const Series& s : series) {
    for (const std::string& kind : {std::string("linear"), std::string("power")}) {
      if (law != "both" && law != kind) continue;
      const RegressionModel m = kind == "linear" ? regress_linear(s.pts) : regress_power(s.pts);
      std::vector<double> actual, predicted;
      for (const auto& [u, v] : s.pts) {
        actual.push_back(v);
        predicted.push_back(m.predict(u));
      }
      t.add_row({s.name, kind, format_cell(m.a), format_cell(m.b),
                 format_cell(mae(actual, predicted))});
    }
  }
  emit(t, g);
  return 0;
}

int cmd_link_budget(const GlobalOpts& g, const std::string& command) {
  const LinkScenario s = scenario_for(g);
  const LinkBudget b = link_budget(s);
  ResultTable t({"quantity", "value", "unit"});
  stamp(t, g, command, &s);
  t.add_row({"z_total", format_cell(s.geometry.total_m()), "m"});
  t.add_row({"fov", format_cell(s.rx.fov_deg), "deg"});
  t.add_row({"fov_solid_angle_half", format_cell(s.rx.fov_deg / 2.0), "deg"});
  t.add_row({"k_eff", format_cell(b.k_eff_per_m), "1/m"});
  t.add_row({"concentrator_gain", format_cell(b.concentrator_gain), "1"});
  t.add_row({"h_c", format_cell(b.h_c), "1"});
  t.add_row({"solid_angle", format_cell(b.solid_angle_sr), "sr"});
  t.add_row({"i_b", format_cell(b.i_b_a), "A"});
  t.add_row({"mu", format_cell(b.noise.mu), "A"});
  t.add_row({"alpha", format_cell(b.noise.alpha), "1"});
  t.add_row({"beta", format_cell(b.noise.beta), "1"});
  t.add_row({"p_in", format_cell(b.p_in), "1"});
  emit(t, g);
  return 0;
}

int cmd_capacity(const GlobalOpts& g, const std::string& method_str, const std::string& command) {
  const LinkScenario s = scenario_for(g);
  const CapacityMethod method = parse_method(method_str);
  const CapacityEstimate e = evaluate_capacity(s, method, g.samples, g.seed, {}, g.workers);
  ResultTable t({"c_erg_bpshz", "p_in", "p_out", "std_err", "method", "seed", "samples"});
  stamp(t, g, command, &s);
  t.add_row({format_cell(e.c_erg_bpshz), format_cell(e.p_in), format_cell(e.p_out),
             format_cell(e.std_error), capacity_method_name(e.method),
             std::to_string(e.seed), std::to_string(e.samples)});
  emit(t, g);
  return 0;
}

int cmd_sweep(const GlobalOpts& g, const std::string& axis_str, const std::string& values_csv,
              const std::string& method_str, const std::string& command) {
  const LinkScenario s = scenario_for(g);
  const SweepAxis axis = parse_axis(axis_str);
  const std::vector<double> values = parse_list(values_csv, "--values");
  const CapacityMethod method = parse_method(method_str);
  const auto points = capacity_sweep(s, axis, values, method, g.samples, g.seed, {}, g.workers);
  ResultTable t({"axis_value", "c_erg_bpshz", "p_in", "std_err", "method", "seed", "error"});
  stamp(t, g, command, &s);
  t.set_provenance("axis", sweep_axis_name(axis));
  for (const SweepPoint& p : points) {
    if (p.ok) {
      t.add_row({format_cell(p.axis_value), format_cell(p.estimate.c_erg_bpshz),
                 format_cell(p.estimate.p_in), format_cell(p.estimate.std_error),
                 capacity_method_name(p.estimate.method), std::to_string(p.estimate.seed), ""});
    } else {
      t.add_row({format_cell(p.axis_value), "", "", "", capacity_method_name(method), "",
                 p.error});
    }
  }
  emit(t, g);
  return 0;
}

int cmd_eckv_mss(const GlobalOpts& g, const std::string& winds_csv, double omega_c,
                 const std::string& command) {
  const std::vector<double> winds = parse_list(winds_csv, "--wind");
  ResultTable t({"U10", "mss", "cox_munk_sigma2", "ratio"});
  stamp(t, g, command);
  t.set_provenance("inverse_wave_age", format_cell(omega_c));
  for (double u : winds) {
    EckvParams p;
    p.u10_mps = u;
    p.inverse_wave_age = omega_c;
    const double mss = eckv_mean_square_slope(p);
    const double cm2 = 0.003 + 0.00512 * u;
    t.add_row({format_cell(u), format_cell(mss), format_cell(cm2), format_cell(mss / cm2)});
  }
  emit(t, g);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("airsea ") + airsea::kVersion +
               " - water-to-air optical link surface statistics and capacity simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  GlobalOpts g;
  app.add_option("--config", g.config_path, "scenario JSON file (defaults to the baseline)");
  app.add_option("--out", g.out_path, "output CSV path (default: stdout)");
  app.add_option("--seed", g.seed, "master seed for Monte-Carlo draws");
  app.add_option("--samples", g.samples, "Monte-Carlo sample count");
  app.add_option("--workers", g.workers, "worker threads (0 = hardware)");

  std::string models = "cm,mw", winds = "6,10,14";
  double grid_min = 0.0, grid_max = 90.0, grid_step = 0.1;
  bool cm_verbatim = false;
  auto* sp = app.add_subcommand("slope-pdf", "tabulate transmitter tilt-angle PDFs");
  sp->add_option("--model", models, "comma list of cm,mw");
  sp->add_option("--wind", winds, "comma list of wind speeds (m/s)");
  sp->add_option("--grid-min", grid_min, "first angle (deg)");
  sp->add_option("--grid-max", grid_max, "last angle (deg)");
  sp->add_option("--grid-step", grid_step, "angle step (deg)");
  sp->add_flag("--cm-verbatim", cm_verbatim, "emit the unnormalized Cox-Munk form");

  std::string fit_input, fit_families = "all";
  auto* fit = app.add_subcommand("fit", "fit candidate families to an empirical tilt PDF");
  fit->add_option("--input", fit_input, "empirical pdf CSV (angle_deg,density_per_deg)")
      ->required();
  fit->add_option("--families", fit_families, "comma list or 'all'");

  std::string reg_input, reg_law = "both";
  auto* reg = app.add_subcommand("regress", "wind-speed regression of fitted parameters");
  reg->add_option("--input", reg_input, "CSV of u_mps,value (default: built-in reference series)");
  reg->add_option("--law", reg_law, "linear, power or both");

  auto* lb = app.add_subcommand("link-budget", "audit derived link-budget quantities");

  std::string cap_method = "quad";
  auto* cap = app.add_subcommand("capacity", "ergodic capacity of the configured scenario");
  cap->add_option("--method", cap_method, "quad, gain or mc");

  auto* mc = app.add_subcommand("mc", "Monte-Carlo ergodic capacity (alias for --method mc)");

  std::string axis = "Z", sweep_values = "20,30,40,50,60,70,80,90,100", sweep_method = "quad";
  auto* sw = app.add_subcommand("sweep", "capacity across one swept parameter");
  sw->add_option("--axis", axis, "Z, U, FoV, sigma_phi_r or L_t");
  sw->add_option("--values", sweep_values, "comma list of axis values");
  sw->add_option("--method", sweep_method, "quad, gain or mc");

  std::string eckv_winds = "5,8,12";
  double omega_c = 0.84;
  auto* em = app.add_subcommand("eckv-mss", "mean square slope from the wave spectrum");
  em->add_option("--wind", eckv_winds, "comma list of U10 (m/s)");
  em->add_option("--inverse-wave-age", omega_c, "spectral inverse wave age (0.84 = developed)");

  std::string command;
  for (int i = 0; i < argc; ++i) {
    if (i) command += ' ';
    command += argv[i];
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sp->parsed())
      return cmd_slope_pdf(g, models, winds, grid_min, grid_max, grid_step, cm_verbatim, command);
    if (fit->parsed()) return cmd_fit(g, fit_input, fit_families, command);
    if (reg->parsed()) return cmd_regress(g, reg_input, reg_law, command);
    if (lb->parsed()) return cmd_link_budget(g, command);
    if (cap->parsed()) return cmd_capacity(g, cap_method, command);
    if (mc->parsed()) return cmd_capacity(g, "mc", command);
    if (sw->parsed()) return cmd_sweep(g, axis, sweep_values, sweep_method, command);
    if (em->parsed()) return cmd_eckv_mss(g, eckv_winds, omega_c, command);
  } catch (const airsea::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const airsea::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
