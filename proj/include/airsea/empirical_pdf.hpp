#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "airsea/errors.hpp"

namespace airsea {

/// Sampled (angle, density) curve: angles in degrees, strictly ascending,
/// densities per degree. Loaded from CSV with header `angle_deg,density_per_deg`.
struct EmpiricalPdf {
  std::vector<double> angles_deg;
  std::vector<double> densities_per_deg;
  double grid_resolution_deg = 0.0;  // median spacing, recorded for provenance

  std::size_t size() const { return angles_deg.size(); }

  double trapezoid_area() const {
    double area = 0.0;
    for (std::size_t i = 1; i < angles_deg.size(); ++i)
      area += 0.5 * (densities_per_deg[i] + densities_per_deg[i - 1]) *
              (angles_deg[i] - angles_deg[i - 1]);
    return area;
  }

  /// Linear interpolation inside the tabulated range, zero outside.
  double density_at(double angle_deg) const {
    if (angles_deg.empty() || angle_deg < angles_deg.front() || angle_deg > angles_deg.back())
      return 0.0;
    const auto it = std::upper_bound(angles_deg.begin(), angles_deg.end(), angle_deg);
    if (it == angles_deg.begin()) return densities_per_deg.front();
    if (it == angles_deg.end()) return densities_per_deg.back();
    const std::size_t hi = static_cast<std::size_t>(it - angles_deg.begin());
    const std::size_t lo = hi - 1;
    const double w = (angle_deg - angles_deg[lo]) / (angles_deg[hi] - angles_deg[lo]);
    return densities_per_deg[lo] * (1.0 - w) + densities_per_deg[hi] * w;
  }

  /// Length/positivity/area gates. `area_lo`/`area_hi` differ by consumer:
  /// the fitting pipeline accepts [0.9, 1.1].
  void validate(double area_lo = 0.9, double area_hi = 1.1) const {
    if (angles_deg.size() != densities_per_deg.size())
      throw ConfigError("empirical pdf: angle/density column length mismatch");
    if (angles_deg.size() < 8)
      throw ConfigError("empirical pdf: need at least 8 grid points, got " +
                        std::to_string(angles_deg.size()));
    for (std::size_t i = 1; i < angles_deg.size(); ++i)
      if (!(angles_deg[i] > angles_deg[i - 1]))
        throw ConfigError("empirical pdf: angles not strictly increasing at row " +
                          std::to_string(i + 2));
    for (std::size_t i = 0; i < densities_per_deg.size(); ++i)
      if (!(densities_per_deg[i] >= 0.0) || !std::isfinite(densities_per_deg[i]))
        throw ConfigError("empirical pdf: negative or non-finite density at row " +
                          std::to_string(i + 2));
    const double area = trapezoid_area();
    if (area < area_lo || area > area_hi)
      throw ConfigError("empirical pdf: trapezoidal area " + std::to_string(area) +
                        " outside [" + std::to_string(area_lo) + ", " +
                        std::to_string(area_hi) + "]");
  }

  static EmpiricalPdf from_csv(std::istream& in) {
    EmpiricalPdf pdf;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      if (line_no == 1 || pdf.angles_deg.empty()) {
        // header row must name both columns
        if (line.find("angle_deg") != std::string::npos) {
          if (line.find("density_per_deg") == std::string::npos)
            throw ConfigError("empirical pdf csv: bad header at line " +
                              std::to_string(line_no) + ": '" + line + "'");
          continue;
        }
        if (pdf.angles_deg.empty() && line_no == 1)
          throw ConfigError("empirical pdf csv: missing 'angle_deg,density_per_deg' header");
      }
      std::istringstream row(line);
      std::string a, d, extra;
      if (!std::getline(row, a, ',') || !std::getline(row, d, ','))
        throw ConfigError("empirical pdf csv: expected two columns at line " +
                          std::to_string(line_no));
      if (std::getline(row, extra, ',') && !extra.empty())
        throw ConfigError("empirical pdf csv: too many columns at line " +
                          std::to_string(line_no));
      try {
        std::size_t pos = 0;
        const double av = std::stod(a, &pos);
        if (pos != a.size()) throw std::invalid_argument(a);
        const double dv = std::stod(d, &pos);
        if (pos != d.size()) throw std::invalid_argument(d);
        pdf.angles_deg.push_back(av);
        pdf.densities_per_deg.push_back(dv);
      } catch (const std::exception&) {
        throw ConfigError("empirical pdf csv: unparseable number at line " +
                          std::to_string(line_no) + ": '" + line + "'");
      }
    }
    pdf.validate();
    std::vector<double> gaps;
    for (std::size_t i = 1; i < pdf.angles_deg.size(); ++i)
      gaps.push_back(pdf.angles_deg[i] - pdf.angles_deg[i - 1]);
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    pdf.grid_resolution_deg = gaps[gaps.size() / 2];
    return pdf;
  }

  static EmpiricalPdf from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open empirical pdf csv: " + path);
    try {
      return from_csv(in);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
};

}  // namespace airsea
