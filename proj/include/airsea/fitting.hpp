#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "airsea/empirical_pdf.hpp"
#include "airsea/errors.hpp"
#include "airsea/rng.hpp"

namespace airsea {

// ---------------------------------------------------------------------------
// Candidate families
// ---------------------------------------------------------------------------

enum class Family { Lognormal, Gaussian, Exponential, Gamma, Weibull, BirnbaumSaunders };

inline constexpr Family kAllFamilies[] = {Family::Lognormal, Family::Gaussian,
                                          Family::Exponential, Family::Gamma, Family::Weibull,
                                          Family::BirnbaumSaunders};

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Lognormal: return "lognormal";
    case Family::Gaussian: return "gaussian";
    case Family::Exponential: return "exponential";
    case Family::Gamma: return "gamma";
    case Family::Weibull: return "weibull";
    case Family::BirnbaumSaunders: return "birnbaum-saunders";
  }
  return "?";
}

inline int family_param_count(Family f) {
  return f == Family::Exponential ? 1 : 2;
}

/// Density of family `f` at x >= 0. Parameter conventions:
///   lognormal (mu, sigma): log-scale location and spread, both > 0 here
///   gaussian  (mu, sigma)
///   exponential (lambda): mean
///   gamma (a, b): shape, scale
///   weibull (k, lambda): shape, scale
///   birnbaum-saunders (gamma, beta): shape, scale
inline double family_pdf(Family f, double x, std::span<const double> p) {
  switch (f) {
    case Family::Lognormal: {
      if (x <= 0.0) return 0.0;
      const double z = (std::log(x) - p[0]) / p[1];
      return std::exp(-0.5 * z * z) / (x * p[1] * std::sqrt(2.0 * std::numbers::pi));
    }
    case Family::Gaussian: {
      const double z = (x - p[0]) / p[1];
      return std::exp(-0.5 * z * z) / (p[1] * std::sqrt(2.0 * std::numbers::pi));
    }
    case Family::Exponential: {
      if (x < 0.0) return 0.0;
      return std::exp(-x / p[0]) / p[0];
    }
    case Family::Gamma: {
      if (x <= 0.0) return 0.0;
      const double a = p[0], b = p[1];
      return std::exp((a - 1.0) * std::log(x) - x / b - std::lgamma(a) - a * std::log(b));
    }
    case Family::Weibull: {
      if (x < 0.0) return 0.0;
      if (x == 0.0) return p[0] > 1.0 ? 0.0 : (p[0] == 1.0 ? 1.0 / p[1] : 0.0);
      const double r = x / p[1];
      return p[0] / p[1] * std::pow(r, p[0] - 1.0) * std::exp(-std::pow(r, p[0]));
    }
    case Family::BirnbaumSaunders: {
      if (x <= 0.0) return 0.0;
      const double g = p[0], beta = p[1];
      const double sx = std::sqrt(x / beta), sb = std::sqrt(beta / x);
      const double z = (sx - sb) / g;
      return (sx + sb) / (2.0 * g * x) * std::exp(-0.5 * z * z) /
             std::sqrt(2.0 * std::numbers::pi);
    }
  }
  return 0.0;
}

/// Mean squared pointwise density error over the sample grid (the Table-I
/// style fit metric; densities are treated as absolute, no rescaling).
inline double mse_curve(const EmpiricalPdf& pdf, Family f, std::span<const double> params) {
  double acc = 0.0;
  for (std::size_t i = 0; i < pdf.size(); ++i) {
    double v = family_pdf(f, pdf.angles_deg[i], params);
    if (!std::isfinite(v)) v = 1e30;
    const double d = v - pdf.densities_per_deg[i];
    acc += d * d;
  }
  return acc / static_cast<double>(pdf.size());
}

struct FitResult {
  Family family = Family::Weibull;
  std::vector<double> params;
  double mse = 0.0;
  double seed_mse = 0.0;  // objective at the method-of-moments start
  bool converged = false;
  int restarts_used = 0;
};

/// Raised when no simplex restart met the tolerance; carries the best fit
/// reached so callers can still inspect it.
class FitNonConvergence : public NumericError {
 public:
  FitNonConvergence(std::string what, FitResult best)
      : NumericError(std::move(what)), best_so_far(std::move(best)) {}
  FitResult best_so_far;
};

struct FitOptions {
  int max_iterations = 500;  // per restart
  int restarts = 5;          // jittered moment seeds (plus one coarse-grid start)
  double objective_tol = 1e-12;
};

namespace detail {

inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Method-of-moments start from the trapezoid moments of the sampled curve.
inline std::vector<double> moment_seed(Family f, const EmpiricalPdf& pdf) {
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 1; i < pdf.size(); ++i) {
    const double dx = pdf.angles_deg[i] - pdf.angles_deg[i - 1];
    const double x0 = pdf.angles_deg[i - 1], x1 = pdf.angles_deg[i];
    const double f0 = pdf.densities_per_deg[i - 1], f1 = pdf.densities_per_deg[i];
    m1 += 0.5 * (x0 * f0 + x1 * f1) * dx;
    m2 += 0.5 * (x0 * x0 * f0 + x1 * x1 * f1) * dx;
  }
  const double area = pdf.trapezoid_area();
  m1 /= area;
  m2 /= area;
  const double var = std::max(m2 - m1 * m1, 1e-6 * m1 * m1 + 1e-12);
  switch (f) {
    case Family::Lognormal: {
      const double s2 = std::log1p(var / (m1 * m1));
      return {std::max(std::log(m1) - 0.5 * s2, 1e-6), std::sqrt(s2)};
    }
    case Family::Gaussian:
      return {m1, std::sqrt(var)};
    case Family::Exponential:
      return {m1};
    case Family::Gamma:
      return {m1 * m1 / var, var / m1};
    case Family::Weibull: {
      const double cv2 = var / (m1 * m1);
      const double k = bisect(
          [&](double kk) {
            return std::tgamma(1.0 + 2.0 / kk) / std::pow(std::tgamma(1.0 + 1.0 / kk), 2) - 1.0 -
                   cv2;
          },
          0.08, 150.0);
      return {k, m1 / std::tgamma(1.0 + 1.0 / k)};
    }
    case Family::BirnbaumSaunders: {
      // mean = beta(1 + g^2/2), var = (beta g)^2 (1 + 5 g^2/4)
      const double r = var / (m1 * m1);
      const double g = bisect(
          [&](double gg) {
            const double g2 = gg * gg;
            return g2 * (1.0 + 1.25 * g2) / std::pow(1.0 + 0.5 * g2, 2) - r;
          },
          1e-4, 20.0);
      return {g, m1 / (1.0 + 0.5 * g * g)};
    }
  }
  return {m1};
}

/// Nelder-Mead on the transformed parameter vector. All parameters are
/// optimized in log space except the Gaussian mean, which is raw; this bakes
/// the positivity domain into the search.
inline std::vector<bool> log_mask(Family f) {
  if (f == Family::Gaussian) return {false, true};
  return std::vector<bool>(static_cast<std::size_t>(family_param_count(f)), true);
}

inline std::vector<double> to_internal(std::span<const double> p, const std::vector<bool>& mask) {
  std::vector<double> out(p.begin(), p.end());
  for (std::size_t i = 0; i < out.size(); ++i)
    if (mask[i]) out[i] = std::log(std::max(out[i], 1e-300));
  return out;
}

inline std::vector<double> from_internal(std::span<const double> p, const std::vector<bool>& mask) {
  std::vector<double> out(p.begin(), p.end());
  for (std::size_t i = 0; i < out.size(); ++i)
    if (mask[i]) out[i] = std::exp(std::min(out[i], 700.0));
  return out;
}

struct SimplexOutcome {
  std::vector<double> x;
  double value = 0.0;
  bool converged = false;
};

inline SimplexOutcome nelder_mead(const std::function<double(std::span<const double>)>& f,
                                  std::vector<double> x0, int max_iter, double ftol) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> xs(n + 1, x0);
  std::vector<double> fs(n + 1);
  for (std::size_t i = 0; i < n; ++i) xs[i + 1][i] += 0.1;
  for (std::size_t i = 0; i <= n; ++i) fs[i] = f(xs[i]);

  const auto order = [&] {
    std::vector<std::size_t> idx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
    std::vector<std::vector<double>> xs2(n + 1);
    std::vector<double> fs2(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      xs2[i] = xs[idx[i]];
      fs2[i] = fs[idx[i]];
    }
    xs.swap(xs2);
    fs.swap(fs2);
  };

  SimplexOutcome out;
  for (int it = 0; it < max_iter; ++it) {
    order();
    if (fs[n] - fs[0] <= ftol) {
      out.converged = true;
      break;
    }
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) centroid[j] += xs[i][j] / static_cast<double>(n);

    const auto blend = [&](double coef) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = centroid[j] + coef * (xs[n][j] - centroid[j]);
      return x;
    };

    const std::vector<double> xr = blend(-1.0);
    const double fr = f(xr);
    if (fr < fs[0]) {
      const std::vector<double> xe = blend(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        xs[n] = xe;
        fs[n] = fe;
      } else {
        xs[n] = xr;
        fs[n] = fr;
      }
    } else if (fr < fs[n - 1]) {
      xs[n] = xr;
      fs[n] = fr;
    } else {
      const std::vector<double> xc = blend(fr < fs[n] ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, fs[n])) {
        xs[n] = xc;
        fs[n] = fc;
      } else {
        for (std::size_t i = 1; i <= n; ++i) {  // shrink toward the best vertex
          for (std::size_t j = 0; j < n; ++j) xs[i][j] = xs[0][j] + 0.5 * (xs[i][j] - xs[0][j]);
          fs[i] = f(xs[i]);
        }
      }
    }
  }
  order();
  out.x = xs[0];
  out.value = fs[0];
  return out;
}

}  // namespace detail

/// Fits one family to the sampled curve by minimizing the pointwise density
/// MSE: derivative-free simplex started at the method-of-moments estimate,
/// with jittered restarts and a coarse log-grid restart. Throws
/// FitNonConvergence (carrying the best parameters reached) if no restart
/// meets the tolerance.
inline FitResult fit_family(const EmpiricalPdf& pdf, Family family, const FitOptions& opt = {}) {
  pdf.validate();
  const std::vector<bool> mask = detail::log_mask(family);
  const std::vector<double> seed = detail::moment_seed(family, pdf);

  const auto objective = [&](std::span<const double> internal) {
    const std::vector<double> p = detail::from_internal(internal, mask);
    for (double v : p)
      if (!std::isfinite(v)) return 1e30;
    const double v = mse_curve(pdf, family, p);
    return std::isfinite(v) ? v : 1e30;
  };

  const std::vector<double> seed_internal = detail::to_internal(seed, mask);
  const double seed_mse = objective(seed_internal);

  FitResult best;
  best.family = family;
  best.params = seed;
  best.mse = seed_mse;
  best.seed_mse = seed_mse;
  best.converged = false;

  bool any_converged = false;
  int runs = 0;

  const auto run_from = [&](std::vector<double> start) {
    const auto r = detail::nelder_mead(objective, std::move(start), opt.max_iterations,
                                       opt.objective_tol);
    ++runs;
    if (r.value < best.mse) {
      best.mse = r.value;
      best.params = detail::from_internal(r.x, mask);
    }
    any_converged = any_converged || r.converged;
  };

  // deterministic jitter stream, keyed by the family index
  Rng jitter = Rng::derive(0xF17F17ull, static_cast<std::uint64_t>(family));
  for (int r = 0; r < opt.restarts; ++r) {
    std::vector<double> start = seed_internal;
    if (r > 0)
      for (double& x : start) x += 0.25 * jitter.normal();
    run_from(std::move(start));
  }

  // coarse log-grid restart around the seed
  {
    std::vector<double> grid_best = seed_internal;
    double grid_best_f = seed_mse;
    const double offsets[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
    if (seed_internal.size() == 1) {
      for (double o : offsets) {
        std::vector<double> x = {seed_internal[0] + o};
        const double v = objective(x);
        if (v < grid_best_f) {
          grid_best_f = v;
          grid_best = x;
        }
      }
    } else {
      for (double o0 : offsets)
        for (double o1 : offsets) {
          std::vector<double> x = {seed_internal[0] + o0, seed_internal[1] + o1};
          const double v = objective(x);
          if (v < grid_best_f) {
            grid_best_f = v;
            grid_best = x;
          }
        }
    }
    run_from(std::move(grid_best));
  }

  best.restarts_used = runs;
  best.mse = std::min(best.mse, seed_mse);  // never worse than the seed
  best.converged = any_converged;
  if (!any_converged)
    throw FitNonConvergence(std::string("fit_family(") + family_name(family) +
                                "): no restart met the objective tolerance; best mse " +
                                std::to_string(best.mse),
                            best);
  return best;
}

struct RankedFits {
  std::vector<FitResult> ranked;          // ascending mse, ties by enum order
  std::vector<std::string> notices;       // families excluded for non-convergence
};

inline RankedFits rank_families(const EmpiricalPdf& pdf, std::span<const Family> families,
                                const FitOptions& opt = {}) {
  if (families.empty()) throw std::invalid_argument("rank_families: need at least one family");
  RankedFits out;
  for (Family f : families) {
    try {
      out.ranked.push_back(fit_family(pdf, f, opt));
    } catch (const FitNonConvergence& e) {
      out.notices.push_back(std::string(family_name(f)) + " excluded: " + e.what());
    }
  }
  std::stable_sort(out.ranked.begin(), out.ranked.end(), [](const FitResult& a, const FitResult& b) {
    if (a.mse != b.mse) return a.mse < b.mse;
    return static_cast<int>(a.family) < static_cast<int>(b.family);
  });
  return out;
}

// ---------------------------------------------------------------------------
// Wind-speed regression
// ---------------------------------------------------------------------------

struct RegressionModel {
  enum class Kind { Linear, Power } kind = Kind::Linear;
  double a = 0.0;  // intercept (linear) / prefactor (power)
  double b = 0.0;  // slope (linear) / exponent (power)

  double predict(double u) const {
    return kind == Kind::Linear ? a + b * u : a * std::pow(u, b);
  }
};

/// Ordinary least squares, exact closed form.
inline RegressionModel regress_linear(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw std::invalid_argument("regress_linear: need at least two points");
  double sx = 0.0, sy = 0.0;
  for (const auto& [x, y] : points) {
    sx += x;
    sy += y;
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("regress_linear: all abscissae equal (singular)");
  RegressionModel m;
  m.kind = RegressionModel::Kind::Linear;
  m.b = sxy / sxx;
  m.a = my - m.b * mx;
  return m;
}

/// Power-law fit y = a x^b by least squares in linear space: the prefactor is
/// profiled out in closed form, a(b) = sum(y x^b)/sum(x^2b), and the exponent
/// is found by golden-section on the profiled residual, seeded from the
/// log-log OLS solution. (Log-log OLS alone reproduces the reference
/// exponents only to ~1.5%, outside the acceptance tolerance.)
inline RegressionModel regress_power(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw std::invalid_argument("regress_power: need at least two points");
  for (const auto& [x, y] : points)
    if (!(x > 0.0) || !(y > 0.0))
      throw std::invalid_argument("regress_power: inputs must be strictly positive");

  std::vector<std::pair<double, double>> logs;
  logs.reserve(points.size());
  for (const auto& [x, y] : points) logs.emplace_back(std::log(x), std::log(y));
  const RegressionModel ols = regress_linear(logs);

  const auto profile_a = [&](double b) {
    double num = 0.0, den = 0.0;
    for (const auto& [x, y] : points) {
      const double xb = std::pow(x, b);
      num += y * xb;
      den += xb * xb;
    }
    return num / den;
  };
  const auto residual = [&](double b) {
    const double a = profile_a(b);
    double s = 0.0;
    for (const auto& [x, y] : points) {
      const double d = y - a * std::pow(x, b);
      s += d * d;
    }
    return s;
  };

  double lo = ols.b - 1.0, hi = ols.b + 1.0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = residual(c), fd = residual(d);
  for (int i = 0; i < 200 && hi - lo > 1e-13; ++i) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = residual(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = residual(d);
    }
  }
  RegressionModel m;
  m.kind = RegressionModel::Kind::Power;
  m.b = 0.5 * (lo + hi);
  // exact-fit data (zero residual) keeps the log-log solution bit-clean
  if (residual(ols.b) <= residual(m.b)) m.b = ols.b;
  m.a = profile_a(m.b);
  return m;
}

/// Mean absolute error between paired lists.
inline double mae(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.size() != predicted.size())
    throw std::invalid_argument("mae: length mismatch");
  if (actual.empty()) throw std::invalid_argument("mae: empty input");
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) s += std::fabs(actual[i] - predicted[i]);
  return s / static_cast<double>(actual.size());
}

}  // namespace airsea
