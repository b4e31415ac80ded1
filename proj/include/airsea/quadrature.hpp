#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace airsea {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
  bool converged = false;
};

struct QuadSpec {
  double rel_tol = 1e-6;
  double abs_floor = 1e-12;
  int max_intervals = 4000;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
inline constexpr double kGk15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kGk15KronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kGk15GaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
inline void gk15_panel(F&& f, double a, double b, double& value, double& error) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = kGk15KronrodW[7] * fc;
  double resg = kGk15GaussW[3] * fc;
  double resabs = std::fabs(resk);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    fv1[j] = f(center - half * kGk15Nodes[j]);
    fv2[j] = f(center + half * kGk15Nodes[j]);
    const double sum = fv1[j] + fv2[j];
    resk += kGk15KronrodW[j] * sum;
    resabs += kGk15KronrodW[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
    if (j % 2 == 1) resg += kGk15GaussW[j / 2] * sum;
  }
  const double reskh = resk * 0.5;
  double resasc = kGk15KronrodW[7] * std::fabs(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kGk15KronrodW[j] * (std::fabs(fv1[j] - reskh) + std::fabs(fv2[j] - reskh));
  value = resk * half;
  resabs *= std::fabs(half);
  resasc *= std::fabs(half);
  error = std::fabs((resk - resg) * half);
  if (resasc != 0.0 && error != 0.0)
    error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
  const double eps50 = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / eps50)
    error = std::max(error, eps50 * resabs);
}

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration on [a, b]: the interval with
/// the largest error estimate is bisected until the total estimated error
/// meets max(abs_floor, rel_tol * |integral|) or the interval budget runs out.
template <class F>
QuadResult integrate_adaptive(F&& f, double a, double b, const QuadSpec& spec = {}) {
  QuadResult out;
  if (!(b > a)) {
    out.converged = true;
    return out;
  }
  std::priority_queue<detail::Segment> heap;
  detail::Segment s{a, b, 0.0, 0.0};
  detail::gk15_panel(f, a, b, s.value, s.error);
  double total = s.value, toterr = s.error;
  heap.push(s);
  int used = 1;
  while (toterr > std::max(spec.abs_floor, spec.rel_tol * std::fabs(total)) &&
         used < spec.max_intervals) {
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    detail::Segment left{worst.a, mid, 0.0, 0.0}, right{mid, worst.b, 0.0, 0.0};
    detail::gk15_panel(f, left.a, left.b, left.value, left.error);
    detail::gk15_panel(f, right.a, right.b, right.value, right.error);
    total += left.value + right.value - worst.value;
    toterr += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++used;
    if (mid <= worst.a || mid >= worst.b) break;  // interval at machine resolution
  }
  out.value = total;
  out.abs_error = toterr;
  out.intervals = used;
  out.converged = toterr <= std::max(spec.abs_floor, spec.rel_tol * std::fabs(total));
  return out;
}

/// Fixed-density composite rule on a logarithmic grid: GK15 per log-uniform
/// panel. Suited to smooth spectra spanning many decades; the Kronrod/Gauss
/// discrepancy summed over panels serves as the error estimate.
template <class F>
QuadResult integrate_log_panels(F&& f, double a, double b, int panels) {
  QuadResult out;
  const double la = std::log(a), lb = std::log(b);
  const auto g = [&](double t) {
    const double k = std::exp(t);
    return f(k) * k;  // dk = k dt
  };
  double total = 0.0, toterr = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double t0 = la + (lb - la) * i / panels;
    const double t1 = la + (lb - la) * (i + 1) / panels;
    double v = 0.0, e = 0.0;
    detail::gk15_panel(g, t0, t1, v, e);
    total += v;
    toterr += e;
  }
  out.value = total;
  out.abs_error = toterr;
  out.intervals = panels;
  out.converged = true;
  return out;
}

}  // namespace airsea
