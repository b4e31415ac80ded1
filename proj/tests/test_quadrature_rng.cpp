#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "airsea/math_util.hpp"
#include "airsea/quadrature.hpp"
#include "airsea/rng.hpp"

using namespace airsea;

TEST(Quadrature, SmoothIntegrals) {
  const auto s = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  EXPECT_TRUE(s.converged);
  EXPECT_NEAR(s.value, 2.0, 1e-12);

  const auto g = integrate_adaptive(
      [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }, -12.0,
      12.0);
  EXPECT_TRUE(g.converged);
  EXPECT_NEAR(g.value, 1.0, 1e-10);
}

TEST(Quadrature, EndpointSingularity) {
  // integrable x^-1/2 singularity at the left endpoint
  const auto r = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                                    QuadSpec{1e-10, 1e-14, 20000});
  EXPECT_NEAR(r.value, 2.0, 1e-8);
}

TEST(Quadrature, ReportsNonConvergenceWhenBudgetExhausted) {
  const auto r = integrate_adaptive([](double x) { return std::sin(1.0 / (x + 1e-6)); }, 0.0, 1.0,
                                    QuadSpec{1e-14, 1e-16, 8});
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.abs_error, 0.0);
}

TEST(Quadrature, EmptyIntervalIsZero) {
  const auto r = integrate_adaptive([](double x) { return x; }, 2.0, 2.0);
  EXPECT_EQ(r.value, 0.0);
  EXPECT_TRUE(r.converged);
}

TEST(Quadrature, LogPanelsMatchClosedForm) {
  // integral of 1/k over [a, b] = ln(b/a)
  const auto r = integrate_log_panels([](double k) { return 1.0 / k; }, 1e-3, 1e5, 160);
  EXPECT_NEAR(r.value, std::log(1e8), 1e-9);

  // doubling the grid density barely moves a smooth result
  const auto f = [](double k) { return k * k * std::exp(-k); };
  const auto a = integrate_log_panels(f, 1e-3, 1e2, 80);
  const auto b = integrate_log_panels(f, 1e-3, 1e2, 160);
  EXPECT_NEAR(a.value, b.value, 1e-10 * std::fabs(b.value) + 1e-14);
}

TEST(Rng, DeterministicAndStreamsIndependent) {
  Rng a(12345), b(12345);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.unit_open(), b.unit_open());

  Rng s0 = Rng::derive(99, 0);
  Rng s1 = Rng::derive(99, 1);
  bool all_equal = true;
  for (int i = 0; i < 32; ++i)
    if (s0.unit_open() != s1.unit_open()) all_equal = false;
  EXPECT_FALSE(all_equal);

  Rng c0 = Rng::derive(99, 0);
  Rng c0b = Rng::derive(99, 0);
  for (int i = 0; i < 32; ++i) EXPECT_EQ(c0.unit_open(), c0b.unit_open());
}

TEST(Rng, UnitOpenStaysInsideOpenInterval) {
  Rng r(7);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double u = r.unit_open();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_LT(lo, 1e-4);
  EXPECT_GT(hi, 1.0 - 1e-4);
}

TEST(Rng, NormalMomentsMatch) {
  Rng r(2024);
  const int n = 400000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 4.0 / std::sqrt(static_cast<double>(n)));
  EXPECT_NEAR(var, 1.0, 0.01);
}

TEST(MathUtil, ErfInvRoundTrip) {
  for (double p : {1e-9, 1e-4, 0.1, 0.5, 0.8663855974622838, 0.99, 0.999999, -0.25, -0.97}) {
    EXPECT_NEAR(std::erf(erf_inv(p)), p, 1e-14) << "p=" << p;
  }
  EXPECT_EQ(erf_inv(0.0), 0.0);
  EXPECT_TRUE(std::isnan(erf_inv(1.0)));
  EXPECT_TRUE(std::isnan(erf_inv(-1.0)));
}

TEST(MathUtil, DegreeRadianConversions) {
  EXPECT_NEAR(deg_to_rad(180.0), std::numbers::pi, 1e-15);
  EXPECT_NEAR(rad_to_deg(std::numbers::pi / 2.0), 90.0, 1e-12);
}
