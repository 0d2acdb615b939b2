#include "oracles.hpp"

#include "twkde/asymptotics.hpp"
#include "twkde/errors.hpp"
#include "twkde/scenarios.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace twkde;

namespace {

//! (1 - p0) Gamma(shape, rate) positive part with analytic g''.
TargetDensity
gamma_target(double shape, double rate, double p0)
{
  const double w = 1.0 - p0;
  auto f = [=](double x) {
    if (!(x > 0.0))
      return 0.0;
    return w * std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x - std::lgamma(shape));
  };
  // f'' / f = ((a-1)/x - b)^2 - (a-1)/x^2, summed as separate powers of x.
  auto f2 = [=](double x) {
    if (!(x > 0.0))
      return 0.0;
    const double lf = std::log(w) + shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x - std::lgamma(shape);
    const double a1 = shape - 1.0;
    double v = rate * rate * std::exp(lf);
    if (a1 != 0.0)
      v += a1 * (a1 - 1.0) * std::exp(lf - 2.0 * std::log(x)) - 2.0 * a1 * rate * std::exp(lf - std::log(x));
    return v;
  };
  return TargetDensity::make(f, f2, p0, std::max(shape - 1.0, 0.5) / rate);
}

} // namespace

TEST(Target, MassCheckAndDerivatives)
{
  EXPECT_THROW(TargetDensity::make([](double x) { return std::exp(-x); }, {}, 0.5, 1.0), DomainError);
  const auto t = gamma_target(3.0, 2.0, 0.2);
  EXPECT_NEAR(t.mass_above(1e-12), 0.8, 1e-8);
  // Finite differences track the analytic derivative.
  TargetDensity fd = t;
  fd.g_second = {};
  for (double x : { 0.4, 1.0, 2.5 })
    EXPECT_NEAR(fd.second_derivative(x) / t.second_derivative(x), 1.0, 1e-6);
  fd.allow_finite_difference = false;
  EXPECT_THROW(fd.second_derivative(1.0), MissingDerivative);
}

TEST(Bias, ZeroCurvatureAndLinearity)
{
  auto t = gamma_target(3.0, 2.0, 0.2);
  const PowerParam p(1.3);
  EXPECT_NEAR(bias_leading(1.0, 0.2, p, t), 2.0 * bias_leading(1.0, 0.1, p, t), 1e-16);
  t.g_second = [](double) { return 0.0; };
  EXPECT_EQ(bias_leading(1.0, 0.2, p, t), 0.0);
}

TEST(Variance, ZeroDensityAndBandwidthScaling)
{
  const auto t = gamma_target(3.0, 2.0, 0.2);
  const PowerParam p(1.3);
  EXPECT_NEAR(variance_leading(1.0, 0.05, 100, p, t) / variance_leading(1.0, 0.1, 100, p, t), std::sqrt(2.0), 1e-14);
  auto zero = t;
  zero.g_plus = [](double) { return 0.0; };
  EXPECT_EQ(variance_leading(1.0, 0.05, 100, p, zero), 0.0);
}

TEST(PointwiseOptimum, RateAndOptimalMse)
{
  const auto t = gamma_target(3.0, 2.0, 0.2);
  const PowerParam p(1.4);
  const double x = 0.3, n0 = 150.0;
  const double h0 = h_opt_pointwise(x, p, t, n0);
  EXPECT_NEAR(h_opt_pointwise(x, p, t, 32.0 * n0), h0 / 4.0, 1e-15 * h0);
  const double mse = mse_leading(x, h0, n0, p, t);
  EXPECT_NEAR(mse / optimal_mse(x, t, n0), 1.0, 1e-12);

  auto flat = t;
  flat.g_second = [](double) { return 0.0; };
  EXPECT_THROW(h_opt_pointwise(x, p, flat, n0), DegenerateCurvature);
}

TEST(MiseFunctionals, AgreeWithLogTrapezoid)
{
  const auto t = true_positive_density(ScenarioId::M2, 0.3);
  const double p = 1.4;
  const auto f = mise_functionals(PowerParam(p), t);
  const double r = oracle::log_trapezoid(
    [&](double x) {
      const double g2 = t.second_derivative(x);
      return std::pow(x, 2.0 * p) * g2 * g2;
    },
    -40.0, 5.0, 400000);
  const double s = oracle::log_trapezoid([&](double x) { return std::pow(x, -0.5 * p) * t(x); }, -60.0, 5.0, 400000);
  EXPECT_NEAR(f.r / r, 1.0, 1e-6);
  EXPECT_NEAR(f.s / s, 1.0, 1e-6);
}

TEST(MiseFunctionals, ZeroTarget)
{
  const auto t = TargetDensity::make([](double) { return 0.0; }, [](double) { return 0.0; }, 1.0, 1.0);
  const auto f = mise_functionals(PowerParam(1.5), t);
  EXPECT_EQ(f.r, 0.0);
  EXPECT_EQ(f.s, 0.0);
  EXPECT_THROW(h_opt_mise(f, 100.0), DegenerateCurvature);
}

TEST(MiseFunctionals, ScaleCovariance)
{
  const double p = 1.6, c = 3.0;
  const auto base = mise_functionals(PowerParam(p), gamma_target(2.5, 4.0, 0.3));
  const auto scaled = mise_functionals(PowerParam(p), gamma_target(2.5, 4.0 / c, 0.3));
  EXPECT_NEAR(scaled.s / base.s, std::pow(c, -0.5 * p), 1e-8);
}

TEST(MiseFunctionals, DivergenceIsReported)
{
  EXPECT_THROW(mise_functionals(PowerParam(1.9), gamma_target(0.2, 1.0, 0.1)), DivergentFunctional);
}

TEST(MiseOptimum, MinimiserRateAndConstant)
{
  const auto t = true_positive_density(ScenarioId::M3, 0.3);
  const auto f = mise_functionals(PowerParam(1.3), t);
  const double n = 250.0;
  const double h = h_opt_mise(f, n);
  EXPECT_NEAR(mise_leading(h, n, f) / optimal_mise(f, n), 1.0, 1e-12);
  EXPECT_NEAR(h_opt_mise(f, 32.0 * n), h / 4.0, 1e-15 * h);

  const double lo = h / 10.0, hi = h * 10.0;
  const int m = 10000;
  double best_h = lo, best = INFINITY;
  for (int k = 0; k < m; ++k) {
    const double hk = lo * std::pow(hi / lo, k / double(m - 1));
    const double v = mise_leading(hk, n, f);
    if (v < best) {
      best = v;
      best_h = hk;
    }
  }
  const double step = std::pow(hi / lo, 1.0 / (m - 1));
  EXPECT_LE(std::max(best_h / h, h / best_h), step);
}

TEST(Clt, ShiftAndVariance)
{
  const auto t = gamma_target(3.0, 2.0, 0.2);
  const PowerParam p(1.2);
  const double x = 1.1, h = 0.02, n = 400.0;
  const auto c0 = clt_params(x, h, n, p, t, 0.0);
  EXPECT_EQ(c0.mean_shift, 0.0);
  EXPECT_NEAR(c0.variance, variance_leading(x, h, n, p, t) * n * std::sqrt(h), 1e-15);
  const auto c1 = clt_params(x, h, n, p, t, 4.0);
  EXPECT_NEAR(c1.mean_shift, 2.0 * 0.5 * std::pow(x, 1.2) * t.second_derivative(x), 1e-15);
  EXPECT_THROW(clt_params(x, h, n, p, t, -1.0), DomainError);
}
