#include "twkde/asymptotics.hpp"

#include "twkde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace twkde {

namespace {

constexpr double pi = 3.14159265358979323846;
const double two_sqrt_pi = 2.0 * std::sqrt(pi);

void
require_positive(double x, const char* what)
{
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError(std::string(what) + " must be finite and positive");
}

// x |F(x)| must shrink towards both ends for the integral to converge.
void
check_integrable(const std::function<double(double)>& f, double scale, const char* name)
{
  constexpr double floor = 1e-14;
  auto probe = [&](double x) { return x * std::fabs(f(x)); };

  const double near_a = probe(scale * 1e-6);
  const double near_b = probe(scale * 1e-9);
  if (!std::isfinite(near_b) || (near_b > floor && near_b >= near_a))
    throw DivergentFunctional(std::string(name) + " diverges at the origin");

  const double far_a = probe(scale * 1e2);
  const double far_b = probe(scale * 1e3);
  if (!std::isfinite(far_b) || (far_b > floor && far_b >= far_a))
    throw DivergentFunctional(std::string(name) + " diverges at infinity");
}

} // namespace

TargetDensity
TargetDensity::make(std::function<double(double)> g_plus,
                    std::function<double(double)> g_second,
                    double p0,
                    double mode,
                    std::function<double(double)> tail_mass,
                    std::vector<double> landmarks)
{
  if (!(p0 >= 0.0 && p0 <= 1.0))
    throw DomainError("target zero mass must lie in [0, 1]");
  require_positive(mode, "target mode");
  if (!g_plus)
    throw DomainError("target needs a positive-part density");

  TargetDensity t;
  t.g_plus = std::move(g_plus);
  t.g_second = std::move(g_second);
  t.p0 = p0;
  t.mode = mode;
  t.tail_mass = std::move(tail_mass);
  t.landmarks = std::move(landmarks);
  for (double b : t.landmarks)
    require_positive(b, "target landmark");

  const double mass = integrate_half_line(t.g_plus, t.breaks()).value;
  if (std::fabs(mass - (1.0 - p0)) > 1e-6)
    throw DomainError("positive part integrates to " + std::to_string(mass) + ", expected " +
                      std::to_string(1.0 - p0));
  return t;
}

std::vector<double>
TargetDensity::breaks() const
{
  std::vector<double> b{ mode };
  b.insert(b.end(), landmarks.begin(), landmarks.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return b;
}

double
TargetDensity::second_derivative(double x) const
{
  if (g_second)
    return g_second(x);
  if (!allow_finite_difference)
    throw MissingDerivative("target has no second derivative");
  const double s = 1e-4 * x;
  return (g_plus(x + s) - 2.0 * g_plus(x) + g_plus(x - s)) / (s * s);
}

double
TargetDensity::mass_above(double x) const
{
  if (tail_mass)
    return tail_mass(x);
  std::vector<double> pts{ x };
  for (double b : breaks())
    if (b > x)
      pts.push_back(b);
  double mass = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i)
    mass += integrate(g_plus, pts[i - 1], pts[i]).value;
  return mass + integrate_to_infinity(g_plus, pts.back()).value;
}

double
bias_leading(double x, double h, PowerParam p, const TargetDensity& target)
{
  require_positive(x, "evaluation point");
  require_positive(h, "bandwidth");
  return 0.5 * h * std::pow(x, p.value()) * target.second_derivative(x);
}

double
variance_leading(double x, double h, double n, PowerParam p, const TargetDensity& target)
{
  require_positive(x, "evaluation point");
  require_positive(h, "bandwidth");
  if (!(n >= 1.0))
    throw DomainError("sample size must be at least 1");
  return target(x) / (n * std::sqrt(h) * two_sqrt_pi * std::pow(x, 0.5 * p.value()));
}

double
mse_leading(double x, double h, double n, PowerParam p, const TargetDensity& target)
{
  const double b = bias_leading(x, h, p, target);
  return b * b + variance_leading(x, h, n, p, target);
}

double
h_opt_pointwise(double x, PowerParam p, const TargetDensity& target, double n)
{
  require_positive(x, "evaluation point");
  if (!(n >= 1.0))
    throw DomainError("sample size must be at least 1");
  const double g2 = target.second_derivative(x);
  if (g2 == 0.0)
    throw DegenerateCurvature("g''(x) = 0, the MSE-optimal bandwidth is undefined");
  const double ratio = target(x) / (two_sqrt_pi * std::pow(x, 2.5 * p.value()) * g2 * g2);
  return std::pow(ratio, 0.4) * std::pow(n, -0.4);
}

double
optimal_mse(double x, const TargetDensity& target, double n)
{
  const double g = target(x);
  const double g2 = target.second_derivative(x);
  return 1.25 * std::pow(g * g * g * g * g2 * g2 / (16.0 * pi * pi), 0.2) * std::pow(n, -0.8);
}

MiseFunctionals
mise_functionals(PowerParam p, const TargetDensity& target, const QuadratureSpec& spec)
{
  const double pv = p.value();
  // Once check_integrable has passed, the piece below `floor` is far under
  // double resolution; skipping it avoids 0 * inf from g'' near the origin.
  const double floor = target.mode * 1e-100;
  auto r_integrand = [&](double x) {
    if (x < floor)
      return 0.0;
    const double g2 = target.second_derivative(x);
    if (g2 == 0.0)
      return 0.0;
    const double v = std::pow(x, pv) * g2;
    return v * v;
  };
  auto s_integrand = [&](double x) {
    if (x < floor)
      return 0.0;
    const double g = target(x);
    return g == 0.0 ? 0.0 : std::pow(x, -0.5 * pv) * g;
  };

  if (!target.g_second && !target.allow_finite_difference)
    throw MissingDerivative("R_p needs the target's second derivative");

  check_integrable(r_integrand, target.mode, "R_p(g'')");
  check_integrable(s_integrand, target.mode, "S_p(g)");

  const auto breaks = target.breaks();
  const auto r = integrate_half_line(r_integrand, breaks, spec);
  const auto s = integrate_half_line(s_integrand, breaks, spec);
  if (!std::isfinite(r.value) || !std::isfinite(s.value))
    throw DivergentFunctional("MISE functional is not finite");
  return { r.value, s.value };
}

double
h_opt_mise(const MiseFunctionals& f, double n)
{
  if (!(f.r > 0.0))
    throw DegenerateCurvature("R_p(g'') = 0, the MISE-optimal bandwidth is undefined");
  if (!(n >= 1.0))
    throw DomainError("sample size must be at least 1");
  return std::pow(f.s / (two_sqrt_pi * f.r), 0.4) * std::pow(n, -0.4);
}

double
h_opt_mise(PowerParam p, const TargetDensity& target, double n)
{
  return h_opt_mise(mise_functionals(p, target), n);
}

double
mise_leading(double h, double n, const MiseFunctionals& f)
{
  require_positive(h, "bandwidth");
  return 0.25 * h * h * f.r + f.s / (n * std::sqrt(h) * two_sqrt_pi);
}

double
optimal_mise(const MiseFunctionals& f, double n)
{
  return 1.25 * std::pow(f.r * f.s * f.s * f.s * f.s / (16.0 * pi * pi), 0.2) * std::pow(n, -0.8);
}

CltParams
clt_params(double x,
           double /*h*/,
           double /*n*/,
           PowerParam p,
           const TargetDensity& target,
           double lambda_limit)
{
  require_positive(x, "evaluation point");
  if (!(lambda_limit >= 0.0))
    throw DomainError("bias limit must be nonnegative");
  const double pv = p.value();
  double shift = 0.0;
  if (lambda_limit > 0.0)
    shift = 0.5 * std::pow(x, pv) * target.second_derivative(x) * std::sqrt(lambda_limit);
  return { shift, target(x) / (two_sqrt_pi * std::pow(x, 0.5 * pv)) };
}

} // namespace twkde
