#pragma once

// Reference implementations used only by the tests. They share no code with
// the library beyond the public types, and favour the plainest possible
// arithmetic over speed.

#include "twkde/kde.hpp"
#include "twkde/tweedie.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

//! log H_alpha(A), summed forward from j = 1 in long double relative to the
//! largest term so that nothing overflows.
inline long double
log_wright_forward(long double a, long double alpha)
{
  const long double log_a = std::log(a);
  auto log_term = [&](long double j) { return j * log_a - std::lgamma(j + 1.0L) - std::lgamma(j * alpha); };
  long double peak = log_term(1.0L);
  for (long double j = 2.0L;; j += 1.0L) {
    const long double lt = log_term(j);
    if (lt > peak)
      peak = lt;
    else if (lt < peak - 80.0L)
      break;
  }
  long double sum = 0.0L;
  for (long double j = 1.0L;; j += 1.0L) {
    const long double lt = log_term(j);
    sum += std::exp(lt - peak);
    if (lt < peak - 80.0L && j > 2.0L && lt < log_term(j - 1.0L))
      break;
  }
  return peak + std::log(sum);
}

inline long double
wright_forward(long double a, long double alpha)
{
  return a == 0.0L ? 0.0L : std::exp(log_wright_forward(a, alpha));
}

//! p = 1.5 subdensity via the modified Bessel function of order 1:
//! e^{-lambda - t/beta} sqrt(lambda / (t beta)) I_1(2 sqrt(lambda t / beta)).
inline double
bessel_subdensity(double t, double x, double h)
{
  const double lambda = std::sqrt(x) / (0.5 * h);
  const double beta = 0.5 * h * std::sqrt(x);
  const double z = 2.0 * std::sqrt(lambda * t / beta);
  return std::exp(-lambda - t / beta) * std::sqrt(lambda / (t * beta)) *
         boost::math::cyl_bessel_i(1, z);
}

//! Subdensity from the explicit compound Poisson-Gamma mixture, summed over
//! event counts with Gamma densities in long double.
inline double
compound_subdensity(double t, double x, double h, double p)
{
  const long double alpha = (2.0L - p) / (p - 1.0L);
  const long double lambda = std::pow((long double)x, 2.0L - p) / (h * (2.0L - p));
  const long double beta = h * (p - 1.0L) * std::pow((long double)x, p - 1.0L);
  const long double lt = std::log((long double)t);
  long double sum = 0.0L;
  long double best = -1e300L;
  for (long double j = 1.0L; j < 1e6L; j += 1.0L) {
    const long double log_w = -lambda + j * std::log(lambda) - std::lgamma(j + 1.0L);
    const long double shape = j * alpha;
    const long double log_f = (shape - 1.0L) * lt - t / beta - shape * std::log(beta) - std::lgamma(shape);
    const long double term = log_w + log_f;
    if (term > best)
      best = term;
    sum += std::exp(term);
    if (j > lambda && term < best - 60.0L)
      break;
  }
  return static_cast<double>(sum);
}

//! Unit deviance as 2 int_x^u (u - s) / s^p ds with composite Simpson.
inline double
deviance_by_quadrature(double u, double x, double p, int panels = 20000)
{
  const double a = x;
  const double b = u;
  const double step = (b - a) / panels;
  auto f = [&](double s) { return (u - s) / std::pow(s, p); };
  double sum = f(a) + f(b);
  for (int k = 1; k < panels; ++k)
    sum += (k % 2 ? 4.0 : 2.0) * f(a + k * step);
  return 2.0 * sum * step / 3.0;
}

//! Trapezoid rule for int_0^inf f(x) dx after x = e^u, on u in [lo, hi].
inline double
log_trapezoid(const std::function<double(double)>& f, double lo, double hi, std::size_t steps)
{
  const double du = (hi - lo) / static_cast<double>(steps);
  double sum = 0.0;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double u = lo + du * static_cast<double>(k);
    const double x = std::exp(u);
    const double w = (k == 0 || k == steps) ? 0.5 : 1.0;
    sum += w * f(x) * x;
  }
  return sum * du;
}

//! Plain trapezoid on [a, b].
inline double
trapezoid(const std::function<double(double)>& f, double a, double b, std::size_t steps)
{
  const double dx = (b - a) / static_cast<double>(steps);
  double sum = 0.5 * (f(a) + f(b));
  for (std::size_t k = 1; k < steps; ++k)
    sum += f(a + dx * static_cast<double>(k));
  return sum * dx;
}

//! Kernel value K_h(X; x) straight from kernel_eval.
inline double
kernel_value(double obs, double x, double h, double p)
{
  return twkde::kernel_eval(obs, twkde::TweedieKernelParams(x, h, twkde::PowerParam(p))).value;
}

//! Estimator by direct summation over observations.
inline double
direct_estimate(const std::vector<double>& data, double x, double h, double p)
{
  double s = 0.0;
  for (double v : data)
    s += kernel_value(v, x, h, p);
  return s / static_cast<double>(data.size());
}

//! Leave-one-out estimate by refitting without observation i.
inline double
refit_loo(const std::vector<double>& data, std::size_t i, double x, double h, double p)
{
  std::vector<double> rest;
  for (std::size_t k = 0; k < data.size(); ++k)
    if (k != i)
      rest.push_back(data[k]);
  return direct_estimate(rest, x, h, p);
}

//! LSCV from scratch: left-point sum of the squared estimate minus twice the
//! mean refit leave-one-out value at each positive observation.
inline double
lscv_from_scratch(const std::vector<double>& data, const std::vector<double>& grid, double dx, double h, double p)
{
  double term1 = 0.0;
  for (double x : grid) {
    const double g = direct_estimate(data, x, h, p);
    term1 += g * g;
  }
  term1 *= dx;
  double term2 = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (data[i] > 0.0)
      term2 += refit_loo(data, i, data[i], h, p);
  return term1 - 2.0 * term2 / static_cast<double>(data.size());
}

//! int_0^inf f with the range cut at the given increasing points: tanh-sinh
//! on the first piece, Gauss-Kronrod in between, exp-sinh on the tail.
inline double
half_line(const std::function<double(double)>& f, const std::vector<double>& cuts)
{
  using namespace boost::math::quadrature;
  double total = tanh_sinh<double>().integrate(f, 0.0, cuts.front(), 1e-13);
  for (std::size_t k = 1; k < cuts.size(); ++k)
    total += gauss_kronrod<double, 61>::integrate(f, cuts[k - 1], cuts[k], 12, 1e-13);
  total += exp_sinh<double>().integrate(f, cuts.back(), std::numeric_limits<double>::infinity(), 1e-13);
  return total;
}

struct KernelLaw
{
  double atom;
  double mass; //!< atom plus continuous mass
  double mean;
  double variance;
};

//! Total mass, mean and variance of the kernel at (x, h, p), atom included.
inline KernelLaw
kernel_law(double x, double h, double p)
{
  const twkde::TweedieKernelParams params(x, h, twkde::PowerParam(p));
  const double atom = twkde::point_mass(params);
  // Beyond a deviance of 3000 h the density underflows; skip the series there.
  auto dens = [&](double t) {
    if (!(t > 0.0) || twkde::unit_deviance(t, x, twkde::PowerParam(p)) > 3000.0 * h)
      return 0.0;
    return std::exp(twkde::log_subdensity(t, params));
  };
  const double sd = std::sqrt(h * std::pow(x, p));
  std::vector<double> cuts;
  for (double c : { 0.25 * x, x - 2.0 * sd, x, x + 2.0 * sd, x + 6.0 * sd })
    if (c > 0.0 && (cuts.empty() || c > cuts.back()))
      cuts.push_back(c);
  const double m0 = half_line(dens, cuts);
  const double m1 = half_line([&](double t) { return t * dens(t); }, cuts);
  const double c2 = half_line([&](double t) { return (t - x) * (t - x) * dens(t); }, cuts);
  // The atom at 0 contributes (0 - x)^2 to the central moment.
  return { atom, atom + m0, m1, c2 + atom * x * x };
}

} // namespace oracle
