#include "twkde/tweedie.hpp"

#include "twkde/errors.hpp"
#include "twkde/special.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace twkde {

namespace {

constexpr double pi = 3.14159265358979323846;

// Beyond this the bracketing of the peak index gives up.
constexpr double max_peak_index = 1e15;

} // namespace

PowerParam::PowerParam(double p)
  : p_(p)
{
  if (!(p > 1.0 && p < 2.0))
    throw DomainError("power parameter must lie strictly inside (1, 2), got " +
                      std::to_string(p));
}

TweedieKernelParams::TweedieKernelParams(double x, double h, PowerParam p)
  : x_(x)
  , h_(h)
  , p_(p)
{
  if (!(x >= 0.0) || !std::isfinite(x))
    throw DomainError("kernel centre must be finite and nonnegative");
  if (!(h > 0.0) || !std::isfinite(h))
    throw DomainError("bandwidth must be finite and positive");
}

void
SeriesPolicy::validate() const
{
  if (!(cutoff > 0.0 && cutoff < 1.0))
    throw DomainError("series cutoff must lie in (0, 1)");
  if (max_terms < 1)
    throw DomainError("series term cap must be at least 1");
}

DerivedParams
derived_params(const TweedieKernelParams& params)
{
  const double p = params.power().value();
  const double alpha = params.power().alpha();
  const double x = params.x();
  const double h = params.h();
  if (x == 0.0)
    return { 0.0, alpha, 0.0 };
  return { std::pow(x, 2.0 - p) / (h * (2.0 - p)),
           alpha,
           h * (p - 1.0) * std::pow(x, p - 1.0) };
}

double
point_mass(const TweedieKernelParams& params)
{
  if (params.x() == 0.0)
    return 1.0;
  return std::exp(-derived_params(params).lambda);
}

// ---------------------------------------------------------------------------
// WrightSeries

WrightSeries::WrightSeries(double alpha, SeriesPolicy policy)
  : alpha_(alpha)
  , policy_(policy)
{
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw DomainError("Wright series shape must be positive");
  policy_.validate();
}

double
WrightSeries::coefficient(std::size_t j)
{
  if (j >= coeff_.size()) {
    std::size_t old = coeff_.size();
    std::size_t grown = std::max<std::size_t>(j + 1, std::max<std::size_t>(64, 2 * old));
    coeff_.resize(grown);
    for (std::size_t k = old; k < grown; ++k) {
      const double jd = static_cast<double>(k);
      coeff_[k] = k == 0 ? 0.0
                         : detail::log_gamma(jd + 1.0) + detail::log_gamma(jd * alpha_);
    }
  }
  return coeff_[j];
}

std::size_t
WrightSeries::peak_index(double log_a) const
{
  using boost::math::digamma;
  // d/dj of the log-term; strictly decreasing in j.
  auto slope = [&](double j) { return log_a - digamma(j + 1.0) - alpha_ * digamma(j * alpha_); };

  if (slope(1.0) <= 0.0)
    return 1;

  // Stirling guess for the root of the slope.
  double guess = std::exp(std::min((log_a - alpha_ * std::log(alpha_)) / (1.0 + alpha_), 700.0));
  double lo = 1.0;
  double hi = std::max(2.0, 2.0 * guess);
  if (guess > 2.0 && slope(0.5 * guess) > 0.0)
    lo = 0.5 * guess;
  while (slope(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > max_peak_index)
      throw NonConvergence("Wright series peak index out of range");
  }
  if (hi > max_peak_index)
    throw NonConvergence("Wright series peak index out of range");
  while (hi - lo > 0.5) {
    double mid = 0.5 * (lo + hi);
    if (slope(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return static_cast<std::size_t>(std::max(1.0, std::round(0.5 * (lo + hi))));
}

double
WrightSeries::log_value(double log_a)
{
  if (std::isnan(log_a))
    throw DomainError("Wright series argument is NaN");
  if (log_a == -std::numeric_limits<double>::infinity())
    return log_a;

  const std::size_t peak = peak_index(log_a);
  if (peak > policy_.max_terms)
    throw NonConvergence("Wright series peak index exceeds the term cap");

  const double log_cut = std::log(policy_.cutoff);
  auto log_term = [&](std::size_t j) {
    return static_cast<double>(j) * log_a - coefficient(j);
  };

  const double ref = log_term(peak);
  double running_max = ref;
  double sum = 1.0;
  std::size_t count = 1;

  for (std::size_t j = peak; j-- > 1;) {
    const double lt = log_term(j);
    running_max = std::max(running_max, lt);
    sum += std::exp(lt - ref);
    ++count;
    if (lt - running_max < log_cut)
      break;
  }
  for (std::size_t j = peak + 1;; ++j) {
    if (count >= policy_.max_terms)
      throw NonConvergence("Wright series did not reach its cutoff within " +
                           std::to_string(policy_.max_terms) + " terms");
    const double lt = log_term(j);
    running_max = std::max(running_max, lt);
    sum += std::exp(lt - ref);
    ++count;
    if (lt - running_max < log_cut)
      break;
  }
  return ref + std::log(sum);
}

// ---------------------------------------------------------------------------
// TweedieKernel

TweedieKernel::TweedieKernel(double h, PowerParam p, SeriesPolicy policy)
  : h_(h)
  , p_(p)
  , log_kappa_(0.0)
  , series_(p.alpha(), policy)
{
  if (!(h > 0.0) || !std::isfinite(h))
    throw DomainError("bandwidth must be finite and positive");
  const double pv = p.value();
  log_kappa_ = -std::log(h * (2.0 - pv)) - p.alpha() * std::log(h * (pv - 1.0));
}

double
TweedieKernel::log_normalizer(double t)
{
  if (!(t > 0.0))
    throw DomainError("subdensity argument must be positive");
  const double log_t = std::log(t);
  return series_.log_value(log_kappa_ + series_.alpha() * log_t) - log_t;
}

TweedieKernel::Centre
TweedieKernel::centre(double x) const
{
  const double p = p_.value();
  return { std::pow(x, 2.0 - p) / (h_ * (2.0 - p)), std::pow(x, 1.0 - p) / (h_ * (p - 1.0)) };
}

// ---------------------------------------------------------------------------

double
log_subdensity(double t, const TweedieKernelParams& params, const SeriesPolicy& policy)
{
  if (!(t > 0.0))
    throw DomainError("subdensity argument must be positive");
  if (!(params.x() > 0.0))
    throw DomainError("subdensity requires a positive kernel centre");
  TweedieKernel kernel(params.h(), params.power(), policy);
  return TweedieKernel::log_subdensity(t, kernel.log_normalizer(t), kernel.centre(params.x()));
}

double
wright_series(double a, double alpha, const SeriesPolicy& policy)
{
  if (!(a >= 0.0))
    throw DomainError("Wright series argument must be nonnegative");
  if (a == 0.0)
    return 0.0;
  WrightSeries series(alpha, policy);
  return std::exp(series.log_value(std::log(a)));
}

KernelValue
kernel_eval(double t, const TweedieKernelParams& params, const SeriesPolicy& policy)
{
  if (!(t >= 0.0))
    throw DomainError("kernel argument must be nonnegative");
  if (params.x() == 0.0) {
    if (t == 0.0)
      return { KernelValue::Kind::atom, 1.0 };
    return { KernelValue::Kind::subdensity, 0.0 };
  }
  if (t == 0.0)
    return { KernelValue::Kind::atom, point_mass(params) };
  return { KernelValue::Kind::subdensity, std::exp(log_subdensity(t, params, policy)) };
}

double
unit_deviance(double u, double x, PowerParam p)
{
  if (!(u > 0.0) || !(x > 0.0))
    throw DomainError("unit deviance needs u > 0 and x > 0");
  if (u == x)
    return 0.0;
  const double pv = p.value();
  const double d = 2.0 * (std::pow(u, 2.0 - pv) / ((1.0 - pv) * (2.0 - pv)) -
                          u * std::pow(x, 1.0 - pv) / (1.0 - pv) +
                          std::pow(x, 2.0 - pv) / (2.0 - pv));
  return std::max(d, 0.0);
}

double
saddlepoint_subdensity(double u, const TweedieKernelParams& params)
{
  if (!(u > 0.0) || !(params.x() > 0.0))
    throw DomainError("saddlepoint approximation needs u > 0 and x > 0");
  const double h = params.h();
  const double pv = params.power().value();
  const double d = unit_deviance(u, params.x(), params.power());
  return std::exp(-d / (2.0 * h)) / std::sqrt(2.0 * pi * h * std::pow(u, pv));
}

double
gaussian_local_subdensity(double u, const TweedieKernelParams& params)
{
  if (!(u > 0.0) || !(params.x() > 0.0))
    throw DomainError("local Gaussian approximation needs u > 0 and x > 0");
  const double var = params.h() * std::pow(params.x(), params.power().value());
  const double z = u - params.x();
  return std::exp(-z * z / (2.0 * var)) / std::sqrt(2.0 * pi * var);
}

std::vector<double>
sample(const TweedieKernelParams& params, std::size_t n, std::uint64_t seed)
{
  if (!(params.x() > 0.0))
    throw DomainError("Tweedie sampler needs a positive mean");
  const auto d = derived_params(params);

  std::mt19937_64 rng(seed);
  std::poisson_distribution<std::int64_t> events(d.lambda);
  std::gamma_distribution<double> jumps;
  using gamma_param = std::gamma_distribution<double>::param_type;

  std::vector<double> out(n);
  for (auto& value : out) {
    const std::int64_t count = events(rng);
    // A sum of `count` iid Gamma(alpha, beta) jumps is Gamma(count alpha, beta).
    value = count == 0 ? 0.0
                       : jumps(rng, gamma_param(static_cast<double>(count) * d.alpha, d.beta));
  }
  return out;
}

double
dispersion_from_zero_mass(double mu, PowerParam p, double p0)
{
  if (!(mu > 0.0))
    throw DomainError("mean must be positive");
  if (!(p0 > 0.0 && p0 < 1.0))
    throw DomainError("zero mass must lie strictly inside (0, 1)");
  const double pv = p.value();
  return std::pow(mu, 2.0 - pv) / ((2.0 - pv) * (-std::log(p0)));
}

} // namespace twkde
