#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace twkde {

//! Tweedie power index, restricted to the compound Poisson-Gamma range (1, 2).
class PowerParam
{
public:
  explicit PowerParam(double p);

  double value() const noexcept { return p_; }

  //! Gamma shape of a single Poisson event, (2 - p) / (p - 1).
  double alpha() const noexcept { return (2.0 - p_) / (p_ - 1.0); }

private:
  double p_;
};

//! Kernel centred at `x` with dispersion (bandwidth) `h` and power `p`.
//!
//! For the sampler the centre is read as the Tweedie mean and `h` as the
//! dispersion.
class TweedieKernelParams
{
public:
  TweedieKernelParams(double x, double h, PowerParam p);

  double x() const noexcept { return x_; }
  double h() const noexcept { return h_; }
  PowerParam power() const noexcept { return p_; }

private:
  double x_;
  double h_;
  PowerParam p_;
};

//! Truncation rule for the infinite series behind the subdensity.
struct SeriesPolicy
{
  //! Stop once a term falls below `cutoff` times the largest term seen.
  double cutoff = 1e-15;
  //! Hard cap on the number of summed terms.
  std::size_t max_terms = 1'000'000;

  void validate() const;
};

struct DerivedParams
{
  double lambda;
  double alpha;
  double beta;
};

struct KernelValue
{
  enum class Kind
  {
    atom,
    subdensity
  };
  Kind kind;
  double value;
};

//! Poisson rate, Gamma shape and Gamma scale of the compound representation.
DerivedParams derived_params(const TweedieKernelParams& params);

//! Probability the kernel puts on t = 0; 1 for the degenerate x = 0 kernel.
double point_mass(const TweedieKernelParams& params);

//! Log of the absolutely continuous part of the kernel at t > 0 (x > 0).
double log_subdensity(double t,
                      const TweedieKernelParams& params,
                      const SeriesPolicy& policy = {});

//! H_alpha(A) = sum_{j>=1} A^j / (j! Gamma(j alpha)).
double wright_series(double a, double alpha, const SeriesPolicy& policy = {});

//! Full kernel: atom at t = 0, subdensity for t > 0.
KernelValue kernel_eval(double t,
                        const TweedieKernelParams& params,
                        const SeriesPolicy& policy = {});

//! Tweedie unit deviance d_p(u, x) >= 0.
double unit_deviance(double u, double x, PowerParam p);

//! (2 pi h u^p)^{-1/2} exp(-d_p(u, x) / 2h).
double saddlepoint_subdensity(double u, const TweedieKernelParams& params);

//! (2 pi h x^p)^{-1/2} exp(-(u - x)^2 / (2 h x^p)).
double gaussian_local_subdensity(double u, const TweedieKernelParams& params);

//! Exact compound Poisson-Gamma draws with mean params.x() and dispersion
//! params.h(). Deterministic for a given seed.
std::vector<double> sample(const TweedieKernelParams& params,
                           std::size_t n,
                           std::uint64_t seed);

//! Dispersion giving P(X = 0) = p0 at mean mu.
double dispersion_from_zero_mass(double mu, PowerParam p, double p0);

/// Log of H_alpha(A) for a fixed shape, evaluated in log space.
///
/// The log-terms j log A - log j! - log Gamma(j alpha) are log-concave in j.
/// The sum starts at the maximising index, found from the stationarity of the
/// continuous relaxation (digamma equation, bracketed bisection), and expands
/// in both directions until terms drop below `cutoff` relative to the running
/// maximum. The coefficient table log j! + log Gamma(j alpha) is cached and
/// grows on demand, so an instance must not be shared across threads.
class WrightSeries
{
public:
  WrightSeries(double alpha, SeriesPolicy policy = {});

  double alpha() const noexcept { return alpha_; }

  //! log H_alpha(exp(log_a)); -inf when log_a is -inf.
  double log_value(double log_a);

  //! Index maximising the log-term for the given log A (always >= 1).
  std::size_t peak_index(double log_a) const;

private:
  double coefficient(std::size_t j);

  double alpha_;
  SeriesPolicy policy_;
  std::vector<double> coeff_; // coeff_[j] = lgamma(j + 1) + lgamma(j alpha)
};

/// Kernel family for a fixed (h, p), shared by every centre x > 0.
///
/// The subdensity factorises as
///   k_h(t; x) = a(t) * exp(-lambda_x - t / beta_x),
///   a(t)      = H_alpha(kappa t^alpha) / t,
/// where kappa = 1 / (h (2 - p) (h (p - 1))^alpha) does not depend on x.
/// `log_normalizer` is the only series evaluation; the centre-dependent part
/// is closed form.
class TweedieKernel
{
public:
  struct Centre
  {
    double lambda;
    double inv_beta;
  };

  TweedieKernel(double h, PowerParam p, SeriesPolicy policy = {});

  double h() const noexcept { return h_; }
  PowerParam power() const noexcept { return p_; }

  //! log a(t) for t > 0.
  double log_normalizer(double t);

  Centre centre(double x) const;

  //! -lambda_x - t / beta_x
  static double exponent(double t, const Centre& c) noexcept
  {
    return -(c.lambda + t * c.inv_beta);
  }

  //! log k_h(t; x) from a precomputed normaliser.
  static double log_subdensity(double t, double log_norm, const Centre& c) noexcept
  {
    return log_norm + exponent(t, c);
  }

private:
  double h_;
  PowerParam p_;
  double log_kappa_;
  WrightSeries series_;
};

} // namespace twkde
