#pragma once

#include "twkde/quadrature.hpp"
#include "twkde/tweedie.hpp"

#include <functional>
#include <vector>

namespace twkde {

/// A semicontinuous target: atom p0 at zero and positive part g_plus on
/// (0, inf) with total mass 1 - p0.
struct TargetDensity
{
  std::function<double(double)> g_plus;
  //! Analytic second derivative of g_plus; empty means finite differences.
  std::function<double(double)> g_second;
  double p0 = 0.0;
  //! Positive-part mode (or any interior scale point); quadrature splits here.
  double mode = 1.0;
  //! Further split points for quadrature (secondary modes, shoulders).
  std::vector<double> landmarks;
  //! Optional exact tail mass x -> int_x^inf g_plus.
  std::function<double(double)> tail_mass;
  //! When false and g_second is empty, derivative requests fail.
  bool allow_finite_difference = true;

  //! Builds a target and checks by quadrature that g_plus carries 1 - p0
  //! within 1e-6.
  static TargetDensity make(std::function<double(double)> g_plus,
                            std::function<double(double)> g_second,
                            double p0,
                            double mode,
                            std::function<double(double)> tail_mass = {},
                            std::vector<double> landmarks = {});

  double operator()(double x) const { return g_plus(x); }

  //! Quadrature split points: mode plus landmarks, sorted.
  std::vector<double> breaks() const;

  //! g''(x), analytic or central differences with step 1e-4 x.
  double second_derivative(double x) const;

  //! int_x^inf g_plus, exact when tail_mass is set, else by quadrature.
  double mass_above(double x) const;
};

struct MiseFunctionals
{
  double r; //!< int x^{2p} g''(x)^2 dx
  double s; //!< int x^{-p/2} g(x) dx
};

struct CltParams
{
  double mean_shift;
  double variance;
};

//! 1/2 h x^p g''(x)
double bias_leading(double x, double h, PowerParam p, const TargetDensity& target);

//! g(x) n^{-1} h^{-1/2} / (2 sqrt(pi) x^{p/2})
double variance_leading(double x, double h, double n, PowerParam p, const TargetDensity& target);

double mse_leading(double x, double h, double n, PowerParam p, const TargetDensity& target);

//! {g / (2 sqrt(pi) x^{5p/2} g''^2)}^{2/5} n^{-2/5}
double h_opt_pointwise(double x, PowerParam p, const TargetDensity& target, double n);

//! (5/4) (g^4 g''^2 / 16 pi^2)^{1/5} n^{-4/5}
double optimal_mse(double x, const TargetDensity& target, double n);

MiseFunctionals mise_functionals(PowerParam p,
                                 const TargetDensity& target,
                                 const QuadratureSpec& spec = {});

//! {S / (2 sqrt(pi) R)}^{2/5} n^{-2/5}
double h_opt_mise(const MiseFunctionals& f, double n);
double h_opt_mise(PowerParam p, const TargetDensity& target, double n);

//! 1/4 h^2 R + n^{-1} h^{-1/2} S / (2 sqrt(pi))
double mise_leading(double h, double n, const MiseFunctionals& f);

//! (5/4) (R S^4 / 16 pi^2)^{1/5} n^{-4/5}
double optimal_mise(const MiseFunctionals& f, double n);

//! Limiting normal of n^{1/2} h^{1/4} (g_hat(x) - g(x)) when n h^{5/2} -> lambda_limit.
CltParams clt_params(double x,
                     double h,
                     double n,
                     PowerParam p,
                     const TargetDensity& target,
                     double lambda_limit);

} // namespace twkde
