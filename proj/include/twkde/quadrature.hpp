#pragma once

#include <functional>
#include <span>

namespace twkde {

struct QuadratureSpec
{
  double rel_tol = 1e-8;
  //! Absolute floor below which an integral is treated as resolved.
  double abs_floor = 1e-14;
};

struct QuadratureResult
{
  double value;
  double error;
};

using Integrand = std::function<double(double)>;

//! Adaptive Gauss-Kronrod on a finite interval.
QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec = {});

//! Integral over (0, inf). The range is split at the sorted `breaks`
//! (all > 0): tanh-sinh on (0, b_0], Gauss-Kronrod between breaks,
//! exp-sinh on [b_last, inf). tanh-sinh tolerates integrable singularities
//! at the origin.
QuadratureResult integrate_half_line(const Integrand& f,
                                     std::span<const double> breaks,
                                     const QuadratureSpec& spec = {});

//! Integral over [a, inf) with exp-sinh.
QuadratureResult integrate_to_infinity(const Integrand& f, double a, const QuadratureSpec& spec = {});

} // namespace twkde
