#pragma once

#include <math.h>

namespace twkde::detail {

//! Reentrant log-gamma; std::lgamma writes the global `signgam`.
inline double log_gamma(double x) noexcept
{
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

} // namespace twkde::detail
