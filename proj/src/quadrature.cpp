#include "twkde/quadrature.hpp"

#include "twkde/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace twkde {

namespace bq = boost::math::quadrature;

namespace {

constexpr unsigned max_gk_depth = 20;

double
effective_tol(const QuadratureSpec& spec)
{
  return std::max(spec.rel_tol, std::numeric_limits<double>::epsilon() * 8);
}

} // namespace

QuadratureResult
integrate(const Integrand& f, double a, double b, const QuadratureSpec& spec)
{
  if (!(a <= b))
    throw DomainError("integration bounds are reversed");
  if (a == b)
    return { 0.0, 0.0 };
  double err = 0.0;
  double l1 = 0.0;
  const double v = bq::gauss_kronrod<double, 31>::integrate(f, a, b, max_gk_depth,
                                                            effective_tol(spec), &err, &l1);
  return { v, err };
}

QuadratureResult
integrate_to_infinity(const Integrand& f, double a, const QuadratureSpec& spec)
{
  bq::exp_sinh<double> integrator;
  double err = 0.0;
  double l1 = 0.0;
  const double v = integrator.integrate(f, a, std::numeric_limits<double>::infinity(),
                                        effective_tol(spec), &err, &l1);
  return { v, err };
}

QuadratureResult
integrate_half_line(const Integrand& f, std::span<const double> breaks, const QuadratureSpec& spec)
{
  std::vector<double> b(breaks.begin(), breaks.end());
  if (b.empty())
    b.push_back(1.0);
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  if (!(b.front() > 0.0) || !std::isfinite(b.back()))
    throw DomainError("half-line breakpoints must be finite and positive");

  const double tol = effective_tol(spec);
  QuadratureResult total{ 0.0, 0.0 };

  {
    bq::tanh_sinh<double> integrator;
    double err = 0.0;
    double l1 = 0.0;
    total.value += integrator.integrate(f, 0.0, b.front(), tol, &err, &l1);
    total.error += err;
  }
  for (std::size_t i = 1; i < b.size(); ++i) {
    auto piece = integrate(f, b[i - 1], b[i], spec);
    total.value += piece.value;
    total.error += piece.error;
  }
  auto tail = integrate_to_infinity(f, b.back(), spec);
  total.value += tail.value;
  total.error += tail.error;
  return total;
}

} // namespace twkde
