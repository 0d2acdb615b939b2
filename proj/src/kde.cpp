#include "twkde/kde.hpp"

#include "twkde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace twkde {

SemicontinuousSample::SemicontinuousSample(std::vector<double> values, ZeroRule rule)
  : values_(std::move(values))
{
  if (values_.empty())
    throw DomainError("sample must contain at least one observation");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double& v = values_[i];
    if (rule == ZeroRule::snap_below_tiny && std::fabs(v) < 1e-12)
      v = 0.0;
    if (!std::isfinite(v) || v < 0.0)
      throw DomainError("observation " + std::to_string(i) + " is not a finite nonnegative value");
  }
  std::sort(values_.begin(), values_.end());
  // -0.0 compares equal to 0.0; store the canonical zero.
  for (double& v : values_) {
    if (v != 0.0)
      break;
    v = 0.0;
    ++zero_count_;
  }
}

EvaluationGrid::EvaluationGrid(std::vector<double> points, double spacing)
  : points_(std::move(points))
  , spacing_(spacing)
{}

EvaluationGrid
EvaluationGrid::uniform(double first, double spacing, std::size_t m)
{
  if (!(first > 0.0) || !(spacing > 0.0) || m == 0 || !std::isfinite(first) ||
      !std::isfinite(spacing))
    throw DomainError("grid needs a positive first point, positive spacing and m >= 1");
  std::vector<double> pts(m);
  for (std::size_t l = 0; l < m; ++l)
    pts[l] = first + static_cast<double>(l) * spacing;
  return EvaluationGrid(std::move(pts), spacing);
}

EvaluationGrid
EvaluationGrid::on_interval(double upper, std::size_t m)
{
  if (!(upper > 0.0) || !std::isfinite(upper) || m == 0)
    throw DomainError("grid needs a positive finite upper end and m >= 1");
  const double dx = upper / static_cast<double>(m);
  std::vector<double> pts(m);
  for (std::size_t l = 0; l < m; ++l)
    pts[l] = static_cast<double>(l + 1) * dx;
  return EvaluationGrid(std::move(pts), dx);
}

EvaluationGrid
EvaluationGrid::from_points(std::vector<double> points)
{
  if (points.empty())
    throw DomainError("grid must not be empty");
  if (!(points.front() > 0.0))
    throw DomainError("grid points must be positive");
  if (points.size() == 1)
    throw DomainError("a single point does not define a grid spacing");
  const double dx = (points.back() - points.front()) / static_cast<double>(points.size() - 1);
  if (!(dx > 0.0) || !std::isfinite(dx))
    throw DomainError("grid points must be strictly increasing");
  for (std::size_t l = 1; l < points.size(); ++l) {
    const double step = points[l] - points[l - 1];
    if (std::fabs(step - dx) > 1e-12 * std::max(dx, points[l]))
      throw DomainError("grid points must be equally spaced");
  }
  return EvaluationGrid(std::move(points), dx);
}

EvaluationGrid
default_grid(const SemicontinuousSample& sample, std::size_t m)
{
  if (sample.positive_count() == 0)
    throw AllZeros("default grid needs at least one positive observation");
  return EvaluationGrid::on_interval(1.1 * sample.max(), m);
}

// ---------------------------------------------------------------------------

TweedieKde::TweedieKde(const SemicontinuousSample& sample,
                       double h,
                       PowerParam p,
                       const SeriesPolicy& policy)
  : kernel_(h, p, policy)
  , n_(sample.size())
  , zeros_(sample.zero_count())
  , positives_(sample.positives().begin(), sample.positives().end())
{
  log_norm_.reserve(positives_.size());
  for (double t : positives_)
    log_norm_.push_back(kernel_.log_normalizer(t));
}

double
TweedieKde::sum_at(double x) const
{
  const auto c = kernel_.centre(x);
  double sum = 0.0;
  for (std::size_t i = 0; i < positives_.size(); ++i)
    sum += std::exp(TweedieKernel::log_subdensity(positives_[i], log_norm_[i], c));
  return static_cast<double>(zeros_) * std::exp(-c.lambda) + sum;
}

double
TweedieKde::operator()(double x) const
{
  if (!(x > 0.0))
    throw DomainError("estimator is evaluated at x > 0 only");
  return sum_at(x) / static_cast<double>(n_);
}

std::vector<double>
TweedieKde::on_grid(const EvaluationGrid& grid) const
{
  std::vector<double> out(grid.size());
  const double n = static_cast<double>(n_);
  auto pts = grid.points();
  for (std::size_t l = 0; l < pts.size(); ++l)
    out[l] = sum_at(pts[l]) / n;
  return out;
}

double
TweedieKde::kernel(std::size_t i, double x) const
{
  if (i >= n_)
    throw DomainError("observation index out of range");
  if (!(x > 0.0))
    throw DomainError("kernel centre must be positive");
  const auto c = kernel_.centre(x);
  if (i < zeros_)
    return std::exp(-c.lambda);
  const std::size_t k = i - zeros_;
  return std::exp(TweedieKernel::log_subdensity(positives_[k], log_norm_[k], c));
}

double
TweedieKde::leave_one_out(std::size_t i, double x, double full) const
{
  if (n_ < 2)
    throw DegenerateSample("leave-one-out needs n >= 2");
  const double n = static_cast<double>(n_);
  const double value = n / (n - 1.0) * full - kernel(i, x) / (n - 1.0);
  return std::max(value, 0.0);
}

// ---------------------------------------------------------------------------

double
zero_mass_estimate(const SemicontinuousSample& sample)
{
  return static_cast<double>(sample.zero_count()) / static_cast<double>(sample.size());
}

double
evaluate(const SemicontinuousSample& sample,
         double x,
         double h,
         PowerParam p,
         const SeriesPolicy& policy)
{
  return TweedieKde(sample, h, p, policy)(x);
}

DensityEstimate
evaluate_grid(const SemicontinuousSample& sample,
              const EvaluationGrid& grid,
              double h,
              PowerParam p,
              const SeriesPolicy& policy)
{
  TweedieKde kde(sample, h, p, policy);
  return DensityEstimate{ zero_mass_estimate(sample), grid, kde.on_grid(grid), h, p.value() };
}

double
loo_evaluate(const SemicontinuousSample& sample,
             std::size_t i,
             double x,
             double h,
             PowerParam p,
             double full,
             const SeriesPolicy& policy)
{
  if (sample.size() < 2)
    throw DegenerateSample("leave-one-out needs n >= 2");
  return TweedieKde(sample, h, p, policy).leave_one_out(i, x, full);
}

} // namespace twkde
