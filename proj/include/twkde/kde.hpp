#pragma once

#include "twkde/tweedie.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace twkde {

//! How raw observations are turned into structural zeros.
enum class ZeroRule
{
  exact,          //!< only literal 0.0 counts as zero
  snap_below_tiny //!< additionally map |x| < 1e-12 to 0
};

//! Nonnegative observations, stored in ascending order (zeros first).
class SemicontinuousSample
{
public:
  explicit SemicontinuousSample(std::vector<double> values, ZeroRule rule = ZeroRule::exact);

  std::size_t size() const noexcept { return values_.size(); }
  std::size_t zero_count() const noexcept { return zero_count_; }
  std::size_t positive_count() const noexcept { return values_.size() - zero_count_; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> positives() const noexcept
  {
    return std::span<const double>(values_).subspan(zero_count_);
  }

  double max() const noexcept { return values_.back(); }

private:
  std::vector<double> values_;
  std::size_t zero_count_ = 0;
};

//! Equally spaced points x_1 < ... < x_m on (0, inf).
class EvaluationGrid
{
public:
  //! Points first + l * spacing, l = 0..m-1.
  static EvaluationGrid uniform(double first, double spacing, std::size_t m);
  //! m points upper/m, 2 upper/m, ..., upper.
  static EvaluationGrid on_interval(double upper, std::size_t m);
  //! Validates positivity and equal spacing (1e-12 relative).
  static EvaluationGrid from_points(std::vector<double> points);

  std::span<const double> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double spacing() const noexcept { return spacing_; }
  double front() const noexcept { return points_.front(); }
  double back() const noexcept { return points_.back(); }

  bool operator==(const EvaluationGrid&) const = default;

private:
  EvaluationGrid(std::vector<double> points, double spacing);

  std::vector<double> points_;
  double spacing_;
};

inline constexpr std::size_t default_grid_size = 512;

//! m points on (0, 1.1 max(X)]; throws AllZeros without positive data.
EvaluationGrid default_grid(const SemicontinuousSample& sample,
                            std::size_t m = default_grid_size);

struct DensityEstimate
{
  double zero_mass;
  EvaluationGrid grid;
  std::vector<double> values;
  double h;
  double p;
};

/// Tweedie kernel estimator for one (h, p).
///
/// Holds the x-free series factor of every positive observation, so each
/// evaluation point costs one exponential per observation.
class TweedieKde
{
public:
  TweedieKde(const SemicontinuousSample& sample,
             double h,
             PowerParam p,
             const SeriesPolicy& policy = {});

  std::size_t size() const noexcept { return n_; }
  double h() const noexcept { return kernel_.h(); }
  PowerParam power() const noexcept { return kernel_.power(); }

  //! Estimate at x > 0.
  double operator()(double x) const;

  std::vector<double> on_grid(const EvaluationGrid& grid) const;

  //! K_h(X_i; x) for the i-th observation in sorted order.
  double kernel(std::size_t i, double x) const;

  //! Leave-one-out estimate at x given the full estimate `full` at x.
  double leave_one_out(std::size_t i, double x, double full) const;

private:
  double sum_at(double x) const;

  TweedieKernel kernel_;
  std::size_t n_;
  std::size_t zeros_;
  std::vector<double> positives_;
  std::vector<double> log_norm_;
};

//! Empirical proportion of exact zeros.
double zero_mass_estimate(const SemicontinuousSample& sample);

double evaluate(const SemicontinuousSample& sample,
                double x,
                double h,
                PowerParam p,
                const SeriesPolicy& policy = {});

DensityEstimate evaluate_grid(const SemicontinuousSample& sample,
                              const EvaluationGrid& grid,
                              double h,
                              PowerParam p,
                              const SeriesPolicy& policy = {});

//! n/(n-1) full - K_h(X_i; x)/(n-1); `i` indexes the sorted sample.
double loo_evaluate(const SemicontinuousSample& sample,
                    std::size_t i,
                    double x,
                    double h,
                    PowerParam p,
                    double full,
                    const SeriesPolicy& policy = {});

} // namespace twkde
