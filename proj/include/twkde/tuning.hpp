#pragma once

#include "twkde/kde.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace twkde {

//! Candidate powers and bandwidths for the profile search.
struct GridSpec
{
  std::vector<double> h_grid; //!< increasing, positive
  std::vector<double> p_grid; //!< increasing, inside (1, 2)

  void validate() const;
};

struct LscvValue
{
  double value; //!< term1 - term2
  double term1; //!< Riemann sum of the squared estimate
  double term2; //!< (2/n) sum of leave-one-out values at positive observations
  bool all_zeros; //!< no positive observations, term2 is empty
};

struct FailedCell
{
  std::size_t p_index;
  std::size_t h_index;
  std::string message;
};

struct SelectionResult
{
  double p_star;
  double h_star;
  std::size_t p_index;
  std::size_t h_index;
  GridSpec grids;
  //! cv_table[k * N_h + j] is the criterion at (p_grid[k], h_grid[j]);
  //! failed cells hold +inf.
  std::vector<double> cv_table;
  std::vector<double> h_star_per_p;
  std::vector<double> cv_star_per_p;
  std::vector<FailedCell> failures;

  double cv(std::size_t k, std::size_t j) const { return cv_table[k * grids.h_grid.size() + j]; }
};

inline constexpr std::size_t default_power_count = 18;
inline constexpr std::size_t default_bandwidth_count = 20;
inline constexpr double default_p_min = 1.05;
inline constexpr double default_p_max = 1.95;

//! LSCV restricted to (0, inf): left-point Riemann sum of the squared
//! estimate minus twice the mean leave-one-out value at positive observations.
LscvValue lscv_criterion(const SemicontinuousSample& sample,
                         const EvaluationGrid& grid,
                         double h,
                         PowerParam p,
                         const SeriesPolicy& policy = {});

//! Same criterion from an already built estimator.
LscvValue lscv_criterion(const TweedieKde& kde,
                         const SemicontinuousSample& sample,
                         const EvaluationGrid& grid);

//! Profile search: per power the LSCV-minimising bandwidth, then the power
//! with the smallest profile value. Ties go to the smaller p, then smaller h.
SelectionResult profile_select(const SemicontinuousSample& sample,
                               const GridSpec& grids,
                               const EvaluationGrid& eval_grid,
                               const SeriesPolicy& policy = {});

//! Bandwidth scale median(X+)^(2 - 1.5) used to place the h-grid.
double bandwidth_scale(const SemicontinuousSample& sample);

//! N_p equally spaced powers on [p_min, p_max] and N_h log-spaced bandwidths
//! on [h_min, h_max].
GridSpec make_grids(std::size_t n_p,
                    std::size_t n_h,
                    double p_min,
                    double p_max,
                    double h_min,
                    double h_max);

//! Default (18, 20) grids; h on [0.01 s, 2 s] with s = bandwidth_scale.
GridSpec default_grids(const SemicontinuousSample& sample,
                       std::size_t n_p = default_power_count,
                       std::size_t n_h = default_bandwidth_count);

} // namespace twkde
