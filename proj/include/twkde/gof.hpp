#pragma once

#include "twkde/kde.hpp"
#include "twkde/scenarios.hpp"
#include "twkde/tweedie.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace twkde {

//! Fully specified Tweedie null (mean, dispersion, power).
struct TweedieNull
{
  double mu = m1_mean;
  double phi = 1.0;
  double p = m1_power;

  TweedieKernelParams params() const { return TweedieKernelParams(mu, phi, PowerParam(p)); }
};

enum class GofPolicy
{
  reselect, //!< rerun the profile search on every calibration sample
  fixed     //!< reuse the observed (p*, h*)
};

std::string to_string(GofPolicy policy);
GofPolicy parse_gof_policy(std::string_view name);

struct GofConfig
{
  TweedieNull null;
  std::size_t B = 500;
  double level = 0.05;
  GofPolicy policy = GofPolicy::reselect;
  TuningOptions tuning;
  std::size_t threads = 1;

  void validate() const;
};

struct GofResult
{
  double statistic;
  double critical_value;
  bool reject;
  std::vector<double> calibration;
  double p_star;
  double h_star;
};

//! Null positive-part density on a grid.
std::vector<double> null_density(const TweedieNull& null, const EvaluationGrid& grid);

//! m points on (0, q], q the 0.9999 quantile of the null's positive part.
EvaluationGrid null_grid(const TweedieNull& null, std::size_t m = default_grid_size);

//! Riemann sum of (g_hat - f)^2 dx over the estimate grid.
//! Throws GridMismatch unless `grid` equals the estimate grid and sizes agree.
double gof_statistic(const DensityEstimate& estimate,
                     const EvaluationGrid& grid,
                     std::span<const double> null_values);

//! Order statistic ceil((1 - level) B) of the calibration values.
double critical_value(std::vector<double> calibration, double level);

//! Observed statistic plus B null samples of the same size; sample b uses
//! seed child_seed(seed, b). The statistic lives on `eval_grid`.
GofResult run_test(const SemicontinuousSample& sample,
                   const GofConfig& config,
                   const EvaluationGrid& eval_grid,
                   std::uint64_t seed);

//! Same with eval_grid = null_grid(config.null).
GofResult run_test(const SemicontinuousSample& sample, const GofConfig& config, std::uint64_t seed);

struct RejectionRate
{
  std::size_t runs;
  std::size_t rejections;
  double rate() const { return static_cast<double>(rejections) / static_cast<double>(runs); }
};

//! R tests of config.null on samples of size n drawn from `truth`. Run r
//! draws its data with child_seed(seed, 2r) and calibrates with
//! child_seed(seed, 2r + 1). Runs are spread over `threads` workers; each
//! test is single threaded.
RejectionRate rejection_rate(const TweedieNull& truth,
                             std::size_t n,
                             std::size_t runs,
                             const GofConfig& config,
                             std::uint64_t seed,
                             std::size_t threads);

} // namespace twkde
