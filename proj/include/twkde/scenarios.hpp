#pragma once

#include "twkde/asymptotics.hpp"
#include "twkde/kde.hpp"
#include "twkde/tuning.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace twkde {

//! Data-generating processes:
//!  M1  Tweedie(mu = 2, p = 1.1), dispersion set so that P(X = 0) = p0
//!  M2  zero-inflated Gamma(shape 1.3, rate 6)
//!  M3  zero-inflated 0.55 Gamma(2, 6) + 0.45 Gamma(15, 1)
//!  M4  zero-inflated 0.35 Gamma(4, 6) + 0.65 Gamma(20, 3)
enum class ScenarioId
{
  M1,
  M2,
  M3,
  M4
};

std::string to_string(ScenarioId id);
ScenarioId parse_scenario(std::string_view name);

inline constexpr double m1_mean = 2.0;
inline constexpr double m1_power = 1.1;

struct GammaComponent
{
  double weight;
  double shape;
  double rate;
};

//! Positive-part mixture of M2-M4 (empty for M1).
std::vector<GammaComponent> gamma_components(ScenarioId id);

struct ScenarioConfig
{
  ScenarioId id = ScenarioId::M1;
  std::size_t n = 100;
  double p0 = 0.3;
  std::uint64_t seed = 1;
  std::size_t replicates = 1;

  void validate() const;
};

//! One sample of size config.n drawn with config.seed.
SemicontinuousSample generate(const ScenarioConfig& config);

//! Positive part of Tweedie(mean params.x(), dispersion params.h(), power),
//! with its series tail mass; second derivatives by finite differences.
TargetDensity tweedie_target(const TweedieKernelParams& params);

//! True positive part g_+ with mass 1 - p0, exact tail mass and (for the
//! Gamma mixtures) analytic second derivative.
TargetDensity true_positive_density(ScenarioId id, double p0);

//! Smallest q with int_q^inf g_+ <= (1 - prob)(1 - p0).
double positive_quantile(const TargetDensity& target, double prob);

inline constexpr double metric_quantile = 0.9999;

//! m points on (0, q], q the 0.9999 quantile of the normalised positive part.
EvaluationGrid metric_grid(const TargetDensity& target, std::size_t m = default_grid_size);

//! Riemann sums of (g_hat - g_+)^2 and |g_hat - g_+| over the estimate's grid.
//! Throw GridTooNarrow when more than 1e-3 of target mass lies past the grid.
double ise_plus(const DensityEstimate& estimate, const TargetDensity& target);
double iae_plus(const DensityEstimate& estimate, const TargetDensity& target);

//! Same sums against target values already tabulated on the estimate grid.
double ise_plus(const DensityEstimate& estimate, std::span<const double> target_values);
double iae_plus(const DensityEstimate& estimate, std::span<const double> target_values);

//! Smoothing choices shared by the harness and the goodness-of-fit test.
struct TuningOptions
{
  std::size_t n_p = default_power_count;
  std::size_t n_h = default_bandwidth_count;
  //! Fixed grids; when empty each sample gets default_grids(sample, n_p, n_h).
  std::optional<GridSpec> grids;
  //! Fixed LSCV grid; when empty each sample gets default_grid(sample).
  std::optional<EvaluationGrid> lscv_grid;
  SeriesPolicy policy;
};

//! Profile selection on a sample with the given tuning options.
SelectionResult select_for(const SemicontinuousSample& sample, const TuningOptions& tuning);

struct ReplicateRecord
{
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double p_star = 0.0;
  double h_star = 0.0;
  double zero_mass = 0.0;
  double ise = 0.0;
  double iae = 0.0;
};

struct ReplicationSummary
{
  ScenarioConfig config;
  std::vector<ReplicateRecord> replicates;
  std::size_t failures = 0;
  double mean_ise = 0.0;
  double sd_ise = 0.0;
  double mean_iae = 0.0;
  double sd_iae = 0.0;
};

//! Replicate r uses seed child_seed(config.seed, r).
ReplicateRecord run_replicate(const ScenarioConfig& config,
                              std::size_t index,
                              const TuningOptions& tuning,
                              const TargetDensity& target,
                              const EvaluationGrid& grid,
                              std::span<const double> target_values);

//! Full Monte Carlo study; the summary does not depend on `threads`.
ReplicationSummary run_monte_carlo(const ScenarioConfig& config,
                                   const TuningOptions& tuning = {},
                                   std::size_t threads = 1);

//! Recomputes means and standard deviations from the per-replicate values.
void summarise(ReplicationSummary& summary);

} // namespace twkde
