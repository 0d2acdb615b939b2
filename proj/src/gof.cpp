#include "twkde/gof.hpp"

#include "twkde/errors.hpp"
#include "twkde/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace twkde {

std::string
to_string(GofPolicy policy)
{
  return policy == GofPolicy::fixed ? "fixed" : "reselect";
}

GofPolicy
parse_gof_policy(std::string_view name)
{
  if (name == "reselect")
    return GofPolicy::reselect;
  if (name == "fixed")
    return GofPolicy::fixed;
  throw DomainError("unknown tuning policy '" + std::string(name) + "' (expected reselect or fixed)");
}

void
GofConfig::validate() const
{
  if (B < 1)
    throw DomainError("calibration needs B >= 1");
  if (!(level > 0.0 && level < 1.0))
    throw DomainError("level must lie in (0, 1)");
  if (!(null.mu > 0.0) || !(null.phi > 0.0) || !std::isfinite(null.mu) || !std::isfinite(null.phi))
    throw DomainError("null mean and dispersion must be positive and finite");
  (void)PowerParam(null.p);
}

std::vector<double>
null_density(const TweedieNull& null, const EvaluationGrid& grid)
{
  const auto params = null.params();
  std::vector<double> out;
  out.reserve(grid.size());
  for (double x : grid.points())
    out.push_back(std::exp(log_subdensity(x, params)));
  return out;
}

EvaluationGrid
null_grid(const TweedieNull& null, std::size_t m)
{
  return metric_grid(tweedie_target(null.params()), m);
}

double
gof_statistic(const DensityEstimate& estimate,
              const EvaluationGrid& grid,
              std::span<const double> null_values)
{
  if (!(estimate.grid == grid) || null_values.size() != grid.size() ||
      estimate.values.size() != grid.size())
    throw GridMismatch("estimate and null density are not on the same grid");
  double s = 0.0;
  for (std::size_t l = 0; l < null_values.size(); ++l) {
    const double d = estimate.values[l] - null_values[l];
    s += d * d;
  }
  return s * grid.spacing();
}

double
critical_value(std::vector<double> calibration, double level)
{
  if (calibration.empty())
    throw DomainError("no calibration statistics");
  if (!(level > 0.0 && level < 1.0))
    throw DomainError("level must lie in (0, 1)");
  const double b = static_cast<double>(calibration.size());
  // Guard against (1 - level) B landing a rounding error above an integer.
  auto k = static_cast<std::size_t>(std::ceil((1.0 - level) * b - 1e-9));
  k = std::clamp<std::size_t>(k, 1, calibration.size());
  std::nth_element(calibration.begin(), calibration.begin() + static_cast<std::ptrdiff_t>(k - 1), calibration.end());
  return calibration[k - 1];
}

namespace {

double
smoothed_statistic(const SemicontinuousSample& data,
                   const GofConfig& config,
                   const EvaluationGrid& grid,
                   std::span<const double> f0,
                   bool reselect,
                   double& p_star,
                   double& h_star)
{
  if (reselect) {
    const auto sel = select_for(data, config.tuning);
    p_star = sel.p_star;
    h_star = sel.h_star;
  }
  const auto est = evaluate_grid(data, grid, h_star, PowerParam(p_star), config.tuning.policy);
  return gof_statistic(est, grid, f0);
}

} // namespace

GofResult
run_test(const SemicontinuousSample& sample,
         const GofConfig& config,
         const EvaluationGrid& eval_grid,
         std::uint64_t seed)
{
  config.validate();
  const auto f0 = null_density(config.null, eval_grid);
  const auto params = config.null.params();

  GofResult result{};
  result.statistic = smoothed_statistic(sample, config, eval_grid, f0, true, result.p_star, result.h_star);

  result.calibration.resize(config.B);
  parallel_for(config.B, config.threads, [&](std::size_t b) {
    const SemicontinuousSample draw(twkde::sample(params, sample.size(), child_seed(seed, b)));
    double p = result.p_star;
    double h = result.h_star;
    result.calibration[b] = smoothed_statistic(draw, config, eval_grid, f0, config.policy == GofPolicy::reselect, p, h);
  });

  result.critical_value = critical_value(result.calibration, config.level);
  result.reject = result.statistic > result.critical_value;
  return result;
}

GofResult
run_test(const SemicontinuousSample& sample, const GofConfig& config, std::uint64_t seed)
{
  config.validate();
  return run_test(sample, config, null_grid(config.null), seed);
}

RejectionRate
rejection_rate(const TweedieNull& truth,
               std::size_t n,
               std::size_t runs,
               const GofConfig& config,
               std::uint64_t seed,
               std::size_t threads)
{
  config.validate();
  if (runs < 1 || n < 1)
    throw DomainError("rejection rate needs runs >= 1 and n >= 1");
  const auto grid = null_grid(config.null);
  const auto params = truth.params();
  GofConfig inner = config;
  inner.threads = 1;

  std::vector<char> rejected(runs, 0);
  parallel_for(runs, threads, [&](std::size_t r) {
    const SemicontinuousSample data(sample(params, n, child_seed(seed, 2 * r)));
    rejected[r] = run_test(data, inner, grid, child_seed(seed, 2 * r + 1)).reject ? 1 : 0;
  });
  return { runs, static_cast<std::size_t>(std::count(rejected.begin(), rejected.end(), 1)) };
}

} // namespace twkde
