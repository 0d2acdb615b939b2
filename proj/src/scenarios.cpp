#include "twkde/scenarios.hpp"

#include "twkde/errors.hpp"
#include "twkde/parallel.hpp"
#include "twkde/special.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace twkde {

std::string
to_string(ScenarioId id)
{
  switch (id) {
    case ScenarioId::M1:
      return "M1";
    case ScenarioId::M2:
      return "M2";
    case ScenarioId::M3:
      return "M3";
    case ScenarioId::M4:
      return "M4";
  }
  return "?";
}

ScenarioId
parse_scenario(std::string_view name)
{
  if (name == "M1" || name == "m1")
    return ScenarioId::M1;
  if (name == "M2" || name == "m2")
    return ScenarioId::M2;
  if (name == "M3" || name == "m3")
    return ScenarioId::M3;
  if (name == "M4" || name == "m4")
    return ScenarioId::M4;
  throw DomainError("unknown scenario '" + std::string(name) + "' (expected M1..M4)");
}

std::vector<GammaComponent>
gamma_components(ScenarioId id)
{
  switch (id) {
    case ScenarioId::M1:
      return {};
    case ScenarioId::M2:
      return { { 1.0, 1.3, 6.0 } };
    case ScenarioId::M3:
      return { { 0.55, 2.0, 6.0 }, { 0.45, 15.0, 1.0 } };
    case ScenarioId::M4:
      return { { 0.35, 4.0, 6.0 }, { 0.65, 20.0, 3.0 } };
  }
  return {};
}

void
ScenarioConfig::validate() const
{
  if (n < 1)
    throw DomainError("scenario sample size must be at least 1");
  if (replicates < 1)
    throw DomainError("replicate count must be at least 1");
  if (!(p0 > 0.0 && p0 < 1.0))
    throw DomainError("zero mass must lie strictly inside (0, 1)");
}

namespace {

TweedieKernelParams
m1_params(double p0)
{
  const PowerParam p(m1_power);
  return TweedieKernelParams(m1_mean, dispersion_from_zero_mass(m1_mean, p, p0), p);
}

double
gamma_log_pdf(double x, double shape, double rate)
{
  return shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
         detail::log_gamma(shape);
}

// f'' = f ((a-1)(a-2)/x^2 - 2(a-1)b/x + b^2), expanded term by term so the
// factors never overflow separately near the origin.
double
gamma_second_derivative(double x, double shape, double rate)
{
  if (!(x > 0.0))
    return 0.0;
  const double lp = gamma_log_pdf(x, shape, rate);
  const double lx = std::log(x);
  const double a1 = shape - 1.0;
  double v = rate * rate * std::exp(lp);
  if (a1 != 0.0) {
    v -= 2.0 * a1 * rate * std::exp(lp - lx);
    if (shape != 2.0)
      v += a1 * (shape - 2.0) * std::exp(lp - 2.0 * lx);
  }
  return v;
}

} // namespace

SemicontinuousSample
generate(const ScenarioConfig& config)
{
  config.validate();
  if (config.id == ScenarioId::M1)
    return SemicontinuousSample(sample(m1_params(config.p0), config.n, config.seed));

  const auto comps = gamma_components(config.id);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::gamma_distribution<double> gamma;
  using gamma_param = std::gamma_distribution<double>::param_type;

  std::vector<double> values(config.n);
  for (auto& v : values) {
    if (unif(rng) < config.p0) {
      v = 0.0;
      continue;
    }
    std::size_t c = 0;
    if (comps.size() > 1) {
      const double u = unif(rng);
      double acc = 0.0;
      for (c = 0; c + 1 < comps.size(); ++c) {
        acc += comps[c].weight;
        if (u < acc)
          break;
      }
    }
    v = gamma(rng, gamma_param(comps[c].shape, 1.0 / comps[c].rate));
  }
  return SemicontinuousSample(std::move(values));
}

TargetDensity
tweedie_target(const TweedieKernelParams& params)
{
  if (!(params.x() > 0.0))
    throw DomainError("Tweedie target needs a positive mean");
  const auto d = derived_params(params);
  const PowerParam p = params.power();
  auto g = [params, p](double x) {
    if (!(x > 0.0))
      return 0.0;
    // Far tail: the saddlepoint exponent alone is below exp(-1500).
    if (unit_deviance(x, params.x(), p) > 3000.0 * params.h())
      return 0.0;
    return std::exp(log_subdensity(x, params));
  };
  // P(X > x) = sum_j Pois(j; lambda) Q(j alpha, x / beta)
  auto tail = [d](double x) {
    if (!(x > 0.0))
      return -std::expm1(-d.lambda);
    const auto jmax =
      static_cast<std::size_t>(std::ceil(d.lambda + 40.0 * std::sqrt(d.lambda) + 40.0));
    double sum = 0.0;
    double log_w = -d.lambda;
    for (std::size_t j = 1; j <= jmax; ++j) {
      const double jd = static_cast<double>(j);
      log_w += std::log(d.lambda) - std::log(jd);
      sum += std::exp(log_w) * boost::math::gamma_q(jd * d.alpha, x / d.beta);
    }
    return sum;
  };
  std::vector<double> marks;
  for (int j = 1; j <= 6; ++j)
    marks.push_back(j * d.alpha * d.beta);
  marks.push_back(params.x());
  return TargetDensity::make(g, {}, std::exp(-d.lambda), params.x(), tail, marks);
}

TargetDensity
true_positive_density(ScenarioId id, double p0)
{
  if (!(p0 > 0.0 && p0 < 1.0))
    throw DomainError("zero mass must lie strictly inside (0, 1)");
  const double scale = 1.0 - p0;

  if (id == ScenarioId::M1)
    return tweedie_target(m1_params(p0));

  const auto comps = gamma_components(id);
  auto g = [comps, scale](double x) {
    if (!(x > 0.0))
      return 0.0;
    double s = 0.0;
    for (const auto& c : comps)
      s += c.weight * std::exp(gamma_log_pdf(x, c.shape, c.rate));
    return scale * s;
  };
  auto g2 = [comps, scale](double x) {
    double s = 0.0;
    for (const auto& c : comps)
      s += c.weight * gamma_second_derivative(x, c.shape, c.rate);
    return scale * s;
  };
  auto tail = [comps, scale](double x) {
    if (!(x > 0.0))
      return scale;
    double s = 0.0;
    for (const auto& c : comps)
      s += c.weight * boost::math::gamma_q(c.shape, c.rate * x);
    return scale * s;
  };

  std::vector<double> marks;
  for (const auto& c : comps) {
    const double mean = c.shape / c.rate;
    const double sd = std::sqrt(c.shape) / c.rate;
    marks.push_back(mean);
    marks.push_back(mean + 5.0 * sd);
    if (mean - 3.0 * sd > 0.0)
      marks.push_back(mean - 3.0 * sd);
  }
  const auto& first = comps.front();
  const double mode = first.shape > 1.0 ? (first.shape - 1.0) / first.rate : first.shape / first.rate;
  return TargetDensity::make(g, g2, p0, mode, tail, marks);
}

double
positive_quantile(const TargetDensity& target, double prob)
{
  if (!(prob > 0.0 && prob < 1.0))
    throw DomainError("quantile level must lie in (0, 1)");
  const double mass = 1.0 - target.p0;
  if (!(mass > 0.0))
    throw DomainError("target has no positive part");
  const double goal = (1.0 - prob) * mass;

  double lo = 0.0;
  double hi = std::max(target.mode, 1e-8);
  while (target.mass_above(hi) > goal) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12)
      throw DomainError("positive part quantile is out of range");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (target.mass_above(mid) > goal)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

EvaluationGrid
metric_grid(const TargetDensity& target, std::size_t m)
{
  return EvaluationGrid::on_interval(positive_quantile(target, metric_quantile), m);
}

namespace {

std::vector<double>
tabulate(const TargetDensity& target, const EvaluationGrid& grid)
{
  std::vector<double> out;
  out.reserve(grid.size());
  for (double x : grid.points())
    out.push_back(target(x));
  return out;
}

void
check_coverage(const DensityEstimate& estimate, const TargetDensity& target)
{
  const double uncovered = target.mass_above(estimate.grid.back());
  if (uncovered > 1e-3)
    throw GridTooNarrow("target mass " + std::to_string(uncovered) +
                        " lies beyond the evaluation grid");
}

void
check_sizes(const DensityEstimate& estimate, std::span<const double> target_values)
{
  if (estimate.values.size() != target_values.size() || estimate.values.size() != estimate.grid.size())
    throw GridMismatch("target values do not match the estimate grid");
}

} // namespace

double
ise_plus(const DensityEstimate& estimate, std::span<const double> target_values)
{
  check_sizes(estimate, target_values);
  double s = 0.0;
  for (std::size_t l = 0; l < target_values.size(); ++l) {
    const double d = estimate.values[l] - target_values[l];
    s += d * d;
  }
  return s * estimate.grid.spacing();
}

double
iae_plus(const DensityEstimate& estimate, std::span<const double> target_values)
{
  check_sizes(estimate, target_values);
  double s = 0.0;
  for (std::size_t l = 0; l < target_values.size(); ++l)
    s += std::fabs(estimate.values[l] - target_values[l]);
  return s * estimate.grid.spacing();
}

double
ise_plus(const DensityEstimate& estimate, const TargetDensity& target)
{
  check_coverage(estimate, target);
  return ise_plus(estimate, tabulate(target, estimate.grid));
}

double
iae_plus(const DensityEstimate& estimate, const TargetDensity& target)
{
  check_coverage(estimate, target);
  return iae_plus(estimate, tabulate(target, estimate.grid));
}

SelectionResult
select_for(const SemicontinuousSample& sample, const TuningOptions& tuning)
{
  const GridSpec grids = tuning.grids ? *tuning.grids : default_grids(sample, tuning.n_p, tuning.n_h);
  const EvaluationGrid lscv = tuning.lscv_grid ? *tuning.lscv_grid : default_grid(sample);
  return profile_select(sample, grids, lscv, tuning.policy);
}

ReplicateRecord
run_replicate(const ScenarioConfig& config,
              std::size_t index,
              const TuningOptions& tuning,
              const TargetDensity& target,
              const EvaluationGrid& grid,
              std::span<const double> target_values)
{
  ReplicateRecord rec;
  rec.index = index;
  rec.seed = child_seed(config.seed, index);
  try {
    ScenarioConfig cfg = config;
    cfg.seed = rec.seed;
    const auto data = generate(cfg);
    const auto sel = select_for(data, tuning);
    const auto est = evaluate_grid(data, grid, sel.h_star, PowerParam(sel.p_star), tuning.policy);
    (void)target;
    rec.p_star = sel.p_star;
    rec.h_star = sel.h_star;
    rec.zero_mass = est.zero_mass;
    rec.ise = ise_plus(est, target_values);
    rec.iae = iae_plus(est, target_values);
    rec.ok = true;
  } catch (const Error& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

void
summarise(ReplicationSummary& summary)
{
  double n = 0.0;
  double sum_ise = 0.0;
  double sum_iae = 0.0;
  summary.failures = 0;
  for (const auto& r : summary.replicates) {
    if (!r.ok) {
      ++summary.failures;
      continue;
    }
    n += 1.0;
    sum_ise += r.ise;
    sum_iae += r.iae;
  }
  summary.mean_ise = n > 0 ? sum_ise / n : std::nan("");
  summary.mean_iae = n > 0 ? sum_iae / n : std::nan("");
  double ss_ise = 0.0;
  double ss_iae = 0.0;
  for (const auto& r : summary.replicates) {
    if (!r.ok)
      continue;
    ss_ise += (r.ise - summary.mean_ise) * (r.ise - summary.mean_ise);
    ss_iae += (r.iae - summary.mean_iae) * (r.iae - summary.mean_iae);
  }
  summary.sd_ise = n > 1 ? std::sqrt(ss_ise / (n - 1.0)) : 0.0;
  summary.sd_iae = n > 1 ? std::sqrt(ss_iae / (n - 1.0)) : 0.0;
}

ReplicationSummary
run_monte_carlo(const ScenarioConfig& config, const TuningOptions& tuning, std::size_t threads)
{
  config.validate();
  const auto target = true_positive_density(config.id, config.p0);
  const auto grid = metric_grid(target);
  const auto values = tabulate(target, grid);

  ReplicationSummary summary;
  summary.config = config;
  summary.replicates.resize(config.replicates);
  parallel_for(config.replicates, threads, [&](std::size_t r) {
    summary.replicates[r] = run_replicate(config, r, tuning, target, grid, values);
  });
  summarise(summary);
  return summary;
}

} // namespace twkde
