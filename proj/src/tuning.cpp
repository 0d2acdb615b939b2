#include "twkde/tuning.hpp"

#include "twkde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twkde {

void
GridSpec::validate() const
{
  if (h_grid.empty() || p_grid.empty())
    throw DomainError("power and bandwidth grids must be nonempty");
  for (std::size_t j = 0; j < h_grid.size(); ++j) {
    if (!(h_grid[j] > 0.0) || !std::isfinite(h_grid[j]))
      throw DomainError("bandwidth grid values must be finite and positive");
    if (j > 0 && !(h_grid[j] > h_grid[j - 1]))
      throw DomainError("bandwidth grid must be increasing");
  }
  for (std::size_t k = 0; k < p_grid.size(); ++k) {
    if (!(p_grid[k] > 1.0 && p_grid[k] < 2.0))
      throw DomainError("power grid values must lie strictly inside (1, 2)");
    if (k > 0 && !(p_grid[k] > p_grid[k - 1]))
      throw DomainError("power grid must be increasing");
  }
}

LscvValue
lscv_criterion(const TweedieKde& kde, const SemicontinuousSample& sample, const EvaluationGrid& grid)
{
  const std::size_t n = sample.size();
  if (n < 2)
    throw DegenerateSample("LSCV needs at least two observations");

  double term1 = 0.0;
  for (double g : kde.on_grid(grid))
    term1 += g * g;
  term1 *= grid.spacing();

  double loo_sum = 0.0;
  auto values = sample.values();
  for (std::size_t i = sample.zero_count(); i < n; ++i) {
    const double xi = values[i];
    loo_sum += kde.leave_one_out(i, xi, kde(xi));
  }
  const double term2 = 2.0 * loo_sum / static_cast<double>(n);
  return { term1 - term2, term1, term2, sample.positive_count() == 0 };
}

LscvValue
lscv_criterion(const SemicontinuousSample& sample,
               const EvaluationGrid& grid,
               double h,
               PowerParam p,
               const SeriesPolicy& policy)
{
  if (sample.size() < 2)
    throw DegenerateSample("LSCV needs at least two observations");
  TweedieKde kde(sample, h, p, policy);
  return lscv_criterion(kde, sample, grid);
}

SelectionResult
profile_select(const SemicontinuousSample& sample,
               const GridSpec& grids,
               const EvaluationGrid& eval_grid,
               const SeriesPolicy& policy)
{
  grids.validate();
  if (sample.size() < 2)
    throw DegenerateSample("profile selection needs at least two observations");

  const std::size_t np = grids.p_grid.size();
  const std::size_t nh = grids.h_grid.size();
  constexpr double inf = std::numeric_limits<double>::infinity();

  SelectionResult res;
  res.grids = grids;
  res.cv_table.assign(np * nh, inf);
  res.h_star_per_p.assign(np, std::numeric_limits<double>::quiet_NaN());
  res.cv_star_per_p.assign(np, inf);

  for (std::size_t k = 0; k < np; ++k) {
    const PowerParam p(grids.p_grid[k]);
    for (std::size_t j = 0; j < nh; ++j) {
      try {
        TweedieKde kde(sample, grids.h_grid[j], p, policy);
        const double v = lscv_criterion(kde, sample, eval_grid).value;
        if (std::isnan(v))
          throw NonConvergence("criterion evaluated to NaN");
        res.cv_table[k * nh + j] = v;
      } catch (const NonConvergence& e) {
        res.failures.push_back({ k, j, e.what() });
      }
    }
  }

  // Strict comparisons in increasing index order give the smaller-p,
  // smaller-h tie rule.
  std::size_t best_k = np;
  std::size_t best_j = nh;
  for (std::size_t k = 0; k < np; ++k) {
    std::size_t arg = nh;
    for (std::size_t j = 0; j < nh; ++j) {
      const double v = res.cv_table[k * nh + j];
      if (arg == nh ? v < inf : v < res.cv_table[k * nh + arg])
        arg = j;
    }
    if (arg == nh)
      continue;
    res.h_star_per_p[k] = grids.h_grid[arg];
    res.cv_star_per_p[k] = res.cv_table[k * nh + arg];
    if (best_k == np || res.cv_star_per_p[k] < res.cv_star_per_p[best_k]) {
      best_k = k;
      best_j = arg;
    }
  }
  if (best_k == np)
    throw NonConvergence("every (p, h) cell of the profile search failed");

  res.p_index = best_k;
  res.h_index = best_j;
  res.p_star = grids.p_grid[best_k];
  res.h_star = grids.h_grid[best_j];
  return res;
}

double
bandwidth_scale(const SemicontinuousSample& sample)
{
  auto pos = sample.positives();
  if (pos.empty())
    throw AllZeros("bandwidth scale needs at least one positive observation");
  const std::size_t m = pos.size();
  const double median = m % 2 == 1 ? pos[m / 2] : 0.5 * (pos[m / 2 - 1] + pos[m / 2]);
  constexpr double p_mid = 1.5;
  return std::pow(median, 2.0 - p_mid);
}

GridSpec
make_grids(std::size_t n_p, std::size_t n_h, double p_min, double p_max, double h_min, double h_max)
{
  if (n_p == 0 || n_h == 0)
    throw DomainError("grid sizes must be positive");
  if (!(p_min <= p_max) || !(h_min <= h_max) || !(h_min > 0.0))
    throw DomainError("grid ranges must be ordered with h_min > 0");
  if ((n_p > 1 && !(p_min < p_max)) || (n_h > 1 && !(h_min < h_max)))
    throw DomainError("grid range is empty for more than one candidate");

  GridSpec g;
  g.p_grid.resize(n_p);
  g.h_grid.resize(n_h);
  for (std::size_t k = 0; k < n_p; ++k)
    g.p_grid[k] = n_p == 1 ? p_min
                           : p_min + (p_max - p_min) * static_cast<double>(k) /
                                       static_cast<double>(n_p - 1);
  const double lo = std::log(h_min);
  const double hi = std::log(h_max);
  for (std::size_t j = 0; j < n_h; ++j)
    g.h_grid[j] = n_h == 1 ? h_min
                           : std::exp(lo + (hi - lo) * static_cast<double>(j) /
                                             static_cast<double>(n_h - 1));
  // Pin the endpoints exactly.
  if (n_p > 1)
    g.p_grid.back() = p_max;
  if (n_h > 1) {
    g.h_grid.front() = h_min;
    g.h_grid.back() = h_max;
  }
  g.validate();
  return g;
}

GridSpec
default_grids(const SemicontinuousSample& sample, std::size_t n_p, std::size_t n_h)
{
  const double s = bandwidth_scale(sample);
  return make_grids(n_p, n_h, default_p_min, default_p_max, 0.01 * s, 2.0 * s);
}

} // namespace twkde
