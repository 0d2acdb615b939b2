#include "cli.hpp"

#include "io.hpp"

#include "twkde/errors.hpp"
#include "twkde/gof.hpp"
#include "twkde/kde.hpp"
#include "twkde/parallel.hpp"
#include "twkde/scenarios.hpp"
#include "twkde/tuning.hpp"
#include "twkde/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <iostream>
#include <optional>

namespace twkde::cli {

using nlohmann::ordered_json;

namespace {

std::string
utc_now()
{
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string
option_key(const CLI::Option* opt)
{
  if (!opt->get_lnames().empty())
    return opt->get_lnames().front();
  return opt->get_name();
}

class Manifest
{
public:
  explicit Manifest(const CLI::App* sub)
    : sub_(sub)
    , started_(utc_now())
  {}

  ordered_json json(std::uint64_t seed, bool has_seed = true) const
  {
    ordered_json params = ordered_json::object();
    for (const CLI::Option* opt : sub_->get_options()) {
      const std::string key = option_key(opt);
      if (key == "help")
        continue;
      if (opt->count() > 0) {
        const auto& r = opt->results();
        params[key] = r.size() == 1 ? ordered_json(r.front()) : ordered_json(r);
      } else if (!opt->get_default_str().empty()) {
        params[key] = opt->get_default_str();
      } else {
        params[key] = nullptr;
      }
    }
    ordered_json m;
    m["subcommand"] = sub_->get_name();
    m["params"] = params;
    m["seed"] = has_seed ? ordered_json(seed) : ordered_json(nullptr);
    m["version"] = twkde::version;
    m["started_at"] = started_;
    m["finished_at"] = utc_now();
    return m;
  }

private:
  const CLI::App* sub_;
  std::string started_;
};

void
write_json(const std::string& path, const ordered_json& j)
{
  write_text(path, j.dump(2) + "\n");
}

ordered_json
number_or_null(double v)
{
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

// ---------------------------------------------------------------------------

struct SampleArgs
{
  double mu = 0.0;
  std::optional<double> phi;
  double power = 0.0;
  std::size_t n = 0;
  std::optional<double> p0;
  std::uint64_t seed = 1;
  std::string out;
};

struct EstimateArgs
{
  std::string data;
  std::optional<double> h;
  std::optional<double> power;
  std::optional<double> grid_max;
  std::size_t grid_size = default_grid_size;
  std::string out;
};

struct SelectArgs
{
  std::string data;
  std::size_t np = default_power_count;
  std::size_t nh = default_bandwidth_count;
  double pmin = default_p_min;
  double pmax = default_p_max;
  std::optional<double> hmin;
  std::optional<double> hmax;
  std::string out;
};

struct SimulateArgs
{
  std::string scenario;
  std::size_t n = 100;
  double p0 = 0.3;
  std::size_t reps = 100;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::size_t np = default_power_count;
  std::size_t nh = default_bandwidth_count;
  std::string out;
};

struct GofArgs
{
  std::string data;
  double mu = 0.0;
  double phi = 0.0;
  double power = 0.0;
  std::size_t B = 500;
  double level = 0.05;
  std::string policy = "reselect";
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string out;
};

std::size_t
resolve_threads(std::size_t requested)
{
  return requested == 0 ? default_thread_count() : requested;
}

int
cmd_sample(const SampleArgs& a, const Manifest& manifest)
{
  if (a.phi.has_value() == a.p0.has_value())
    throw InputError("give exactly one of --phi and --p0");
  const PowerParam p(a.power);
  const double phi = a.phi ? *a.phi : dispersion_from_zero_mass(a.mu, p, *a.p0);
  const auto values = sample(TweedieKernelParams(a.mu, phi, p), a.n, a.seed);

  Table t;
  t.header = { "x" };
  t.rows.reserve(values.size());
  for (double v : values)
    t.rows.push_back({ v });
  write_table(a.out, t);

  ordered_json j;
  j["phi"] = phi;
  j["n"] = a.n;
  j["manifest"] = manifest.json(a.seed);
  write_json(a.out + ".json", j);
  return exit_ok;
}

int
cmd_estimate(const EstimateArgs& a, const Manifest& manifest)
{
  if (a.h.has_value() != a.power.has_value())
    throw InputError("give both --h and --power, or neither to select them");
  const SemicontinuousSample data(read_values(a.data));

  double h = 0.0;
  double p = 0.0;
  if (a.h) {
    h = *a.h;
    p = PowerParam(*a.power).value();
  } else {
    const auto sel = select_for(data, TuningOptions{});
    h = sel.h_star;
    p = sel.p_star;
  }

  EvaluationGrid grid = a.grid_max ? EvaluationGrid::on_interval(*a.grid_max, a.grid_size)
                        : data.positive_count() > 0 ? default_grid(data, a.grid_size)
                                                    : EvaluationGrid::on_interval(1.0, a.grid_size);
  const auto est = evaluate_grid(data, grid, h, PowerParam(p));

  Table t;
  t.header = { "x", "g_hat" };
  const auto pts = est.grid.points();
  for (std::size_t l = 0; l < pts.size(); ++l)
    t.rows.push_back({ pts[l], est.values[l] });
  write_table(a.out, t);

  ordered_json j;
  j["p0_hat"] = est.zero_mass;
  j["h"] = h;
  j["p"] = p;
  j["n"] = data.size();
  j["grid_max"] = est.grid.back();
  j["grid_size"] = est.grid.size();
  j["manifest"] = manifest.json(0, false);
  write_json(a.out + ".json", j);
  return exit_ok;
}

int
cmd_select(const SelectArgs& a, const Manifest& manifest)
{
  const SemicontinuousSample data(read_values(a.data));
  if (data.positive_count() == 0)
    throw AllZeros("tuning needs at least one positive observation");
  const double s = bandwidth_scale(data);
  const auto grids =
    make_grids(a.np, a.nh, a.pmin, a.pmax, a.hmin.value_or(0.01 * s), a.hmax.value_or(2.0 * s));
  const auto sel = profile_select(data, grids, default_grid(data));

  ordered_json table = ordered_json::array();
  for (std::size_t k = 0; k < grids.p_grid.size(); ++k) {
    ordered_json row = ordered_json::array();
    for (std::size_t jh = 0; jh < grids.h_grid.size(); ++jh)
      row.push_back(number_or_null(sel.cv(k, jh)));
    table.push_back(row);
  }
  ordered_json failures = ordered_json::array();
  for (const auto& f : sel.failures)
    failures.push_back({ { "p", grids.p_grid[f.p_index] }, { "h", grids.h_grid[f.h_index] }, { "message", f.message } });

  ordered_json j;
  j["p_star"] = sel.p_star;
  j["h_star"] = sel.h_star;
  j["p_grid"] = grids.p_grid;
  j["h_grid"] = grids.h_grid;
  j["cv_table"] = table;
  j["failures"] = failures;
  j["manifest"] = manifest.json(0, false);
  write_json(a.out, j);
  return exit_ok;
}

int
cmd_simulate(const SimulateArgs& a, const Manifest& manifest)
{
  ScenarioConfig cfg;
  cfg.id = parse_scenario(a.scenario);
  cfg.n = a.n;
  cfg.p0 = a.p0;
  cfg.seed = a.seed;
  cfg.replicates = a.reps;
  TuningOptions tuning;
  tuning.n_p = a.np;
  tuning.n_h = a.nh;
  const auto summary = run_monte_carlo(cfg, tuning, resolve_threads(a.threads));

  std::string csv = "replicate,seed,ok,p_star,h_star,zero_mass,ise,iae\n";
  ordered_json errors = ordered_json::array();
  for (const auto& r : summary.replicates) {
    const double nan = std::nan("");
    csv += std::to_string(r.index) + "," + std::to_string(r.seed) + "," + (r.ok ? "1" : "0");
    for (double v : { r.p_star, r.h_star, r.zero_mass, r.ise, r.iae })
      csv += "," + format_double(r.ok ? v : nan);
    csv += "\n";
    if (!r.ok)
      errors.push_back({ { "replicate", r.index }, { "message", r.error } });
  }
  write_text(a.out, csv);

  ordered_json j;
  j["scenario"] = to_string(cfg.id);
  j["n"] = cfg.n;
  j["p0"] = cfg.p0;
  j["reps"] = cfg.replicates;
  j["failures"] = summary.failures;
  j["mean_ise"] = number_or_null(summary.mean_ise);
  j["sd_ise"] = number_or_null(summary.sd_ise);
  j["mean_iae"] = number_or_null(summary.mean_iae);
  j["sd_iae"] = number_or_null(summary.sd_iae);
  j["errors"] = errors;
  j["manifest"] = manifest.json(a.seed);
  write_json(a.out + ".json", j);
  return exit_ok;
}

int
cmd_gof(const GofArgs& a, const Manifest& manifest)
{
  GofConfig cfg;
  cfg.null = { a.mu, a.phi, a.power };
  cfg.B = a.B;
  cfg.level = a.level;
  cfg.policy = parse_gof_policy(a.policy);
  cfg.threads = resolve_threads(a.threads);
  cfg.validate();
  const SemicontinuousSample data(read_values(a.data));
  const auto res = run_test(data, cfg, a.seed);

  ordered_json j;
  j["statistic"] = res.statistic;
  j["critical_value"] = res.critical_value;
  j["reject"] = res.reject;
  j["level"] = cfg.level;
  j["B"] = cfg.B;
  j["policy"] = to_string(cfg.policy);
  j["p_star"] = res.p_star;
  j["h_star"] = res.h_star;
  j["calibration"] = res.calibration;
  j["manifest"] = manifest.json(a.seed);
  write_json(a.out, j);
  return exit_ok;
}

} // namespace

int
run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{ "Tweedie kernel density estimation for semicontinuous data", "twkde" };
  // -h stays free for the bandwidth flag.
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(twkde::version));
  app.require_subcommand(1);

  SampleArgs sa;
  auto* s = app.add_subcommand("sample", "Draw a Tweedie sample to CSV");
  s->add_option("--mu", sa.mu, "Mean")->required();
  s->add_option("--phi", sa.phi, "Dispersion");
  s->add_option("--power", sa.power, "Power index in (1, 2)")->required();
  s->add_option("--n", sa.n, "Sample size")->required();
  s->add_option("--p0", sa.p0, "Zero mass; sets the dispersion");
  s->add_option("--seed", sa.seed, "Random seed")->capture_default_str();
  s->add_option("--out", sa.out, "Output CSV")->required();

  EstimateArgs ea;
  auto* e = app.add_subcommand("estimate", "Estimate the density on a grid");
  e->add_option("--data", ea.data, "Input CSV")->required();
  e->add_option("--h", ea.h, "Bandwidth");
  e->add_option("--power", ea.power, "Kernel power");
  e->add_option("--grid-max", ea.grid_max, "Upper grid end");
  e->add_option("--grid-size", ea.grid_size, "Grid points")->capture_default_str();
  e->add_option("--out", ea.out, "Output CSV")->required();

  SelectArgs la;
  auto* l = app.add_subcommand("select", "Profile LSCV selection of (p, h)");
  l->add_option("--data", la.data, "Input CSV")->required();
  l->add_option("--np", la.np, "Number of powers")->capture_default_str();
  l->add_option("--nh", la.nh, "Number of bandwidths")->capture_default_str();
  l->add_option("--pmin", la.pmin, "Smallest power")->capture_default_str();
  l->add_option("--pmax", la.pmax, "Largest power")->capture_default_str();
  l->add_option("--hmin", la.hmin, "Smallest bandwidth");
  l->add_option("--hmax", la.hmax, "Largest bandwidth");
  l->add_option("--out", la.out, "Output JSON")->required();

  SimulateArgs ma;
  auto* m = app.add_subcommand("simulate", "Monte Carlo ISE/IAE study");
  m->add_option("--scenario", ma.scenario, "M1, M2, M3 or M4")->required();
  m->add_option("--n", ma.n, "Sample size")->capture_default_str();
  m->add_option("--p0", ma.p0, "Zero mass")->capture_default_str();
  m->add_option("--reps", ma.reps, "Replicates")->capture_default_str();
  m->add_option("--seed", ma.seed, "Random seed")->capture_default_str();
  m->add_option("--threads", ma.threads, "Workers (0: $TWKDE_THREADS or all cores)")->capture_default_str();
  m->add_option("--np", ma.np, "Number of powers")->capture_default_str();
  m->add_option("--nh", ma.nh, "Number of bandwidths")->capture_default_str();
  m->add_option("--out", ma.out, "Per-replicate CSV")->required();

  GofArgs ga;
  auto* g = app.add_subcommand("gof", "Goodness-of-fit test of a Tweedie null");
  g->add_option("--data", ga.data, "Input CSV")->required();
  g->add_option("--mu", ga.mu, "Null mean")->required();
  g->add_option("--phi", ga.phi, "Null dispersion")->required();
  g->add_option("--power", ga.power, "Null power")->required();
  g->add_option("--B", ga.B, "Calibration samples")->capture_default_str();
  g->add_option("--level", ga.level, "Test level")->capture_default_str();
  g->add_option("--policy", ga.policy, "reselect or fixed")->capture_default_str();
  g->add_option("--seed", ga.seed, "Random seed")->capture_default_str();
  g->add_option("--threads", ga.threads, "Workers (0: $TWKDE_THREADS or all cores)")->capture_default_str();
  g->add_option("--out", ga.out, "Output JSON")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& pe) {
    if (pe.get_exit_code() == 0) {
      app.exit(pe, out, err);
      return exit_ok;
    }
    app.exit(pe, err, err);
    return exit_usage;
  }

  try {
    if (*s)
      return cmd_sample(sa, Manifest(s));
    if (*e)
      return cmd_estimate(ea, Manifest(e));
    if (*l)
      return cmd_select(la, Manifest(l));
    if (*m)
      return cmd_simulate(ma, Manifest(m));
    return cmd_gof(ga, Manifest(g));
  } catch (const AllZeros& ex) {
    err << "twkde: " << ex.what() << "\n";
    return exit_degenerate;
  } catch (const DegenerateSample& ex) {
    err << "twkde: " << ex.what() << "\n";
    return exit_degenerate;
  } catch (const std::exception& ex) {
    err << "twkde: " << ex.what() << "\n";
    return exit_usage;
  }
}

int
run(int argc, char** argv)
{
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i)
    args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

} // namespace twkde::cli
