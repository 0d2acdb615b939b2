#include "cli.hpp"
#include "io.hpp"

#include "twkde/kde.hpp"
#include "twkde/parallel.hpp"
#include "twkde/scenarios.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace twkde;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = fs::temp_directory_path() /
           ("twkde_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args)
  {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  void write(const std::string& name, const std::string& text) const
  {
    std::ofstream(path(name)) << text;
  }

  static std::string slurp(const std::string& p)
  {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  static nlohmann::json json(const std::string& p) { return nlohmann::json::parse(slurp(p)); }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

} // namespace

TEST_F(Cli, SampleZeroFractionAndDeterminism)
{
  ASSERT_EQ(run({ "sample", "--mu", "2", "--power", "1.1", "--p0", "0.3", "--n", "1000", "--seed", "7", "--out", path("a.csv") }), 0);
  ASSERT_EQ(run({ "sample", "--mu", "2", "--power", "1.1", "--p0", "0.3", "--n", "1000", "--seed", "7", "--out", path("b.csv") }), 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  const auto xs = cli::read_values(path("a.csv"));
  ASSERT_EQ(xs.size(), 1000u);
  const double zeros = std::count(xs.begin(), xs.end(), 0.0) / 1000.0;
  EXPECT_LT(std::fabs(zeros - 0.3), 3.0 * std::sqrt(0.21 / 1000.0));
  const auto m = json(path("a.csv.json"));
  EXPECT_EQ(m["manifest"]["subcommand"], "sample");
  EXPECT_EQ(m["manifest"]["seed"], 7);
  EXPECT_TRUE(m["manifest"].contains("version"));
  EXPECT_TRUE(m["manifest"].contains("started_at"));
}

TEST_F(Cli, SampleRejectsBadFlags)
{
  EXPECT_EQ(run({ "sample", "--mu", "2", "--power", "2.1", "--p0", "0.3", "--n", "5", "--out", path("a.csv") }), 2);
  EXPECT_NE(err_.str().find("power"), std::string::npos);
  EXPECT_EQ(run({ "sample", "--mu", "2", "--power", "1.5", "--n", "5", "--out", path("a.csv") }), 2);
  EXPECT_EQ(run({ "sample", "--mu", "2", "--power", "1.5", "--phi", "1", "--p0", "0.3", "--n", "5", "--out", path("a.csv") }), 2);
  EXPECT_EQ(run({ "sample", "--bogus" }), 2);
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({ "--help" }), 0);
}

TEST_F(Cli, EstimateZeroOnlyFileWithExplicitSmoothing)
{
  write("z.csv", "x\n0\n0\n0\n");
  ASSERT_EQ(run({ "estimate", "--data", path("z.csv"), "--h", "0.2", "--power", "1.5", "--out", path("e.csv") }), 0);
  const auto header = json(path("e.csv.json"));
  EXPECT_EQ(header["p0_hat"], 1.0);
  const auto t = cli::read_table(path("e.csv"));
  ASSERT_EQ(t.header, (std::vector<std::string>{ "x", "g_hat" }));
  for (const auto& row : t.rows)
    EXPECT_NEAR(row[1], point_mass(TweedieKernelParams(row[0], 0.2, PowerParam(1.5))), 1e-15);
}

TEST_F(Cli, EstimateAllZeroNeedsExplicitSmoothing)
{
  write("z.csv", "0\n0\n");
  EXPECT_EQ(run({ "estimate", "--data", path("z.csv"), "--out", path("e.csv") }), 3);
  EXPECT_EQ(run({ "estimate", "--data", path("z.csv"), "--h", "0.2", "--out", path("e.csv") }), 2);
}

TEST_F(Cli, EstimateRoundTripsBitwise)
{
  write("d.csv", "x\n0\n0.25\n1.5\n0\n3.0000000000000004\n");
  ASSERT_EQ(run({ "estimate", "--data", path("d.csv"), "--h", "0.1", "--power", "1.3", "--grid-max", "4", "--grid-size", "50",
                  "--out", path("e.csv") }),
            0);
  const auto header = json(path("e.csv.json"));
  EXPECT_EQ(header["p0_hat"].get<double>(), 2.0 / 5.0);
  EXPECT_EQ(header["n"], 5);

  const SemicontinuousSample s(cli::read_values(path("d.csv")));
  const auto est = evaluate_grid(s, EvaluationGrid::on_interval(4.0, 50), 0.1, PowerParam(1.3));
  const auto t = cli::read_table(path("e.csv"));
  ASSERT_EQ(t.rows.size(), 50u);
  for (std::size_t l = 0; l < 50; ++l) {
    EXPECT_EQ(t.rows[l][0], est.grid.points()[l]);
    EXPECT_EQ(t.rows[l][1], est.values[l]);
  }
}

TEST_F(Cli, EstimateSelectsWhenSmoothingOmitted)
{
  ASSERT_EQ(run({ "sample", "--mu", "2", "--power", "1.1", "--p0", "0.3", "--n", "60", "--seed", "3", "--out", path("s.csv") }), 0);
  ASSERT_EQ(run({ "estimate", "--data", path("s.csv"), "--out", path("e.csv") }), 0);
  const auto header = json(path("e.csv.json"));
  const auto sel = select_for(SemicontinuousSample(cli::read_values(path("s.csv"))), TuningOptions{});
  EXPECT_EQ(header["h"].get<double>(), sel.h_star);
  EXPECT_EQ(header["p"].get<double>(), sel.p_star);
}

TEST_F(Cli, InputErrorsNameTheLine)
{
  write("bad.csv", "x\n1.0\nabc\n");
  EXPECT_EQ(run({ "estimate", "--data", path("bad.csv"), "--h", "0.1", "--power", "1.5", "--out", path("e.csv") }), 2);
  EXPECT_NE(err_.str().find(":3:"), std::string::npos);
  write("neg.csv", "1.0\n-4\n");
  EXPECT_EQ(run({ "select", "--data", path("neg.csv"), "--out", path("q.json") }), 2);
  EXPECT_NE(err_.str().find(":2:"), std::string::npos);
  write("inf.csv", "inf\n");
  EXPECT_EQ(run({ "select", "--data", path("inf.csv"), "--out", path("q.json") }), 2);
  EXPECT_EQ(run({ "select", "--data", path("missing.csv"), "--out", path("q.json") }), 2);
}

TEST_F(Cli, SelectSingleCellAndTableMinimum)
{
  write("d.csv", "0\n0.3\n0.9\n1.4\n2.2\n0\n3.1\n");
  ASSERT_EQ(run({ "select", "--data", path("d.csv"), "--np", "1", "--nh", "1", "--pmin", "1.4", "--pmax", "1.4", "--hmin",
                  "0.3", "--hmax", "0.3", "--out", path("one.json") }),
            0);
  auto j = json(path("one.json"));
  EXPECT_EQ(j["p_star"], 1.4);
  EXPECT_EQ(j["h_star"], 0.3);

  ASSERT_EQ(run({ "select", "--data", path("d.csv"), "--out", path("full.json") }), 0);
  j = json(path("full.json"));
  EXPECT_EQ(j["p_grid"].size(), 18u);
  EXPECT_EQ(j["h_grid"].size(), 20u);
  double best = INFINITY;
  for (const auto& row : j["cv_table"])
    for (const auto& v : row)
      if (!v.is_null())
        best = std::min(best, v.get<double>());
  std::size_t k = 0, h = 0;
  for (std::size_t a = 0; a < 18; ++a)
    if (j["p_grid"][a] == j["p_star"])
      k = a;
  for (std::size_t b = 0; b < 20; ++b)
    if (j["h_grid"][b] == j["h_star"])
      h = b;
  EXPECT_EQ(j["cv_table"][k][h].get<double>(), best);

  write("z.csv", "0\n0\n");
  EXPECT_EQ(run({ "select", "--data", path("z.csv"), "--out", path("z.json") }), 3);
}

TEST_F(Cli, SimulateMatchesLibraryAndThreadCount)
{
  const std::vector<std::string> base{ "simulate", "--scenario", "M2", "--n", "40", "--p0", "0.3", "--reps", "3",
                                       "--seed", "11", "--np", "3", "--nh", "4" };
  auto a = base;
  a.insert(a.end(), { "--threads", "1", "--out", path("a.csv") });
  auto b = base;
  b.insert(b.end(), { "--threads", "3", "--out", path("b.csv") });
  ASSERT_EQ(run(a), 0);
  ASSERT_EQ(run(b), 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));

  ScenarioConfig c;
  c.id = ScenarioId::M2;
  c.n = 40;
  c.p0 = 0.3;
  c.seed = 11;
  c.replicates = 3;
  TuningOptions tuning;
  tuning.n_p = 3;
  tuning.n_h = 4;
  const auto summary = run_monte_carlo(c, tuning);
  const auto j = json(path("a.csv.json"));
  EXPECT_EQ(j["mean_ise"].get<double>(), summary.mean_ise);
  EXPECT_EQ(j["sd_iae"].get<double>(), summary.sd_iae);
  EXPECT_EQ(j["manifest"]["params"]["threads"], "1");

  EXPECT_EQ(run({ "simulate", "--scenario", "M9", "--out", path("c.csv") }), 2);
}

TEST_F(Cli, GofPoliciesRunWithinBudget)
{
  ASSERT_EQ(run({ "sample", "--mu", "2", "--power", "1.1", "--p0", "0.3", "--n", "50", "--seed", "5", "--out", path("s.csv") }), 0);
  for (const std::string policy : { "fixed", "reselect" }) {
    const auto t0 = std::chrono::steady_clock::now();
    ASSERT_EQ(run({ "gof", "--data", path("s.csv"), "--mu", "2", "--phi", "1.7221374439769035", "--power", "1.1", "--B", "50",
                    "--policy", policy, "--seed", "3", "--threads", "1", "--out", path(policy + ".json") }),
              0);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_LT(secs, 60.0) << policy;
    const auto j = json(path(policy + ".json"));
    EXPECT_EQ(j["calibration"].size(), 50u);
    EXPECT_EQ(j["reject"].get<bool>(), j["statistic"].get<double>() > j["critical_value"].get<double>());
    std::vector<double> cal = j["calibration"].get<std::vector<double>>();
    std::sort(cal.begin(), cal.end());
    EXPECT_EQ(j["critical_value"].get<double>(), cal[47]); // ceil(0.95 * 50) = 48th
  }
}

TEST_F(Cli, GofDefaults)
{
  write("d.csv", "0\n1\n");
  EXPECT_EQ(run({ "gof", "--data", path("d.csv"), "--mu", "2", "--phi", "1.7", "--power", "1.1", "--policy", "maybe",
                  "--out", path("g.json") }),
            2);
  EXPECT_EQ(run({ "gof", "--data", path("d.csv"), "--mu", "2", "--phi", "1.7", "--power", "1.1", "--level", "0",
                  "--out", path("g.json") }),
            2);
  std::ostringstream help;
  std::ostringstream err;
  cli::run({ "gof", "--help" }, help, err);
  EXPECT_NE(help.str().find("500"), std::string::npos);
  EXPECT_NE(help.str().find("0.05"), std::string::npos);
}
