#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include <sys/wait.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CliResult run(const std::string& args, const std::string& env = "") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto out = dir / ("degldp_cli_out_" + std::to_string(::getpid()));
  const auto err = dir / ("degldp_cli_err_" + std::to_string(::getpid()));
  const std::string cmd = env + " " + DEGLDP_CLI_PATH + " " + args + " >" +
                          out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  std::filesystem::remove(out);
  std::filesystem::remove(err);
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(CliTest, SolveJZeroStatisticRecoversBeta) {
  const CliResult r = run("solve-j --statistic zero --beta 2");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["j_value"].get<double>(), 0.0, 1e-10);
  ASSERT_EQ(j["minimizers"].size(), 1U);
  EXPECT_NEAR(j["minimizers"][0]["theta"].get<double>(), 2.0, 1e-8);
  EXPECT_FALSE(j["degenerate"].get<bool>());
}

TEST(CliTest, SolveJDegenerateStatisticExitsOne) {
  const CliResult r = run("solve-j --statistic kstar --gamma 1 --beta 1");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(nlohmann::json::parse(r.out)["degenerate"].get<bool>());
  EXPECT_NE(r.err.find("DegenerateStatistic"), std::string::npos);
}

TEST(CliTest, PenaltyCurveHasOneInteriorLocalMinimum) {
  const CliResult r = run("penalty-curve --beta 1.2 --e-gamma 0.5 --theta-max 8");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2049U);
  EXPECT_EQ(rows.front(), "theta,H");
  std::vector<double> h;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    h.push_back(std::stod(rows[k].substr(rows[k].find(',') + 1)));
  }
  int minima = 0;
  for (std::size_t k = 1; k + 1 < h.size(); ++k) {
    if (h[k] < h[k - 1] && h[k] < h[k + 1]) ++minima;
  }
  EXPECT_EQ(minima, 1);
}

TEST(CliTest, GraphicalSortsInput) {
  CliResult r = run("graphical --sequence 3,3,1,1");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "not graphical\n");
  r = run("graphical --sequence 1,2,2,1");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.out, "graphical\n");
  r = run("graphical --sequence 5,1");
  EXPECT_EQ(r.out, "not graphical\n");
}

TEST(CliTest, ComputationErrorsExitOneWithName) {
  CliResult r = run("enumerate --n 8");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("TooLarge"), std::string::npos);
  r = run("graphical --target 0.05,0.95,0 --n 10");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("NTooSmall"), std::string::npos);
}

TEST(CliTest, FlagErrorsExitTwoWithUsage) {
  for (const char* args :
       {"", "nonsense", "solve-j", "solve-j --beta -1",
        "solve-j --beta 1 --statistic kstar", "penalty-curve --beta 1",
        "rate --beta 1 --poisson 1 --weights 1", "simulate --chains 0"}) {
    const CliResult r = run(args);
    EXPECT_EQ(r.exit_code, 2) << args;
    EXPECT_NE(r.err.find("Usage"), std::string::npos) << args;
  }
}

TEST(CliTest, EnumerateCsvSumsToOne) {
  const CliResult r = run("enumerate --n 4 --beta 1.5");
  ASSERT_EQ(r.exit_code, 0);
  const auto rows = lines(r.out);
  EXPECT_EQ(rows.front(), "h_vector,count,probability");
  double total = 0.0;
  long long graphs = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto a = rows[k].find(',');
    const auto b = rows[k].rfind(',');
    graphs += std::stoll(rows[k].substr(a + 1, b - a - 1));
    total += std::stod(rows[k].substr(b + 1));
  }
  EXPECT_EQ(graphs, 64);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(CliTest, PenaltyPhaseSinglePoint) {
  const CliResult r = run("penalty-phase --beta 5.89 --e-gamma 0.05");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["roots"].size(), 3U);
  EXPECT_EQ(j["local_minima"].size(), 2U);
}

TEST(CliTest, SimulateIsDeterministicAndHonoursConfig) {
  const auto cfg = std::filesystem::temp_directory_path() /
                   ("degldp_cli_cfg_" + std::to_string(::getpid()));
  std::ofstream(cfg) << "# defaults\nn = 40\nsweeps=6\nthin=2\nburn-in=4\n"
                        "statistic=penalty\ne-gamma=0.5\n";
  const std::string base = "simulate --config " + cfg.string();
  const CliResult a = run(base + " --seed 9");
  const CliResult b = run(base, "DEGLDP_SEED=9");
  const CliResult c = run(base + " --seed 10");
  const CliResult wide = run(base + " --seed 9 --n 60");
  std::filesystem::remove(cfg);
  ASSERT_EQ(a.exit_code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_GE(j["acceptance_rate"].get<double>(), 0.0);
  EXPECT_LE(j["acceptance_rate"].get<double>(), 1.0);
  EXPECT_TRUE(j["distance_to_prediction"].is_number());
  // Flags override the file: more vertices, more edges on average.
  EXPECT_GT(nlohmann::json::parse(wide.out)["mean_edges"].get<double>(),
            j["mean_edges"].get<double>());
}

TEST(CliTest, UnknownConfigKeyIsAFlagError) {
  const auto cfg = std::filesystem::temp_directory_path() /
                   ("degldp_cli_bad_" + std::to_string(::getpid()));
  std::ofstream(cfg) << "bogus=1\n";
  const CliResult r = run("simulate --config " + cfg.string());
  std::filesystem::remove(cfg);
  EXPECT_EQ(r.exit_code, 2);
}

TEST(CliTest, RateOfPoissonIsZero) {
  const CliResult r = run("rate --beta 2 --poisson 2");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out)["rate"].get<double>(), 0.0, 1e-8);
}

TEST(CliTest, VerifySubsetRuns) {
  const CliResult r = run("verify --quick --only 1,2,5");
  EXPECT_EQ(r.exit_code, 0) << r.out;
  EXPECT_EQ(lines(r.out).size(), 3U);
  EXPECT_EQ(r.out.rfind("PASS 01", 0), 0U);
}

}  // namespace
