#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.h"
#include "venn/errors.h"

namespace venn::cli {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("venn-cli-") + info->name() + "-" +
            std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int Invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "venn");
    std::vector<const char*> argv;
    for (const std::string& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return Main(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  // A configuration small enough to simulate in well under a second.
  std::string WriteSmallConfig() {
    RunConfig c;
    c.n_jobs = 4;
    c.mean_interarrival_s = 600.0;
    c.synth_devices = 400;
    c.synth_horizon_s = kSecondsPerDay;
    c.demand_min = 5;
    c.demand_max = 10;
    c.rounds_min = 1;
    c.rounds_max = 2;
    c.catalog_templates = 20;
    c.out_dir = (dir_ / "out").string();
    const std::string path = (dir_ / "run.conf").string();
    std::ofstream(path) << FormatRunConfig(c);
    return path;
  }

  std::string Slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(CliTest, MissingConfigFileIsConfigError) {
  EXPECT_EQ(Invoke({"simulate", "--config", (dir_ / "nope.conf").string()}),
            kExitConfig);
  EXPECT_NE(err_.str().find("config error"), std::string::npos);
}

TEST_F(CliTest, UnknownSubcommandOrFlagIsConfigError) {
  EXPECT_EQ(Invoke({"frobnicate"}), kExitConfig);
  EXPECT_EQ(Invoke({"simulate", "--bogus"}), kExitConfig);
  EXPECT_EQ(Invoke({}), kExitConfig);
}

TEST_F(CliTest, SimulateWritesReportAndSummary) {
  const std::string conf = WriteSmallConfig();
  ASSERT_EQ(Invoke({"simulate", "--config", conf, "--seed", "7"}), kExitOk)
      << err_.str();
  const fs::path out = dir_ / "out";
  ASSERT_TRUE(fs::exists(out / "report.csv"));
  ASSERT_TRUE(fs::exists(out / "summary.json"));
  const auto summary = nlohmann::json::parse(Slurp(out / "summary.json"));
  EXPECT_EQ(summary["config"]["seed"], "7");
  EXPECT_EQ(summary["scheduler"], "venn");
  EXPECT_NE(out_.str().find("avg_jct_s"), std::string::npos);

  std::istringstream csv(Slurp(out / "report.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST_F(CliTest, MissingTraceFileIsConfigError) {
  RunConfig c;
  c.trace_path = (dir_ / "missing.jsonl").string();
  const std::string path = (dir_ / "trace.conf").string();
  std::ofstream(path) << FormatRunConfig(c);
  EXPECT_EQ(Invoke({"simulate", "--config", path}), kExitConfig);
}

TEST_F(CliTest, MalformedTraceIsTraceError) {
  const std::string trace = (dir_ / "bad.jsonl").string();
  std::ofstream(trace) << "{broken\n";
  RunConfig c;
  c.trace_path = trace;
  c.out_dir = (dir_ / "out").string();
  const std::string path = (dir_ / "trace.conf").string();
  std::ofstream(path) << FormatRunConfig(c);
  EXPECT_EQ(Invoke({"simulate", "--config", path}), kExitTrace);
  EXPECT_NE(err_.str().find("line 1"), std::string::npos);
}

TEST_F(CliTest, CompareRandomAgainstItselfIsUnitSpeedup) {
  const std::string conf = WriteSmallConfig();
  ASSERT_EQ(Invoke({"compare", "--config", conf, "--schedulers", "random",
                    "--seeds", "1,2"}),
            kExitOk)
      << err_.str();
  EXPECT_NE(out_.str().find("random even speedup 1"), std::string::npos)
      << out_.str();
  EXPECT_TRUE(fs::exists(dir_ / "out" / "comparison.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "summary.csv"));
  EXPECT_EQ(Invoke({"compare", "--config", conf, "--schedulers", "lottery"}),
            kExitConfig);
}

TEST_F(CliTest, OracleCheckOnTrivialInstancesHasNoGap) {
  ASSERT_EQ(Invoke({"oracle-check", "--instances", "20", "--max-devices", "2",
                    "--max-jobs", "1", "--out", dir_.string()}),
            kExitOk)
      << err_.str();
  std::istringstream summary(Slurp(dir_ / "oracle_summary.csv"));
  std::string header;
  std::string row;
  std::getline(summary, header);
  std::getline(summary, row);
  EXPECT_EQ(row, "20,0,0,0,1,1,0");
  EXPECT_EQ(Invoke({"oracle-check", "--max-devices", "99"}), kExitConfig);
}

TEST_F(CliTest, GenWorkloadWritesOneLinePerJob) {
  const std::string out = (dir_ / "jobs" / "w.jsonl").string();
  ASSERT_EQ(Invoke({"gen-workload", "--scenario", "high", "--n-jobs", "50",
                    "--out", out}),
            kExitOk)
      << err_.str();
  std::istringstream body(Slurp(out));
  std::string line;
  int n = 0;
  while (std::getline(body, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_TRUE(j.contains("arrival_s"));
    ++n;
  }
  EXPECT_EQ(n, 50);
  EXPECT_EQ(Invoke({"gen-workload", "--scenario", "medium"}), kExitConfig);
}

TEST(RunConfigText, FormatParseRoundTrip) {
  RunConfig c;
  c.scheduler = "srsf";
  c.scenario = "low";
  c.seed = 99;
  c.epsilon = 0.25;
  c.matching = false;
  c.tier_choice = "rotate";
  c.synth_diurnal_amplitude = 0.125;
  std::istringstream in(FormatRunConfig(c));
  EXPECT_EQ(ParseRunConfig(in), c);
}

TEST(RunConfigText, CommentsBlankLinesAndErrors) {
  std::istringstream ok("# header\n\nscheduler = fifo  # trailing\n");
  EXPECT_EQ(ParseRunConfig(ok).scheduler, "fifo");

  auto fails_at = [](const std::string& text, const std::string& where) {
    std::istringstream in(text);
    try {
      ParseRunConfig(in);
      ADD_FAILURE() << "expected ConfigError for " << text;
    } catch (const ConfigError& e) {
      EXPECT_NE(std::string(e.what()).find(where), std::string::npos)
          << e.what();
    }
  };
  fails_at("seed = 1\nnot a pair\n", "line 2");
  fails_at("colour = red\n", "unknown key");
  fails_at("seed = 1\nseed = 2\n", "duplicate key");
  fails_at("n_jobs = many\n", "line 1");
  fails_at("trace_path = t.jsonl\nsynth_devices = 5\n", "mutually exclusive");
}

TEST(RunConfigText, ValidationRejectsUnknownNames) {
  RunConfig c;
  EXPECT_NO_THROW(ValidateRunConfig(c));
  c.scheduler = "lottery";
  EXPECT_THROW(ValidateRunConfig(c), ConfigError);
  c = RunConfig{};
  c.scenario = "medium";
  EXPECT_THROW(ValidateRunConfig(c), ConfigError);
  c = RunConfig{};
  c.demand_max = 1;
  EXPECT_THROW(ValidateRunConfig(c), ConfigError);
}

TEST(ToSimConfig, CarriesSchedulerAndResponseSettings) {
  RunConfig c;
  c.scheduler = "fifo";
  c.epsilon = 0.5;
  c.tiers = 3;
  c.response_sigma = 0.0;
  c.scheduler_seed = 4;
  const SimConfig s = ToSimConfig(c);
  EXPECT_EQ(s.scheduler, "fifo");
  EXPECT_EQ(s.irs.epsilon, 0.5);
  EXPECT_EQ(s.irs.num_tiers, 3);
  EXPECT_EQ(s.response.sigma, 0.0);
  EXPECT_EQ(s.scheduler_seed, 4u);
}

TEST(WriteFileAtomic, ReplacesContents) {
  const fs::path p = fs::temp_directory_path() /
                     ("venn-atomic-" + std::to_string(::getpid()));
  WriteFileAtomic(p.string(), "first\n");
  WriteFileAtomic(p.string(), "second\n");
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "second");
  fs::remove(p);
}

}  // namespace
}  // namespace venn::cli
