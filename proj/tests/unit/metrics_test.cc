#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "venn/errors.h"
#include "venn/metrics.h"

namespace venn {
namespace {

JobMetrics Finished(std::string id, double arrival, double end,
                    long long demand = 10) {
  JobMetrics j;
  j.job_id = std::move(id);
  j.arrival_s = arrival;
  j.end_s = end;
  j.completed = true;
  j.total_demand = demand;
  return j;
}

MetricsReport Report(std::string scheduler, std::vector<JobMetrics> jobs) {
  MetricsReport r;
  r.run_id = scheduler;
  r.scheduler = std::move(scheduler);
  r.jobs = std::move(jobs);
  return r;
}

TEST(RoundRecord, DelaysAreZeroUntilReached) {
  RoundRecord r;
  r.issue_s = 10.0;
  EXPECT_EQ(r.scheduling_delay(), 0.0);
  r.full_assign_s = 25.0;
  EXPECT_EQ(r.scheduling_delay(), 15.0);
  EXPECT_EQ(r.collection_time(), 0.0);
  r.end_s = 85.0;
  EXPECT_EQ(r.collection_time(), 60.0);
}

TEST(MetricsReport, AverageJctAndFairness) {
  MetricsReport r = Report("venn", {Finished("a", 0, 100), Finished("b", 50, 350)});
  r.jobs[0].fair_share_s = 150.0;
  r.jobs[1].fair_share_s = 150.0;
  EXPECT_DOUBLE_EQ(r.avg_jct(), 200.0);
  EXPECT_EQ(r.completed_jobs(), 2u);
  EXPECT_DOUBLE_EQ(r.fairness_ratio(), 0.5);
  r.jobs[0].completed = false;
  EXPECT_DOUBLE_EQ(r.fairness_ratio(), 0.0);
  EXPECT_EQ(Report("x", {}).avg_jct(), 0.0);
}

TEST(Speedup, RatioOfAverageJcts) {
  const MetricsReport base = Report("random", {Finished("a", 0, 300)});
  const MetricsReport fast = Report("venn", {Finished("a", 0, 100)});
  EXPECT_DOUBLE_EQ(Speedup(base, fast), 3.0);
  EXPECT_DOUBLE_EQ(Speedup(base, base), 1.0);
}

TEST(CheckComparable, RejectsDifferentJobs) {
  const MetricsReport a = Report("a", {Finished("x", 0, 10)});
  EXPECT_NO_THROW(CheckComparable(a, Report("b", {Finished("x", 0, 99)})));
  EXPECT_THROW(CheckComparable(a, Report("b", {})), MismatchedRunsError);
  EXPECT_THROW(CheckComparable(a, Report("b", {Finished("y", 0, 10)})),
               MismatchedRunsError);
  EXPECT_THROW(CheckComparable(a, Report("b", {Finished("x", 1, 10)})),
               MismatchedRunsError);
}

TEST(DemandQuartiles, BucketsByRank) {
  std::vector<JobMetrics> jobs;
  for (int i = 0; i < 8; ++i) {
    jobs.push_back(Finished(std::to_string(i), 0, 1, 80 - 10 * i));
  }
  EXPECT_EQ(DemandQuartiles(Report("x", jobs)),
            (std::vector<int>{3, 3, 2, 2, 1, 1, 0, 0}));
}

TEST(BreakdownSpeedups, PerQuartileAndPerSpec) {
  std::vector<JobMetrics> base_jobs;
  std::vector<JobMetrics> fast_jobs;
  for (int i = 0; i < 4; ++i) {
    base_jobs.push_back(Finished(std::to_string(i), 0, 100, i + 1));
    fast_jobs.push_back(Finished(std::to_string(i), 0, 100.0 / (i + 1), i + 1));
  }
  const Breakdown b =
      BreakdownSpeedups(Report("random", base_jobs), Report("venn", fast_jobs));
  for (int q = 0; q < 4; ++q) EXPECT_DOUBLE_EQ(b.by_demand_quartile[q], q + 1);
  ASSERT_EQ(b.by_eligibility.size(), 1u);
}

TEST(Aggregate, SpeedupAgainstBaselineOfSameScenarioAndSeed) {
  std::vector<LabeledReport> runs = {
      {"Even", 1, 0.0, Report("random", {Finished("a", 0, 200)})},
      {"Even", 1, 0.0, Report("venn", {Finished("a", 0, 100)})},
      {"Even", 2, 0.0, Report("random", {Finished("a", 0, 300)})},
      {"Even", 2, 0.0, Report("venn", {Finished("a", 0, 100)})},
  };
  const auto rows = Aggregate(runs, "random");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_DOUBLE_EQ(rows[1].speedup, 2.0);
  EXPECT_DOUBLE_EQ(rows[3].speedup, 3.0);
  EXPECT_DOUBLE_EQ(rows[0].speedup, 1.0);

  const auto summary = Summarize(rows);
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_EQ(summary[1].scheduler, "venn");
  EXPECT_DOUBLE_EQ(summary[1].speedup, 2.5);

  runs.erase(runs.begin() + 2);
  EXPECT_THROW(Aggregate(runs, "random"), MismatchedRunsError);
}

TEST(WriteReportCsv, HeaderAndOneRowPerJob) {
  const MetricsReport r =
      Report("venn", {Finished("a", 0, 100), Finished("b", 5, 20)});
  std::ostringstream out;
  WriteReportCsv(out, r);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line,
            "run_id,scheduler,job_id,arrival_s,jct_s,rounds,aborts,"
            "avg_sched_delay_s,avg_collect_s");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2);
}

TEST(WriteComparisonCsv, SeedColumnIsOptional) {
  ComparisonRow row;
  row.scheduler = "venn";
  row.scenario = "Even";
  std::ostringstream with_seed;
  std::ostringstream without;
  WriteComparisonCsv(with_seed, {&row, 1}, true);
  WriteComparisonCsv(without, {&row, 1}, false);
  EXPECT_NE(with_seed.str().find("scenario,seed,epsilon"), std::string::npos);
  EXPECT_NE(without.str().find("scenario,epsilon"), std::string::npos);
}

}  // namespace
}  // namespace venn
