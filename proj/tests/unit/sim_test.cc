#include <cmath>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "venn/baselines.h"
#include "venn/errors.h"
#include "venn/sim.h"

namespace venn {
namespace {

using testing::Device;
using testing::Job;

// `n` identical devices, each available over [start, start + 3600).
DeviceTrace Pool(int n, double start = 100.0) {
  DeviceTrace t;
  for (int i = 0; i < n; ++i) {
    DeviceProfile d = Device("d" + std::to_string(i), 1, 1);
    d.availability = {{start, start + 3600.0}};
    t.devices.push_back(std::move(d));
  }
  t.horizon_s = start + 3600.0;
  return t;
}

SimConfig Deterministic(std::string scheduler = "venn") {
  SimConfig c;
  c.scheduler = std::move(scheduler);
  c.response.sigma = 0.0;
  c.response.failure_probability = 0.0;
  c.irs.matching = false;
  c.record_assignments = true;
  return c;
}

TEST(Run, SingleJobClosedForm) {
  const std::vector<JobSpec> jobs = {Job("a", 10)};
  const SimResult r = venn::Run(Deterministic(), Pool(10), jobs);
  ASSERT_EQ(r.report.jobs.size(), 1u);
  const JobMetrics& m = r.report.jobs[0];
  EXPECT_TRUE(m.completed);
  ASSERT_EQ(m.rounds.size(), 1u);
  EXPECT_DOUBLE_EQ(m.rounds[0].scheduling_delay(), 100.0);
  EXPECT_DOUBLE_EQ(m.rounds[0].collection_time(), 60.0);
  EXPECT_DOUBLE_EQ(m.jct(), 160.0);
  EXPECT_EQ(r.assignments.size(), 10u);
  EXPECT_EQ(m.aborts, 0);
}

TEST(Run, AllFailuresAbortTheRound) {
  SimConfig c = Deterministic();
  c.response.failure_probability = 1.0;
  const std::vector<JobSpec> jobs = {Job("a", 5)};
  const SimResult r = venn::Run(c, Pool(5), jobs);
  const JobMetrics& m = r.report.jobs[0];
  EXPECT_FALSE(m.completed);
  EXPECT_GE(m.aborts, 1);
  EXPECT_FALSE(m.rounds[0].succeeded);
  EXPECT_EQ(r.report.counters.responses, 0u);
  EXPECT_EQ(r.report.counters.failures, 5u);
}

TEST(Run, ZeroJobsIsAnEmptyReport) {
  const SimResult r = venn::Run(Deterministic(), Pool(3), {});
  EXPECT_TRUE(r.report.jobs.empty());
  EXPECT_TRUE(r.assignments.empty());
  EXPECT_EQ(r.report.avg_jct(), 0.0);
}

TEST(Run, DeviceServesAtMostOneJobPerDay) {
  const std::vector<JobSpec> jobs = {Job("a", 3, {}, 4)};
  DeviceTrace t;
  for (int i = 0; i < 3; ++i) {
    DeviceProfile d = Device("d" + std::to_string(i), 1, 1);
    for (int day = 0; day < 5; ++day) {
      d.availability.push_back({day * kSecondsPerDay + 10.0 * i + 10.0,
                                day * kSecondsPerDay + 7200.0});
    }
    t.devices.push_back(std::move(d));
  }
  t.horizon_s = 5 * kSecondsPerDay;
  const SimResult r = venn::Run(Deterministic(), t, jobs);
  EXPECT_TRUE(r.report.jobs[0].completed);
  EXPECT_EQ(r.report.jobs[0].rounds_completed, 4);
  std::map<std::size_t, double> last;
  for (const AssignmentRecord& a : r.assignments) {
    if (last.contains(a.device)) {
      EXPECT_GE(a.time - last[a.device], kSecondsPerDay);
    }
    last[a.device] = a.time;
  }
}

TEST(Run, OnlyEligibleDevicesAreAssigned) {
  DeviceTrace t = Pool(6);
  for (int i = 0; i < 3; ++i) t.devices[i].memory_gb = 8.0;
  const std::vector<JobSpec> jobs = {Job("rich", 3, testing::Spec(0, 4)),
                                     Job("any", 3)};
  for (const char* s : {"venn", "fifo", "srsf", "random"}) {
    const SimResult r = venn::Run(Deterministic(s), t, jobs);
    for (const AssignmentRecord& a : r.assignments) {
      EXPECT_TRUE(Satisfies(t.devices[a.device], jobs[a.job].spec)) << s;
    }
  }
}

TEST(Run, DeterministicForFixedInputs) {
  SynthTraceParams p;
  p.n_devices = 400;
  p.horizon_s = 2 * kSecondsPerDay;
  const DeviceTrace trace = SynthDeviceTrace(p);
  const auto jobs = SampleWorkload({Scenario::kEven, 6, 600.0, 2},
                                   std::vector<JobSpec>{Job("t", 20, {}, 3)},
                                   StandardSpecs());
  SimConfig c;
  c.record_assignments = true;
  c.seed = 5;
  const SimResult a = venn::Run(c, trace, jobs);
  const SimResult b = venn::Run(c, trace, jobs);
  std::ostringstream ca;
  std::ostringstream cb;
  WriteReportCsv(ca, a.report);
  WriteReportCsv(cb, b.report);
  EXPECT_EQ(ca.str(), cb.str());
  ASSERT_EQ(a.assignments.size(), b.assignments.size());
  for (std::size_t i = 0; i < a.assignments.size(); ++i) {
    EXPECT_EQ(a.assignments[i].device, b.assignments[i].device);
    EXPECT_EQ(a.assignments[i].job, b.assignments[i].job);
  }
}

TEST(ValidateSimConfig, RejectsBadValues) {
  EXPECT_NO_THROW(ValidateSimConfig({}));
  auto bad = [](auto mutate) {
    SimConfig c;
    mutate(c);
    EXPECT_THROW(ValidateSimConfig(c), ConfigError);
  };
  bad([](SimConfig& c) { c.scheduler = "lottery"; });
  bad([](SimConfig& c) { c.irs.epsilon = -1.0; });
  bad([](SimConfig& c) { c.irs.num_tiers = 0; });
  bad([](SimConfig& c) { c.horizon_s = -5.0; });
  bad([](SimConfig& c) { c.supply_window_s = 0.0; });
  bad([](SimConfig& c) { c.participation_cooldown_s = -1.0; });
  bad([](SimConfig& c) { c.response.sigma = -0.1; });
  bad([](SimConfig& c) { c.response.failure_probability = 1.5; });
  bad([](SimConfig& c) { c.response.base_task_seconds = 0.0; });
}

TEST(SampleResponseTime, ZeroSigmaIsBaseTimesSpeed) {
  ResponseModel m;
  m.sigma = 0.0;
  m.failure_probability = 0.0;
  Rng rng = MakeStream(1, streams::kResponses);
  const auto t = SampleResponseTime(Device("d", 1, 1, {}, 1.5), m, rng);
  ASSERT_TRUE(t.has_value());
  EXPECT_DOUBLE_EQ(*t, 90.0);
  m.failure_probability = 1.0;
  EXPECT_FALSE(SampleResponseTime(Device("d", 1, 1), m, rng).has_value());
}

TEST(ResponseModel, QuantilesAndCollectionEstimate) {
  ResponseModel m;
  m.sigma = 0.0;
  EXPECT_DOUBLE_EQ(ResponseQuantile(m, 2.0, 0.95), 120.0);
  EXPECT_NEAR(StandardNormalQuantile(0.5), 0.0, 1e-9);
  EXPECT_NEAR(StandardNormalQuantile(0.975), 1.959964, 1e-5);
  EXPECT_DOUBLE_EQ(ExpectedCollectionSeconds(m, 0.8, 1.0), 60.0);
  m.sigma = 0.5;
  EXPECT_GT(ExpectedCollectionSeconds(m, 0.8, 1.0), 60.0);
}

TEST(StandaloneJct, RoundsTimesScheduleAndCollection) {
  ResponseModel m;
  m.sigma = 0.0;
  const JobSpec j = Job("a", 10, {}, 3);
  EXPECT_DOUBLE_EQ(StandaloneJct(j, 2.0, 1.0, m), 3 * (5.0 + 60.0));
  EXPECT_TRUE(std::isinf(StandaloneJct(j, 0.0, 1.0, m)));
}

TEST(ReplayInstance, ReproducesScheduleOfBaseline) {
  ExactInstance inst;
  inst.t = {1, 2, 3, 4, 5, 6};
  inst.e = {{1, 0}, {1, 1}, {1, 0}, {1, 1}, {1, 0}, {1, 0}};
  inst.d = {2, 2};
  // SRSF breaks the tie by job id, so J1 takes t = 1, 2 and J2 waits for
  // t = 4 and never gets a second eligible device.
  SrsfScheduler srsf;
  const ReplayResult r = ReplayInstance(inst, srsf);
  EXPECT_DOUBLE_EQ(r.completion[0], 2.0);
  EXPECT_TRUE(std::isinf(r.completion[1]));

  IrsOptions opts;
  opts.matching = false;
  IrsScheduler venn(opts, MakeStream(1, streams::kMatcher));
  const ReplayResult v = ReplayInstance(inst, venn);
  EXPECT_DOUBLE_EQ(v.average, 3.5);
}

}  // namespace
}  // namespace venn
