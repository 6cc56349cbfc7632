// Per-run job metrics and cross-run comparison.

#ifndef VENN_METRICS_H_
#define VENN_METRICS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "venn/types.h"

namespace venn {

// One attempt at one round. Aborted attempts are kept.
struct RoundRecord {
  int round_index = 0;
  int attempt = 0;
  double issue_s = 0.0;
  // Time the last slot was claimed; unset if the request never filled.
  std::optional<double> full_assign_s;
  // Success or abort time; unset if still open at the end of the run.
  std::optional<double> end_s;
  int responses = 0;
  bool succeeded = false;

  double scheduling_delay() const {
    return full_assign_s ? *full_assign_s - issue_s : 0.0;
  }
  double collection_time() const {
    return full_assign_s && end_s ? *end_s - *full_assign_s : 0.0;
  }
};

struct JobMetrics {
  std::string job_id;
  EligibilitySpec spec;
  double arrival_s = 0.0;
  // Completion time, or the end of the run for unfinished jobs.
  double end_s = 0.0;
  bool completed = false;
  int total_rounds = 0;
  int rounds_completed = 0;
  long long total_demand = 0;
  int aborts = 0;
  std::vector<RoundRecord> rounds;
  // Fair-share target M * sd for this run.
  double fair_share_s = 0.0;

  // Censored at the end of the run when the job did not complete.
  double jct() const { return end_s - arrival_s; }
  double avg_scheduling_delay() const;
  double avg_collection_time() const;
  bool meets_fair_share() const { return completed && jct() <= fair_share_s; }
};

struct SimCounters {
  std::uint64_t events = 0;
  std::uint64_t check_ins = 0;
  std::uint64_t blocked_check_ins = 0;
  std::uint64_t assignments = 0;
  std::uint64_t failures = 0;
  std::uint64_t responses = 0;
  std::uint64_t reschedules = 0;
};

struct MetricsReport {
  std::string run_id;
  std::string scheduler;
  std::uint64_t seed = 0;
  double end_s = 0.0;
  std::vector<JobMetrics> jobs;
  SimCounters counters;
  std::vector<std::string> warnings;

  double avg_jct() const;
  std::size_t completed_jobs() const;
  // Share of jobs whose JCT is within their fair-share target.
  double fairness_ratio() const;
};

// avg_jct(base) / avg_jct(x).
double Speedup(const MetricsReport& base, const MetricsReport& x);

// Throws MismatchedRunsError unless both reports ran the same jobs.
void CheckComparable(const MetricsReport& a, const MetricsReport& b);

// Total-demand quartile bucket (0..3) per job, by rank within the run, so
// the buckets hold the lowest 25%, the next 25%, and so on.
std::vector<int> DemandQuartiles(const MetricsReport& report);

// Speedups restricted to one subset of jobs.
struct Breakdown {
  std::array<double, 4> by_demand_quartile{};
  std::map<std::string, double> by_eligibility;
};

Breakdown BreakdownSpeedups(const MetricsReport& base, const MetricsReport& x);

struct LabeledReport {
  std::string scenario;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  MetricsReport report;
};

struct ComparisonRow {
  std::string scheduler;
  std::string scenario;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  double avg_jct_s = 0.0;
  double speedup = 1.0;
  double fairness_ratio = 0.0;
  Breakdown breakdown;
};

// One row per report, with speedups against the `baseline` scheduler's run
// of the same scenario and seed. Throws MismatchedRunsError when a
// baseline run is missing or ran different jobs.
std::vector<ComparisonRow> Aggregate(std::span<const LabeledReport> runs,
                                     const std::string& baseline);

// Mean over seeds: one row per (scheduler, scenario, epsilon).
std::vector<ComparisonRow> Summarize(std::span<const ComparisonRow> rows);

// run_id,scheduler,job_id,arrival_s,jct_s,rounds,aborts,avg_sched_delay_s,
// avg_collect_s
void WriteReportCsv(std::ostream& out, const MetricsReport& report);

void WriteComparisonCsv(std::ostream& out, std::span<const ComparisonRow> rows,
                        bool include_seed);

}  // namespace venn

#endif  // VENN_METRICS_H_
