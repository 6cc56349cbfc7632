// Discrete-event simulation of a shared device pool serving multi-round
// jobs under a pluggable scheduler.
//
// Each device checks in once at the start of every availability interval.
// A round request collects devices until its demand is met, then waits up to
// the job's deadline for ceil(threshold * demand) responses; a round that
// misses the deadline is reissued. A device serves at most one job per day.

#ifndef VENN_SIM_H_
#define VENN_SIM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "venn/irs.h"
#include "venn/metrics.h"
#include "venn/oracle.h"
#include "venn/response_model.h"
#include "venn/scheduler.h"
#include "venn/workload.h"

namespace venn {

enum class EventKind {
  kDeviceCheckIn,
  kJobArrival,
  kRequestIssued,
  kResponseArrive,
  kDeadlineExpire,
};

struct Event {
  double time = 0.0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kDeviceCheckIn;
  // Device index for check-ins and responses.
  std::size_t device = 0;
  JobIndex job = 0;
  int round = 0;
  int attempt = 0;
  // Response time, for kResponseArrive.
  double seconds = 0.0;
};

struct SimConfig {
  std::string scheduler = "venn";
  IrsOptions irs;
  ResponseModel response;
  // 0 runs to the end of the trace.
  double horizon_s = 0.0;
  double supply_window_s = kSecondsPerDay;
  // Minimum gap between two assignments of one device.
  double participation_cooldown_s = kSecondsPerDay;
  // Seeds the response stream.
  std::uint64_t seed = 1;
  // Seeds the matcher and random-baseline streams.
  std::uint64_t scheduler_seed = 1;
  std::string run_id = "run";
  bool record_assignments = false;
};

// Throws ConfigError.
void ValidateSimConfig(const SimConfig& config);

struct AssignmentRecord {
  double time = 0.0;
  // Index into the trace's devices.
  std::size_t device = 0;
  // Index into the jobs passed to Run.
  std::size_t job = 0;
  int round = 0;
  int attempt = 0;
};

struct SimResult {
  MetricsReport report;
  std::vector<AssignmentRecord> assignments;
};

// Runs `jobs` (arrival times taken from the specs) against the trace.
// Deterministic in (config, trace, jobs). Integrity violations throw
// IntegrityError.
SimResult Run(const SimConfig& config, const DeviceTrace& trace,
              std::span<const JobSpec> jobs);

// Contention-free JCT used for fair-share targets: rounds * (demand / rate +
// expected collection time at the eligible devices' mean speed factor).
double StandaloneJct(const JobSpec& job, double eligible_rate,
                     double mean_speed_factor, const ResponseModel& model);

// Scheduling-only replay of a single-round instance: all jobs request at
// time 0 and device i is offered at t[i]. Returns T_j per job, +infinity for
// jobs left unfilled.
struct ReplayResult {
  std::vector<double> completion;
  double average = 0.0;
};

ReplayResult ReplayInstance(const ExactInstance& instance,
                            Scheduler& scheduler);

}  // namespace venn

#endif  // VENN_SIM_H_
