#include "venn/baselines.h"

#include <algorithm>
#include <string>

#include "venn/eligibility.h"
#include "venn/errors.h"

namespace venn {
namespace {

// `before(a, b)` orders candidates by the policy key only; job id breaks ties.
template <typename Before>
std::optional<JobIndex> AssignBest(const DeviceProfile& device, JobTable& jobs,
                                   Before before) {
  std::optional<JobIndex> best;
  for (JobIndex i = 0; i < jobs.size(); ++i) {
    const ActiveJob& job = jobs[i];
    if (!job.has_outstanding_request() || !Satisfies(device, job.spec.spec)) {
      continue;
    }
    if (!best) {
      best = i;
      continue;
    }
    const int cmp = before(i, *best);
    if (cmp < 0 ||
        (cmp == 0 && job.spec.job_id < jobs[*best].spec.job_id)) {
      best = i;
    }
  }
  if (best) jobs[*best].request.ClaimSlot();
  return best;
}

template <typename T>
int Compare(T a, T b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

}  // namespace

std::optional<JobIndex> FifoAssign(const DeviceProfile& device,
                                   JobTable& jobs) {
  return AssignBest(device, jobs, [&](JobIndex a, JobIndex b) {
    return Compare(jobs[a].request.issue_time, jobs[b].request.issue_time);
  });
}

std::optional<JobIndex> SrsfAssign(const DeviceProfile& device,
                                   JobTable& jobs) {
  return AssignBest(device, jobs, [&](JobIndex a, JobIndex b) {
    return Compare(jobs[a].request.remaining_demand,
                   jobs[b].request.remaining_demand);
  });
}

std::optional<JobIndex> RandomAssign(
    const DeviceProfile& device, JobTable& jobs,
    const std::unordered_map<JobIndex, double>& priority) {
  auto key = [&](JobIndex i) {
    const auto it = priority.find(i);
    return it == priority.end() ? 1.0 : it->second;
  };
  return AssignBest(device, jobs, [&](JobIndex a, JobIndex b) {
    return Compare(key(a), key(b));
  });
}

std::optional<JobIndex> FifoScheduler::AssignDevice(
    const DeviceProfile& device, AtomId /*atom*/, JobTable& jobs,
    const SchedulingContext& /*ctx*/) {
  return FifoAssign(device, jobs);
}

std::optional<JobIndex> SrsfScheduler::AssignDevice(
    const DeviceProfile& device, AtomId /*atom*/, JobTable& jobs,
    const SchedulingContext& /*ctx*/) {
  return SrsfAssign(device, jobs);
}

void RandomScheduler::OnRequestIssued(JobIndex job, JobTable& /*jobs*/,
                                      const SchedulingContext& /*ctx*/) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  priority_[job] = u(rng_);
}

std::optional<JobIndex> RandomScheduler::AssignDevice(
    const DeviceProfile& device, AtomId /*atom*/, JobTable& jobs,
    const SchedulingContext& /*ctx*/) {
  return RandomAssign(device, jobs, priority_);
}

bool IsSchedulerName(std::string_view name) {
  return std::find(std::begin(kSchedulerNames), std::end(kSchedulerNames),
                   name) != std::end(kSchedulerNames);
}

std::unique_ptr<Scheduler> MakeScheduler(std::string_view name,
                                         const IrsOptions& irs,
                                         std::uint64_t seed) {
  if (name == "venn") {
    return std::make_unique<IrsScheduler>(irs,
                                          MakeStream(seed, streams::kMatcher));
  }
  if (name == "fifo") return std::make_unique<FifoScheduler>();
  if (name == "srsf") return std::make_unique<SrsfScheduler>();
  if (name == "random") {
    return std::make_unique<RandomScheduler>(
        MakeStream(seed, streams::kRandomBaseline));
  }
  throw ConfigError("unknown scheduler '" + std::string(name) + "'");
}

}  // namespace venn
