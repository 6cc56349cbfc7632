// Interface shared by the IRS scheduler and the baselines. The simulation
// loop owns the job table and calls into a scheduler single-threaded.

#ifndef VENN_SCHEDULER_H_
#define VENN_SCHEDULER_H_

#include <memory>
#include <optional>
#include <string_view>

#include "venn/eligibility.h"
#include "venn/types.h"
#include "venn/workload.h"

namespace venn {

struct SchedulingContext {
  double now = 0.0;
  const SpecRegistry* registry = nullptr;
  const AtomTable* atoms = nullptr;
  // Per-atom eligible check-in rates; may be all zero early in a run.
  const SupplyEstimate* supply = nullptr;
};

class Scheduler {
 public:
  virtual ~Scheduler() = default;

  virtual std::string_view name() const = 0;

  // A job issued (or reissued) a round request.
  virtual void OnRequestIssued(JobIndex /*job*/, JobTable& /*jobs*/,
                               const SchedulingContext& /*ctx*/) {}
  // A request's demand reached zero, or a job left the queue.
  virtual void OnRequestFilled(JobIndex /*job*/, JobTable& /*jobs*/,
                               const SchedulingContext& /*ctx*/) {}
  // The atom table was rebuilt; any cached plan is stale.
  virtual void OnAtomsChanged(JobTable& /*jobs*/,
                              const SchedulingContext& /*ctx*/) {}

  // Offers a checked-in device. On success the chosen job's request has
  // already had one slot claimed.
  virtual std::optional<JobIndex> AssignDevice(const DeviceProfile& device,
                                               AtomId atom, JobTable& jobs,
                                               const SchedulingContext& ctx) = 0;

  // Profiling hooks.
  virtual void OnResponse(JobIndex /*job*/, const DeviceProfile& /*device*/,
                          double /*seconds*/) {}
  virtual void OnParticipant(JobIndex /*job*/,
                             const DeviceProfile& /*device*/) {}
  virtual void OnRoundFinished(JobIndex /*job*/, bool /*succeeded*/) {}
};

}  // namespace venn

#endif  // VENN_SCHEDULER_H_
