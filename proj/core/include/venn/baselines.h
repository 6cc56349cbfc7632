// Comparison schedulers: FIFO, SRSF and request-level random ordering. None
// of them use tier matching.

#ifndef VENN_BASELINES_H_
#define VENN_BASELINES_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "venn/irs.h"
#include "venn/random.h"
#include "venn/scheduler.h"

namespace venn {

// Each function hands the device to the best eligible job with an
// outstanding request, claims one slot, and returns it. Ties go to the
// smaller job id.
std::optional<JobIndex> FifoAssign(const DeviceProfile& device,
                                   JobTable& jobs);
std::optional<JobIndex> SrsfAssign(const DeviceProfile& device,
                                   JobTable& jobs);
// `priority` holds the per-request draw by JobIndex; smallest wins.
std::optional<JobIndex> RandomAssign(
    const DeviceProfile& device, JobTable& jobs,
    const std::unordered_map<JobIndex, double>& priority);

class FifoScheduler : public Scheduler {
 public:
  std::string_view name() const override { return "fifo"; }
  std::optional<JobIndex> AssignDevice(const DeviceProfile& device,
                                       AtomId atom, JobTable& jobs,
                                       const SchedulingContext& ctx) override;
};

class SrsfScheduler : public Scheduler {
 public:
  std::string_view name() const override { return "srsf"; }
  std::optional<JobIndex> AssignDevice(const DeviceProfile& device,
                                       AtomId atom, JobTable& jobs,
                                       const SchedulingContext& ctx) override;
};

class RandomScheduler : public Scheduler {
 public:
  explicit RandomScheduler(Rng rng) : rng_(std::move(rng)) {}

  std::string_view name() const override { return "random"; }
  void OnRequestIssued(JobIndex job, JobTable& jobs,
                       const SchedulingContext& ctx) override;
  std::optional<JobIndex> AssignDevice(const DeviceProfile& device,
                                       AtomId atom, JobTable& jobs,
                                       const SchedulingContext& ctx) override;

 private:
  Rng rng_;
  std::unordered_map<JobIndex, double> priority_;
};

inline constexpr std::string_view kSchedulerNames[] = {"venn", "fifo", "srsf",
                                                       "random"};

bool IsSchedulerName(std::string_view name);

// Throws ConfigError for an unknown name. `seed` feeds the matcher and
// random-baseline streams.
std::unique_ptr<Scheduler> MakeScheduler(std::string_view name,
                                         const IrsOptions& irs,
                                         std::uint64_t seed);

}  // namespace venn

#endif  // VENN_BASELINES_H_
