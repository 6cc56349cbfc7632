// Intersection Resource Scheduling.
//
// Jobs are grouped by identical eligibility spec. Within a group, jobs are
// served smallest (fairness-adjusted) remaining demand first. Across groups,
// atoms are first handed out scarcest-group-first; then, walking groups from
// most to least abundant, group j takes over the shared atoms a scarcer
// group k still holds while m_j' / |S_j'| > m_k' / |S_k|, where |.| is the
// eligible check-in rate and m' the adjusted queue length. Every checked-in
// device goes to the head job of the group that owns its atom.

#ifndef VENN_IRS_H_
#define VENN_IRS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "venn/eligibility.h"
#include "venn/matcher.h"
#include "venn/response_model.h"
#include "venn/scheduler.h"
#include "venn/workload.h"

namespace venn {

enum class DemandMode {
  // Remaining demand of the current round's request.
  kCurrentRound,
  // Current remaining demand plus all future rounds.
  kTotalRemaining,
};

double RemainingDemand(const ActiveJob& job, DemandMode mode);

struct FairnessState {
  double epsilon = 0.0;
  // Lower bound on t_i / T_i so a job is never weighted to zero.
  double ratio_floor = 1e-6;
  double now = 0.0;
  // Fair-share JCT target T_i = M * sd_i, indexed by JobIndex. Zero for jobs
  // outside every group.
  std::vector<double> fair_share_s;
};

// sd_i: rounds * (demand / supply_rate + expected collection time). Infinite
// when the supply rate is zero.
double ContentionFreeJct(const JobSpec& job, double supply_rate,
                         double expected_collection_s);

using CollectionEstimator = std::function<double(const JobSpec&)>;

// Builds T_i for every job in `groups`, with M = number of unfinished jobs.
FairnessState MakeFairnessState(const JobTable& jobs,
                                std::span<const JobGroup> groups, double now,
                                double epsilon,
                                const CollectionEstimator& collection_s,
                                double ratio_floor = 1e-6);

struct FairnessAdjustment {
  // d_i' by JobIndex (only grouped jobs are meaningful).
  std::vector<double> demand;
  // q_j' per group, in `groups` order.
  std::vector<double> queue;
};

// d_i' = d_i * (t_i / T_i)^eps and q_j' = q_j * (sum T_i / sum t_i)^eps with
// t_i = now - arrival. eps = 0 is the identity.
FairnessAdjustment ApplyFairness(const JobTable& jobs,
                                 std::span<const JobGroup> groups,
                                 const FairnessState& fairness,
                                 DemandMode mode = DemandMode::kCurrentRound);

// Ascending adjusted demand, ties by job id.
std::vector<JobIndex> IntraGroupOrder(const JobGroup& group,
                                      const JobTable& jobs,
                                      const FairnessAdjustment& adjusted,
                                      std::size_t* comparisons = nullptr);

// Adjusted queue lengths (m_j', m_k') of two groups.
std::pair<double, double> GetQueueLen(std::size_t group_j, std::size_t group_k,
                                      const FairnessAdjustment& adjusted);

struct ScheduleStats {
  std::size_t sort_comparisons = 0;
  std::size_t pair_checks = 0;
  std::size_t reallocations = 0;
};

struct GroupAllocation {
  SpecId spec_id = -1;
  std::vector<JobIndex> queue;
  AtomSet eligible;
  // S_j'.
  AtomSet allocated;
  double eligible_rate = 0.0;
  double adjusted_queue_len = 0.0;

  std::optional<JobIndex> head() const {
    if (queue.empty()) return std::nullopt;
    return queue.front();
  }
};

struct AllocationPlan {
  // Same order as the input groups.
  std::vector<GroupAllocation> groups;
  // Owning group per atom id, -1 when unclaimed.
  std::vector<int> atom_owner;
  std::uint64_t generation = 0;

  const GroupAllocation* OwnerOf(AtomId atom) const;
  double AllocatedRate(std::size_t group, const SupplyEstimate& supply) const;
};

struct ScheduleOptions {
  DemandMode demand_mode = DemandMode::kCurrentRound;
};

// Pure function of its inputs. `num_atoms` sizes the owner table.
AllocationPlan Schedule(std::span<const JobGroup> groups,
                        const SupplyEstimate& supply,
                        const FairnessState& fairness, const JobTable& jobs,
                        std::size_t num_atoms,
                        const ScheduleOptions& options = {},
                        ScheduleStats* stats = nullptr);

struct TierRestriction {
  int tier = 0;
  TierTable tiers;

  bool Accepts(const DeviceProfile& device) const {
    return tiers.TierOf(device.capacity_score()) == tier;
  }
};

using RestrictionMap = std::unordered_map<JobIndex, TierRestriction>;

struct AssignResult {
  std::optional<JobIndex> job;
  // The chosen request's demand reached zero; the plan must be recomputed.
  bool recompute = false;
};

// Gives the device to the first job, in its owning group's order, that has
// outstanding demand and whose tier restriction (if any) admits it. Throws
// UnknownAtomError for an atom outside the plan.
AssignResult AssignDevice(const AllocationPlan& plan,
                          const DeviceProfile& device, AtomId atom,
                          JobTable& jobs, const RestrictionMap& restrictions);

struct IrsOptions {
  double epsilon = 0.0;
  double ratio_floor = 1e-6;
  DemandMode demand_mode = DemandMode::kCurrentRound;
  bool matching = true;
  int num_tiers = 5;
  TierChoice tier_choice = TierChoice::kRandom;
  std::size_t min_tier_samples = 20;
  ResponseModel response;
};

class IrsScheduler : public Scheduler {
 public:
  IrsScheduler(IrsOptions options, Rng matcher_rng);

  std::string_view name() const override { return "venn"; }

  void OnRequestIssued(JobIndex job, JobTable& jobs,
                       const SchedulingContext& ctx) override;
  void OnRequestFilled(JobIndex job, JobTable& jobs,
                       const SchedulingContext& ctx) override;
  void OnAtomsChanged(JobTable& jobs, const SchedulingContext& ctx) override;
  std::optional<JobIndex> AssignDevice(const DeviceProfile& device,
                                       AtomId atom, JobTable& jobs,
                                       const SchedulingContext& ctx) override;
  void OnResponse(JobIndex job, const DeviceProfile& device,
                  double seconds) override;
  void OnParticipant(JobIndex job, const DeviceProfile& device) override;
  void OnRoundFinished(JobIndex job, bool succeeded) override;

  const AllocationPlan& plan() const { return plan_; }
  const RestrictionMap& restrictions() const { return restrictions_; }
  std::size_t reschedules() const { return reschedules_; }

 private:
  void Recompute(JobTable& jobs, const SchedulingContext& ctx);
  void MatchServedJobs(const JobTable& jobs, const SupplyEstimate& supply);

  IrsOptions options_;
  TierPicker picker_;
  AllocationPlan plan_;
  RestrictionMap restrictions_;
  // Jobs whose current request already had its tier decision made.
  std::unordered_map<JobIndex, bool> decided_;
  std::unordered_map<JobIndex, JobProfile> profiles_;
  // Jobs whose current round was tier-restricted.
  std::unordered_set<JobIndex> restricted_round_;
  std::uint64_t generation_ = 0;
  std::size_t reschedules_ = 0;
};

}  // namespace venn

#endif  // VENN_IRS_H_
