#include "venn/irs.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "venn/errors.h"

namespace venn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double FlooredRatio(double num, double den, double floor) {
  if (!(den > 0.0) || std::isinf(den)) return floor;
  return std::max(num / den, floor);
}

}  // namespace

double RemainingDemand(const ActiveJob& job, DemandMode mode) {
  const double current = job.request.remaining_demand;
  if (mode == DemandMode::kCurrentRound) return current;
  const int future_rounds =
      std::max(0, job.spec.total_rounds - job.rounds_completed - 1);
  return current + static_cast<double>(future_rounds) * job.spec.round_demand;
}

double ContentionFreeJct(const JobSpec& job, double supply_rate,
                         double expected_collection_s) {
  if (!(supply_rate > 0.0)) return kInf;
  return job.total_rounds *
         (job.round_demand / supply_rate + expected_collection_s);
}

FairnessState MakeFairnessState(const JobTable& jobs,
                                std::span<const JobGroup> groups, double now,
                                double epsilon,
                                const CollectionEstimator& collection_s,
                                double ratio_floor) {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  FairnessState state;
  state.epsilon = epsilon;
  state.ratio_floor = ratio_floor;
  state.now = now;
  state.fair_share_s.assign(jobs.size(), 0.0);
  const auto m = static_cast<double>(std::count_if(
      jobs.begin(), jobs.end(), [](const ActiveJob& j) { return !j.finished; }));
  for (const JobGroup& g : groups) {
    for (JobIndex i : g.jobs) {
      const JobSpec& spec = jobs[i].spec;
      const double collect = collection_s ? collection_s(spec) : 0.0;
      state.fair_share_s[i] =
          std::max(1.0, m) * ContentionFreeJct(spec, g.supply_rate, collect);
    }
  }
  return state;
}

FairnessAdjustment ApplyFairness(const JobTable& jobs,
                                 std::span<const JobGroup> groups,
                                 const FairnessState& fairness,
                                 DemandMode mode) {
  FairnessAdjustment out;
  out.demand.assign(jobs.size(), 0.0);
  out.queue.reserve(groups.size());
  const double eps = fairness.epsilon;
  for (const JobGroup& g : groups) {
    double sum_t = 0.0;
    double sum_big_t = 0.0;
    std::size_t outstanding = 0;
    for (JobIndex i : g.jobs) {
      const ActiveJob& job = jobs[i];
      const double d = RemainingDemand(job, mode);
      if (eps == 0.0) {
        out.demand[i] = d;
      } else {
        const double t = std::max(0.0, fairness.now - job.spec.arrival_time);
        const double big_t = i < fairness.fair_share_s.size()
                                 ? fairness.fair_share_s[i]
                                 : 0.0;
        out.demand[i] =
            d * std::pow(FlooredRatio(t, big_t, fairness.ratio_floor), eps);
        sum_t += t;
        sum_big_t += big_t;
      }
      if (job.has_outstanding_request()) ++outstanding;
    }
    double q = static_cast<double>(outstanding);
    if (eps != 0.0 && outstanding > 0) {
      q *= std::pow(1.0 / FlooredRatio(sum_t, sum_big_t, fairness.ratio_floor),
                    eps);
    }
    out.queue.push_back(q);
  }
  return out;
}

std::vector<JobIndex> IntraGroupOrder(const JobGroup& group,
                                      const JobTable& jobs,
                                      const FairnessAdjustment& adjusted,
                                      std::size_t* comparisons) {
  std::vector<JobIndex> order = group.jobs;
  std::size_t count = 0;
  std::sort(order.begin(), order.end(), [&](JobIndex a, JobIndex b) {
    ++count;
    const double da = adjusted.demand[a];
    const double db = adjusted.demand[b];
    if (da != db) return da < db;
    return jobs[a].spec.job_id < jobs[b].spec.job_id;
  });
  if (comparisons != nullptr) *comparisons += count;
  return order;
}

std::pair<double, double> GetQueueLen(std::size_t group_j, std::size_t group_k,
                                      const FairnessAdjustment& adjusted) {
  return {adjusted.queue.at(group_j), adjusted.queue.at(group_k)};
}

const GroupAllocation* AllocationPlan::OwnerOf(AtomId atom) const {
  if (atom < 0 || static_cast<std::size_t>(atom) >= atom_owner.size()) {
    return nullptr;
  }
  const int g = atom_owner[atom];
  return g < 0 ? nullptr : &groups[g];
}

double AllocationPlan::AllocatedRate(std::size_t group,
                                     const SupplyEstimate& supply) const {
  return supply.RateOf(groups.at(group).allocated);
}

AllocationPlan Schedule(std::span<const JobGroup> groups,
                        const SupplyEstimate& supply,
                        const FairnessState& fairness, const JobTable& jobs,
                        std::size_t num_atoms, const ScheduleOptions& options,
                        ScheduleStats* stats) {
  ScheduleStats local;
  ScheduleStats& st = stats != nullptr ? *stats : local;

  AllocationPlan plan;
  plan.atom_owner.assign(num_atoms, -1);
  const std::size_t n = groups.size();
  if (n == 0) return plan;

  const FairnessAdjustment adjusted =
      ApplyFairness(jobs, groups, fairness, options.demand_mode);

  plan.groups.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    GroupAllocation& ga = plan.groups[j];
    ga.spec_id = groups[j].spec_id;
    ga.queue = IntraGroupOrder(groups[j], jobs, adjusted, &st.sort_comparisons);
    ga.eligible = groups[j].eligible_atoms;
    ga.allocated = AtomSet(num_atoms);
    ga.eligible_rate = supply.RateOf(ga.eligible);
    ga.adjusted_queue_len = adjusted.queue[j];
  }

  // Scarcest first. Equal rates (e.g. before any check-in) fall back to the
  // narrower atom set, then spec id.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto scarcer = [&](std::size_t a, std::size_t b) {
    const GroupAllocation& ga = plan.groups[a];
    const GroupAllocation& gb = plan.groups[b];
    if (ga.eligible_rate != gb.eligible_rate) {
      return ga.eligible_rate < gb.eligible_rate;
    }
    const std::size_t ca = ga.eligible.count();
    const std::size_t cb = gb.eligible.count();
    if (ca != cb) return ca < cb;
    return ga.spec_id < gb.spec_id;
  };
  std::sort(order.begin(), order.end(), scarcer);

  AtomSet unclaimed(num_atoms);
  for (std::size_t a = 0; a < num_atoms; ++a) {
    unclaimed.Insert(static_cast<AtomId>(a));
  }
  for (std::size_t j : order) {
    GroupAllocation& ga = plan.groups[j];
    ga.allocated = unclaimed & ga.eligible;
    unclaimed -= ga.allocated;
  }

  std::reverse(order.begin(), order.end());
  for (std::size_t pos = 0; pos < n; ++pos) {
    GroupAllocation& gj = plan.groups[order[pos]];
    if (gj.allocated.empty()) continue;
    for (std::size_t kpos = pos + 1; kpos < n; ++kpos) {
      ++st.pair_checks;
      GroupAllocation& gk = plan.groups[order[kpos]];
      if (!(gk.eligible_rate < gj.eligible_rate)) continue;
      if (!gk.eligible.Intersects(gj.eligible)) continue;
      const auto [m_j, m_k] = GetQueueLen(order[pos], order[kpos], adjusted);
      const double s_j = supply.RateOf(gj.allocated);
      // m_j / s_j > m_k / s_k without dividing by a zero rate.
      if (m_j * gk.eligible_rate > m_k * s_j) {
        // Shared atoms that k still holds move to j.
        const AtomSet moved = gj.eligible & gk.allocated;
        gj.allocated |= moved;
        gk.allocated -= moved;
        ++st.reallocations;
      } else {
        break;
      }
    }
  }

  for (std::size_t j = 0; j < n; ++j) {
    for (AtomId a : plan.groups[j].allocated.ToVector()) {
      plan.atom_owner[a] = static_cast<int>(j);
    }
  }
  return plan;
}

AssignResult AssignDevice(const AllocationPlan& plan,
                          const DeviceProfile& device, AtomId atom,
                          JobTable& jobs, const RestrictionMap& restrictions) {
  if (atom < 0 || static_cast<std::size_t>(atom) >= plan.atom_owner.size()) {
    throw UnknownAtomError("atom " + std::to_string(atom) +
                           " is not in the allocation plan");
  }
  AssignResult result;
  const GroupAllocation* owner = plan.OwnerOf(atom);
  if (owner == nullptr) return result;
  for (JobIndex i : owner->queue) {
    ActiveJob& job = jobs[i];
    if (!job.has_outstanding_request()) continue;
    const auto it = restrictions.find(i);
    if (it != restrictions.end() && !it->second.Accepts(device)) continue;
    job.request.ClaimSlot();
    result.job = i;
    result.recompute = job.request.remaining_demand == 0;
    return result;
  }
  return result;
}

IrsScheduler::IrsScheduler(IrsOptions options, Rng matcher_rng)
    : options_(std::move(options)),
      picker_(std::move(matcher_rng), options_.tier_choice) {
  if (!(options_.epsilon >= 0.0)) {
    throw std::invalid_argument("epsilon must be >= 0");
  }
  if (options_.num_tiers < 1) {
    throw std::invalid_argument("num_tiers must be >= 1");
  }
}

void IrsScheduler::OnRequestIssued(JobIndex job, JobTable& jobs,
                                   const SchedulingContext& ctx) {
  decided_.erase(job);
  restrictions_.erase(job);
  Recompute(jobs, ctx);
}

void IrsScheduler::OnRequestFilled(JobIndex job, JobTable& jobs,
                                   const SchedulingContext& ctx) {
  restrictions_.erase(job);
  for (const GroupAllocation& g : plan_.groups) {
    if (std::find(g.queue.begin(), g.queue.end(), job) != g.queue.end()) {
      Recompute(jobs, ctx);
      return;
    }
  }
}

void IrsScheduler::OnAtomsChanged(JobTable& jobs,
                                  const SchedulingContext& ctx) {
  Recompute(jobs, ctx);
}

std::optional<JobIndex> IrsScheduler::AssignDevice(
    const DeviceProfile& device, AtomId atom, JobTable& jobs,
    const SchedulingContext& ctx) {
  const AssignResult r =
      venn::AssignDevice(plan_, device, atom, jobs, restrictions_);
  if (r.recompute) {
    restrictions_.erase(*r.job);
    Recompute(jobs, ctx);
  }
  return r.job;
}

void IrsScheduler::OnResponse(JobIndex job, const DeviceProfile& device,
                              double seconds) {
  if (!options_.matching) return;
  profiles_[job].AddResponse(device.capacity_score(), seconds,
                             restricted_round_.contains(job));
}

void IrsScheduler::OnParticipant(JobIndex job, const DeviceProfile& device) {
  if (!options_.matching) return;
  profiles_[job].AddParticipant(device.capacity_score(),
                                restricted_round_.contains(job));
}

void IrsScheduler::OnRoundFinished(JobIndex job, bool /*succeeded*/) {
  if (!options_.matching) return;
  profiles_[job].FinishRound(options_.num_tiers, options_.response,
                             options_.min_tier_samples);
  restricted_round_.erase(job);
}

void IrsScheduler::Recompute(JobTable& jobs, const SchedulingContext& ctx) {
  static const SupplyEstimate kNoSupply;
  const SupplyEstimate& supply = ctx.supply != nullptr ? *ctx.supply : kNoSupply;
  const std::vector<JobGroup> groups =
      GroupJobs(jobs, *ctx.atoms, *ctx.registry, supply.rates);
  const ResponseModel& model = options_.response;
  const FairnessState fairness = MakeFairnessState(
      jobs, groups, ctx.now, options_.epsilon,
      [&model](const JobSpec& spec) {
        return ExpectedCollectionSeconds(model, spec.report_threshold);
      },
      options_.ratio_floor);
  ScheduleOptions so;
  so.demand_mode = options_.demand_mode;
  plan_ = Schedule(groups, supply, fairness, jobs, ctx.atoms->size(), so);
  plan_.generation = ++generation_;
  ++reschedules_;
  if (options_.matching && options_.num_tiers > 1) {
    MatchServedJobs(jobs, supply);
  }
}

void IrsScheduler::MatchServedJobs(const JobTable& jobs,
                                   const SupplyEstimate& supply) {
  for (std::size_t g = 0; g < plan_.groups.size(); ++g) {
    const GroupAllocation& ga = plan_.groups[g];
    if (ga.allocated.empty()) continue;
    const auto head = ga.head();
    if (!head || decided_.contains(*head)) continue;
    decided_[*head] = true;
    const auto it = profiles_.find(*head);
    if (it == profiles_.end()) continue;
    const JobProfile& profile = it->second;
    const double c =
        EstimateC(jobs[*head].request.remaining_demand,
                  plan_.AllocatedRate(g, supply), profile.t_response());
    const MatchDecision d = Match(profile, c, picker_);
    if (d.tier) {
      restrictions_[*head] = TierRestriction{*d.tier, profile.tiers()};
      restricted_round_.insert(*head);
    }
  }
}

}  // namespace venn
