// Tier-based device-to-job matching.
//
// A served job's eligible devices are split into V equal-population capacity
// tiers. Restricting the job to tier u multiplies its scheduling delay by V
// and its response collection time by g_u, so the restriction is applied only
// when V * t_schedule + g_u * t_response < t_schedule + t_response, i.e.
// V + g_u * c < c + 1 with c = t_response / t_schedule.

#ifndef VENN_MATCHER_H_
#define VENN_MATCHER_H_

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "venn/random.h"
#include "venn/response_model.h"

namespace venn {

inline constexpr double kTailPercentile = 0.95;

// Linear-interpolation percentile, p in [0, 1]. `samples` need not be sorted.
double Percentile(std::vector<double> samples, double p);

struct TierTable {
  int num_tiers = 1;
  // num_tiers - 1 ascending capacity cut points.
  std::vector<double> thresholds;
  // Per-tier 95th-percentile response time; tier 0 is the fastest.
  std::vector<double> tail_latency_s;
  // 95th percentile over all tiers pooled.
  double untiered_tail_s = 0.0;
  // g_v = tail_latency_s[v] / untiered_tail_s.
  std::vector<double> speedup;
  // Cut points collapsed; tiering is disabled.
  bool degenerate = false;

  // Tier index for a capacity score: scores at or above the top threshold
  // land in tier 0.
  int TierOf(double capacity) const;
};

// Cut points at the k/V quantiles (k = 1..V-1) of the samples. Throws
// InsufficientSamplesError when there are fewer samples than tiers.
std::vector<double> BuildTiers(std::span<const double> capacity_samples,
                               int num_tiers);

bool ThresholdsDegenerate(std::span<const double> thresholds);

struct SpeedupEstimate {
  std::vector<double> tier_tail_s;
  double untiered_tail_s = 0.0;
  std::vector<double> speedup;
};

// Empirical 95th percentiles per tier and pooled. Throws
// InsufficientSamplesError if any tier has fewer than `min_samples`.
SpeedupEstimate EstimateSpeedups(std::span<const std::vector<double>> per_tier,
                                 std::size_t min_samples = 20);

bool TieringReducesJct(int num_tiers, double speedup, double c);

// c = t_response / t_schedule with t_schedule = remaining_demand /
// allocated_rate. Returns +infinity when the schedule time is zero or
// undefined (no supply or nothing left to schedule).
double EstimateC(double remaining_demand, double allocated_rate,
                 double t_response);

enum class TierChoice { kRandom, kRotate };

class TierPicker {
 public:
  TierPicker(Rng rng, TierChoice mode) : rng_(std::move(rng)), mode_(mode) {}
  int Pick(int num_tiers);

 private:
  Rng rng_;
  TierChoice mode_;
  long long next_ = 0;
};

// Participant history of one job, used to partition tiers and estimate g_v.
// Participants of tier-restricted requests are not used for thresholds, and
// their responses only inform their own tier's tail, so the thresholds keep
// splitting the job's eligible population into equal parts.
class JobProfile {
 public:
  void AddParticipant(double capacity, bool restricted = false);
  void AddResponse(double capacity, double seconds, bool restricted = false);

  // Folds the round's samples into the tier table. Per-tier estimates come
  // from the empirical 95th percentile once a tier has `min_samples`
  // responses and from the analytic log-normal quantile before that; each
  // round's estimate is blended 50/50 with the previous one.
  void FinishRound(int num_tiers, const ResponseModel& model,
                   std::size_t min_samples = 20);

  bool has_history() const { return rounds_ > 0 && !capacities_.empty(); }
  const TierTable& tiers() const { return tiers_; }
  double t_response() const { return tiers_.untiered_tail_s; }
  std::span<const double> capacities() const { return capacities_; }

 private:
  std::vector<double> capacities_;
  struct Response {
    double capacity = 0.0;
    double seconds = 0.0;
    bool restricted = false;
  };
  std::vector<Response> responses_;
  TierTable tiers_;
  int rounds_ = 0;
};

struct MatchDecision {
  std::optional<int> tier;
  double c = 0.0;
};

// Returns a tier restriction only for a profiled, non-degenerate job whose
// estimated JCT improves under the drawn tier.
MatchDecision Match(const JobProfile& profile, double c, TierPicker& picker);

}  // namespace venn

#endif  // VENN_MATCHER_H_
