#include "venn/matcher.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "venn/errors.h"

namespace venn {

double Percentile(std::vector<double> samples, double p) {
  if (samples.empty()) return 0.0;
  std::sort(samples.begin(), samples.end());
  const double pos = std::clamp(p, 0.0, 1.0) * (samples.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, samples.size() - 1);
  const double frac = pos - lo;
  if (frac == 0.0 || samples[lo] == samples[hi]) return samples[lo];
  if (std::isinf(samples[hi])) return samples[hi];
  return samples[lo] + frac * (samples[hi] - samples[lo]);
}

int TierTable::TierOf(double capacity) const {
  const auto passed = std::upper_bound(thresholds.begin(), thresholds.end(),
                                       capacity) -
                      thresholds.begin();
  return num_tiers - 1 - static_cast<int>(passed);
}

std::vector<double> BuildTiers(std::span<const double> capacity_samples,
                               int num_tiers) {
  if (num_tiers < 1) throw std::invalid_argument("num_tiers must be >= 1");
  if (capacity_samples.size() < static_cast<std::size_t>(num_tiers)) {
    throw InsufficientSamplesError(
        "need at least " + std::to_string(num_tiers) + " capacity samples, got " +
        std::to_string(capacity_samples.size()));
  }
  std::vector<double> sorted(capacity_samples.begin(), capacity_samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> cuts;
  for (int k = 1; k < num_tiers; ++k) {
    cuts.push_back(Percentile(sorted, static_cast<double>(k) / num_tiers));
  }
  return cuts;
}

bool ThresholdsDegenerate(std::span<const double> thresholds) {
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > thresholds[i - 1])) return true;
  }
  return false;
}

SpeedupEstimate EstimateSpeedups(std::span<const std::vector<double>> per_tier,
                                 std::size_t min_samples) {
  SpeedupEstimate out;
  std::vector<double> pooled;
  for (std::size_t v = 0; v < per_tier.size(); ++v) {
    if (per_tier[v].size() < min_samples) {
      throw InsufficientSamplesError("tier " + std::to_string(v) + " has " +
                                     std::to_string(per_tier[v].size()) +
                                     " response samples");
    }
    out.tier_tail_s.push_back(Percentile(per_tier[v], kTailPercentile));
    pooled.insert(pooled.end(), per_tier[v].begin(), per_tier[v].end());
  }
  out.untiered_tail_s = Percentile(std::move(pooled), kTailPercentile);
  for (double t : out.tier_tail_s) {
    out.speedup.push_back(out.untiered_tail_s > 0.0 ? t / out.untiered_tail_s
                                                    : 1.0);
  }
  return out;
}

bool TieringReducesJct(int num_tiers, double speedup, double c) {
  return num_tiers + speedup * c < c + 1.0;
}

double EstimateC(double remaining_demand, double allocated_rate,
                 double t_response) {
  if (!(allocated_rate > 0.0) || !(remaining_demand > 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  return t_response / (remaining_demand / allocated_rate);
}

int TierPicker::Pick(int num_tiers) {
  if (mode_ == TierChoice::kRotate) {
    return static_cast<int>(next_++ % num_tiers);
  }
  std::uniform_int_distribution<int> u(0, num_tiers - 1);
  return u(rng_);
}

void JobProfile::AddParticipant(double capacity, bool restricted) {
  if (!restricted) capacities_.push_back(capacity);
}

void JobProfile::AddResponse(double capacity, double seconds,
                             bool restricted) {
  responses_.push_back({capacity, seconds, restricted});
}

void JobProfile::FinishRound(int num_tiers, const ResponseModel& model,
                             std::size_t min_samples) {
  if (capacities_.empty()) return;
  ++rounds_;
  TierTable fresh;
  fresh.num_tiers = std::max(1, num_tiers);
  if (fresh.num_tiers > 1) {
    if (capacities_.size() < static_cast<std::size_t>(fresh.num_tiers)) {
      fresh.degenerate = true;
    } else {
      fresh.thresholds = BuildTiers(capacities_, fresh.num_tiers);
      fresh.degenerate = ThresholdsDegenerate(fresh.thresholds);
    }
  }
  if (fresh.degenerate) {
    fresh.num_tiers = 1;
    fresh.thresholds.clear();
  }

  const int v_count = fresh.num_tiers;
  std::vector<std::vector<double>> samples(v_count);
  std::vector<double> pooled;
  for (const Response& r : responses_) {
    samples[fresh.TierOf(r.capacity)].push_back(r.seconds);
    if (!r.restricted) pooled.push_back(r.seconds);
  }
  std::vector<double> speed_sum(v_count, 0.0);
  std::vector<int> speed_n(v_count, 0);
  double all_speed = 0.0;
  for (double cap : capacities_) {
    const int v = fresh.TierOf(cap);
    speed_sum[v] += 1.0 / cap;
    ++speed_n[v];
    all_speed += 1.0 / cap;
  }
  const double mean_speed = all_speed / capacities_.size();
  auto analytic = [&](double speed) {
    return ResponseQuantile(model, speed, kTailPercentile);
  };

  fresh.untiered_tail_s = pooled.size() >= min_samples
                              ? Percentile(pooled, kTailPercentile)
                              : analytic(mean_speed);
  for (int v = 0; v < v_count; ++v) {
    double t = 0.0;
    if (v_count == 1) {
      t = fresh.untiered_tail_s;
    } else if (samples[v].size() >= min_samples) {
      t = Percentile(samples[v], kTailPercentile);
    } else {
      t = analytic(speed_n[v] > 0 ? speed_sum[v] / speed_n[v] : mean_speed);
    }
    fresh.tail_latency_s.push_back(t);
  }

  const bool blend = tiers_.num_tiers == fresh.num_tiers &&
                     tiers_.tail_latency_s.size() == fresh.tail_latency_s.size() &&
                     tiers_.untiered_tail_s > 0.0;
  if (blend) {
    fresh.untiered_tail_s = 0.5 * tiers_.untiered_tail_s +
                            0.5 * fresh.untiered_tail_s;
    for (int v = 0; v < v_count; ++v) {
      fresh.tail_latency_s[v] =
          0.5 * tiers_.tail_latency_s[v] + 0.5 * fresh.tail_latency_s[v];
    }
  }
  for (int v = 0; v < v_count; ++v) {
    fresh.speedup.push_back(v_count == 1 || fresh.untiered_tail_s <= 0.0
                                ? 1.0
                                : fresh.tail_latency_s[v] /
                                      fresh.untiered_tail_s);
  }
  tiers_ = std::move(fresh);
}

MatchDecision Match(const JobProfile& profile, double c, TierPicker& picker) {
  MatchDecision d;
  d.c = c;
  if (!profile.has_history() || !std::isfinite(c)) return d;
  const TierTable& tiers = profile.tiers();
  if (tiers.degenerate) return d;
  const int u = picker.Pick(tiers.num_tiers);
  if (TieringReducesJct(tiers.num_tiers, tiers.speedup[u], c)) d.tier = u;
  return d;
}

}  // namespace venn
