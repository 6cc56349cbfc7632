// Domain types shared by every scheduling component: devices, eligibility
// requirements, jobs and their per-round resource requests.

#ifndef VENN_TYPES_H_
#define VENN_TYPES_H_

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace venn {

using SpecId = int;
using AtomId = int;
using JobIndex = std::size_t;

inline constexpr double kSecondsPerDay = 86400.0;

// Half-open availability window [start, end) in simulation seconds.
struct Interval {
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }
  bool Contains(double t) const { return t >= start && t < end; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Sorted, duplicate-free set of opaque labels (software version, data
// availability, ...).
class TagSet {
 public:
  TagSet() = default;
  TagSet(std::initializer_list<std::string> tags);
  explicit TagSet(std::vector<std::string> tags);

  bool Includes(const TagSet& other) const;
  bool empty() const { return tags_.empty(); }
  std::size_t size() const { return tags_.size(); }
  const std::vector<std::string>& values() const { return tags_; }
  auto begin() const { return tags_.begin(); }
  auto end() const { return tags_.end(); }

  friend bool operator==(const TagSet&, const TagSet&) = default;
  friend auto operator<=>(const TagSet& a, const TagSet& b) {
    return a.tags_ <=> b.tags_;
  }

 private:
  std::vector<std::string> tags_;
};

struct DeviceProfile {
  std::string device_id;
  double cpu_score = 1.0;
  double memory_gb = 1.0;
  TagSet tags;
  // Multiplier on task compute time; 1.0 is the reference device.
  double speed_factor = 1.0;
  std::vector<Interval> availability;

  // Scalar hardware capacity used for tiering. Higher is faster.
  double capacity_score() const { return 1.0 / speed_factor; }
};

// Throws std::invalid_argument when a profile breaks its invariants.
void ValidateDevice(const DeviceProfile& device);

struct EligibilitySpec {
  double min_cpu = 0.0;
  double min_memory_gb = 0.0;
  TagSet required_tags;

  friend bool operator==(const EligibilitySpec&, const EligibilitySpec&) =
      default;
};

// Strict weak order so specs can key ordered containers.
bool operator<(const EligibilitySpec& a, const EligibilitySpec& b);

// Human-readable label. The four standard device specs print by
// name (General, Compute-Rich, Memory-Rich, High-Performance).
std::string Describe(const EligibilitySpec& spec);

struct JobSpec {
  std::string job_id;
  double arrival_time = 0.0;
  int total_rounds = 1;
  int round_demand = 1;
  EligibilitySpec spec;
  double report_threshold = 0.8;
  double deadline_seconds = 600.0;

  long long total_demand() const {
    return static_cast<long long>(total_rounds) * round_demand;
  }
  // ceil(threshold * demand), robust to representation error in threshold.
  int required_responses() const;
};

void ValidateJob(const JobSpec& job);

enum class RequestState { kWaiting, kCollecting, kSucceeded, kAborted };

std::string_view ToString(RequestState state);

struct RoundRequest {
  std::string job_id;
  int round_index = 0;
  // Incremented every time an aborted round is reissued.
  int attempt = 0;
  int demand = 0;
  int remaining_demand = 0;
  double issue_time = 0.0;
  int assigned_count = 0;
  int responses_received = 0;
  RequestState state = RequestState::kWaiting;

  static RoundRequest Issue(const JobSpec& job, int round_index, int attempt,
                            double now);

  // Consumes one slot of demand. Returns false if nothing was outstanding.
  bool ClaimSlot();
  void Transition(RequestState next);
};

// A job that has arrived, plus its current round request.
struct ActiveJob {
  JobSpec spec;
  SpecId spec_id = -1;
  RoundRequest request;
  int rounds_completed = 0;
  bool finished = false;

  bool has_outstanding_request() const {
    return !finished && request.state == RequestState::kWaiting &&
           request.remaining_demand > 0;
  }
};

using JobTable = std::vector<ActiveJob>;

}  // namespace venn

#endif  // VENN_TYPES_H_
