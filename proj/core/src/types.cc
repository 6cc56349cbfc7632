#include "venn/types.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "venn/eligibility.h"

namespace venn {

TagSet::TagSet(std::initializer_list<std::string> tags)
    : TagSet(std::vector<std::string>(tags)) {}

TagSet::TagSet(std::vector<std::string> tags) : tags_(std::move(tags)) {
  std::sort(tags_.begin(), tags_.end());
  tags_.erase(std::unique(tags_.begin(), tags_.end()), tags_.end());
}

bool TagSet::Includes(const TagSet& other) const {
  return std::includes(tags_.begin(), tags_.end(), other.tags_.begin(),
                       other.tags_.end());
}

void ValidateDevice(const DeviceProfile& device) {
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("device '" + device.device_id + "': " + why);
  };
  if (!(device.cpu_score > 0.0)) fail("cpu_score must be positive");
  if (!(device.memory_gb > 0.0)) fail("memory_gb must be positive");
  if (!(device.speed_factor > 0.0)) fail("speed_factor must be positive");
  for (std::size_t i = 0; i < device.availability.size(); ++i) {
    const Interval& iv = device.availability[i];
    if (!(iv.start < iv.end)) fail("availability interval has start >= end");
    if (i > 0 && iv.start < device.availability[i - 1].end) {
      fail("availability intervals overlap or are unsorted");
    }
  }
}

bool operator<(const EligibilitySpec& a, const EligibilitySpec& b) {
  return std::tie(a.min_cpu, a.min_memory_gb, a.required_tags) <
         std::tie(b.min_cpu, b.min_memory_gb, b.required_tags);
}

std::string Describe(const EligibilitySpec& spec) {
  for (DeviceClass cls : kAllDeviceClasses) {
    if (StandardSpec(cls) == spec) return std::string(ToString(cls));
  }
  std::ostringstream out;
  out << "cpu>=" << spec.min_cpu << ";mem>=" << spec.min_memory_gb;
  for (const auto& tag : spec.required_tags) out << ";+" << tag;
  return out.str();
}

int JobSpec::required_responses() const {
  const double raw = report_threshold * round_demand;
  // 0.8 * 10 evaluates to 8.000000000000002; snap before taking the ceiling.
  const double snapped = std::round(raw);
  if (std::abs(raw - snapped) < 1e-9) return static_cast<int>(snapped);
  return static_cast<int>(std::ceil(raw));
}

void ValidateJob(const JobSpec& job) {
  auto fail = [&](const std::string& why) {
    throw std::invalid_argument("job '" + job.job_id + "': " + why);
  };
  if (job.total_rounds < 1) fail("total_rounds must be >= 1");
  if (job.round_demand < 1) fail("round_demand must be >= 1");
  if (!(job.report_threshold > 0.0 && job.report_threshold <= 1.0)) {
    fail("report_threshold must lie in (0, 1]");
  }
  if (!(job.deadline_seconds > 0.0)) fail("deadline must be positive");
  if (job.spec.min_cpu < 0.0 || job.spec.min_memory_gb < 0.0) {
    fail("eligibility thresholds must be non-negative");
  }
}

std::string_view ToString(RequestState state) {
  switch (state) {
    case RequestState::kWaiting:
      return "Waiting";
    case RequestState::kCollecting:
      return "Collecting";
    case RequestState::kSucceeded:
      return "Succeeded";
    case RequestState::kAborted:
      return "Aborted";
  }
  return "?";
}

RoundRequest RoundRequest::Issue(const JobSpec& job, int round_index,
                                 int attempt, double now) {
  RoundRequest r;
  r.job_id = job.job_id;
  r.round_index = round_index;
  r.attempt = attempt;
  r.demand = job.round_demand;
  r.remaining_demand = job.round_demand;
  r.issue_time = now;
  return r;
}

bool RoundRequest::ClaimSlot() {
  if (state != RequestState::kWaiting || remaining_demand <= 0) return false;
  --remaining_demand;
  ++assigned_count;
  return true;
}

void RoundRequest::Transition(RequestState next) {
  const bool ok =
      (state == RequestState::kWaiting && next == RequestState::kCollecting) ||
      (state == RequestState::kCollecting &&
       (next == RequestState::kSucceeded || next == RequestState::kAborted));
  if (!ok) {
    throw std::logic_error("illegal request transition " +
                           std::string(ToString(state)) + " -> " +
                           std::string(ToString(next)));
  }
  state = next;
}

}  // namespace venn
