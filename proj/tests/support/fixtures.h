// Small builders shared by the unit tests.

#ifndef VENN_TESTS_SUPPORT_FIXTURES_H_
#define VENN_TESTS_SUPPORT_FIXTURES_H_

#include <string>
#include <utility>
#include <vector>

#include "venn/eligibility.h"
#include "venn/types.h"

namespace venn::testing {

inline DeviceProfile Device(std::string id, double cpu, double mem,
                            TagSet tags = {}, double speed = 1.0) {
  DeviceProfile d;
  d.device_id = std::move(id);
  d.cpu_score = cpu;
  d.memory_gb = mem;
  d.tags = std::move(tags);
  d.speed_factor = speed;
  return d;
}

inline EligibilitySpec Spec(double cpu, double mem, TagSet tags = {}) {
  EligibilitySpec s;
  s.min_cpu = cpu;
  s.min_memory_gb = mem;
  s.required_tags = std::move(tags);
  return s;
}

inline JobSpec Job(std::string id, int demand, EligibilitySpec spec = {},
                   int rounds = 1, double arrival = 0.0) {
  JobSpec j;
  j.job_id = std::move(id);
  j.round_demand = demand;
  j.total_rounds = rounds;
  j.arrival_time = arrival;
  j.spec = std::move(spec);
  return j;
}

// Active job with a freshly issued first-round request.
inline ActiveJob Active(const JobSpec& spec, SpecId spec_id, double now = 0.0) {
  ActiveJob a;
  a.spec = spec;
  a.spec_id = spec_id;
  a.request = RoundRequest::Issue(spec, 0, 0, now);
  return a;
}

}  // namespace venn::testing

#endif  // VENN_TESTS_SUPPORT_FIXTURES_H_
