// Exact solver for small single-round scheduling instances, and the
// closed-form two-group queuing-delay comparison.

#ifndef VENN_ORACLE_H_
#define VENN_ORACLE_H_

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "venn/random.h"

namespace venn {

// q devices arriving at times t, m jobs with demands d, eligibility e[i][j].
struct ExactInstance {
  std::vector<double> t;
  std::vector<std::vector<int>> e;
  std::vector<int> d;

  std::size_t num_devices() const { return t.size(); }
  std::size_t num_jobs() const { return d.size(); }
};

struct OracleLimits {
  std::size_t max_devices = 14;
  std::size_t max_jobs = 4;
};

// Throws std::invalid_argument for malformed shapes, InstanceTooLargeError
// beyond `limits`, and InfeasibleError when some job has fewer eligible
// devices than its demand.
void ValidateInstance(const ExactInstance& instance,
                      const OracleLimits& limits = {});

struct ExactSolution {
  // Job index per device, -1 for unused devices.
  std::vector<int> assignment;
  // T_j: arrival time of the last device assigned to job j.
  std::vector<double> completion;
  double average = 0.0;
  std::size_t nodes = 0;
};

// Minimizes the mean of T_j by branch-and-bound over devices in arrival
// order. Among optimal assignments the lexicographically smallest job vector
// is returned. Throws InfeasibleError if no assignment meets every demand.
ExactSolution SolveExact(const ExactInstance& instance,
                         const OracleLimits& limits = {});

// Mean completion time of a fixed assignment, or +infinity if it leaves some
// demand unmet. Throws std::invalid_argument for an ineligible pair or a
// job given more devices than its demand.
double EvaluateAssignment(const ExactInstance& instance,
                          const std::vector<int>& assignment);

struct DeltaT {
  double delta_t = 0.0;
  bool prioritize_a = false;
};

// dt = l * m_b - (l / (1 - x) - l) * m_a, where l is the demand of group A's
// head job and x the fraction of devices eligible to group B. A goes first
// iff dt < 0, which equals m_a / (1 - x) > m_b / x. Throws DomainError for
// x outside (0, 1) and std::invalid_argument for l <= 0 or negative queues.
DeltaT PairwiseDeltaT(double l, double x, double m_a, double m_b);

// {"t": [..], "e": [[0|1, ..], ..], "d": [..]}
ExactInstance ReadInstance(std::istream& in);
void WriteInstance(std::ostream& out, const ExactInstance& instance);

struct InstanceGenParams {
  std::size_t max_devices = 10;
  std::size_t max_jobs = 4;
  int max_demand = 3;
};

// Devices arrive at t = 1..q and each falls in one of the four capacity
// regions; every job takes one of the four standard specs. Redraws until
// the instance is feasible.
ExactInstance RandomInstance(const InstanceGenParams& params, Rng& rng);

}  // namespace venn

#endif  // VENN_ORACLE_H_
