// Device traces, job workloads and eligible-supply estimation.

#ifndef VENN_WORKLOAD_H_
#define VENN_WORKLOAD_H_

#include <array>
#include <cstdint>
#include <deque>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "venn/eligibility.h"
#include "venn/types.h"

namespace venn {

struct DeviceTrace {
  std::vector<DeviceProfile> devices;
  // End of the latest availability interval.
  double horizon_s = 0.0;
};

enum class TraceFormat { kJsonl, kCsv };

// Throws ParseError (with a 1-based line number) for malformed records,
// duplicate ids or invalid intervals, and EmptyTraceError for no records.
//
// CSV layout: header `id,cpu,mem_gb,tags,speed,avail`; tags are separated by
// '|', intervals by '|' with ':' between start and end ("0:3600|7200:9000").
DeviceTrace LoadDeviceTrace(std::istream& in, TraceFormat format);
void WriteDeviceTrace(std::ostream& out, const DeviceTrace& trace);

struct CapacityMix {
  // Probability of each DeviceClass region, in kAllDeviceClasses order.
  std::array<double, 4> weights = {0.45, 0.15, 0.25, 0.15};
};

struct SynthTraceParams {
  int n_devices = 1000;
  double horizon_s = 7 * kSecondsPerDay;
  // 0 = flat check-in intensity, 1 = intensity touches zero at the trough.
  double diurnal_amplitude = 0.5;
  CapacityMix capacity_mix;
  double sessions_per_day = 2.0;
  double mean_session_s = 2 * 3600.0;
  std::uint64_t seed = 1;
};

// Throws ConfigError on invalid parameters.
DeviceTrace SynthDeviceTrace(const SynthTraceParams& params);

enum class Scenario { kEven, kSmall, kLarge, kLow, kHigh };

std::string_view ToString(Scenario s);
// Case-insensitive.
std::optional<Scenario> ParseScenario(std::string_view name);

struct WorkloadScenario {
  Scenario name = Scenario::kEven;
  int n_jobs = 50;
  double mean_interarrival_s = 1800.0;
  std::uint64_t seed = 1;
};

// Synthetic job catalog: round demand and total rounds log-uniform; the
// per-round deadline is linear in round demand over the catalog's range.
struct CatalogParams {
  int n_templates = 200;
  int demand_min = 100;
  int demand_max = 10000;
  int rounds_min = 10;
  int rounds_max = 1000;
  double deadline_min_s = 300.0;
  double deadline_max_s = 900.0;
  double report_threshold = 0.8;
  std::uint64_t seed = 1;
};

std::vector<JobSpec> GenerateCatalog(const CatalogParams& params);

// Recomputes each template's deadline by interpolating over the catalog's
// round-demand range.
void AssignDeadlines(std::span<JobSpec> catalog, double min_s, double max_s);

// JSONL: {"id","rounds","demand","spec":{"min_cpu","min_mem_gb","tags"},
// "deadline_s","threshold"} plus an optional "arrival_s". CSV uses the same
// names as headers with spec fields flattened (min_cpu,min_mem_gb,tags).
std::vector<JobSpec> LoadJobCatalog(std::istream& in, TraceFormat format);
void WriteJobCatalog(std::ostream& out, std::span<const JobSpec> jobs,
                     bool include_arrival);

// Samples `scenario.n_jobs` jobs from the scenario's filtered catalog subset
// with Poisson arrivals. Each job is mapped to a device spec drawn uniformly
// from `device_specs`; an empty span keeps the template's own spec.
// Throws EmptyCatalogError when the filter leaves nothing to sample.
std::vector<JobSpec> SampleWorkload(
    const WorkloadScenario& scenario, std::span<const JobSpec> catalog,
    std::span<const EligibilitySpec> device_specs);

struct CheckIn {
  double time = 0.0;
  AtomId atom = 0;
};

struct SupplyEstimate {
  // Check-ins per second for each atom id.
  std::vector<double> rates;
  double window_s = kSecondsPerDay;

  double rate(AtomId a) const {
    return static_cast<std::size_t>(a) < rates.size() ? rates[a] : 0.0;
  }
  double total() const;
  double RateOf(const AtomSet& atoms) const;
};

// rate(a) = #check-ins of atom a in (now - window_s, now] / window_s. Before a
// full window has elapsed since `origin`, the divisor is the elapsed time
// (floored at one second). Throws std::invalid_argument for window_s <= 0.
SupplyEstimate EstimateSupplyRates(std::span<const CheckIn> log, double now,
                                   double window_s, std::size_t num_atoms,
                                   double origin = 0.0);

// Incremental form of EstimateSupplyRates for the simulation loop. Check-ins
// are recorded per device so the estimate survives atom-table rebuilds.
class SupplyTracker {
 public:
  SupplyTracker(std::size_t num_devices, double window_s, double origin = 0.0);

  // `time` must be non-decreasing across calls.
  void Record(double time, std::size_t device_index);
  void Rebind(const AtomTable& atoms);
  SupplyEstimate Estimate(double now);

 private:
  void Expire(double now);

  double window_s_;
  double origin_;
  std::deque<std::pair<double, std::size_t>> log_;
  std::vector<int> per_device_;
  std::vector<AtomId> device_atoms_;
  std::vector<long long> per_atom_;
};

}  // namespace venn

#endif  // VENN_WORKLOAD_H_
