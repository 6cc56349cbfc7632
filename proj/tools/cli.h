// Run configuration and command implementations behind the `venn` binary.

#ifndef VENN_TOOLS_CLI_H_
#define VENN_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "venn/sim.h"
#include "venn/workload.h"

namespace venn::cli {

enum ExitCode {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitTrace = 3,
  kExitOracle = 4,
};

// Flat key = value configuration. `trace_path` and the synth_* keys are
// mutually exclusive in a config file.
struct RunConfig {
  std::string scheduler = "venn";
  std::string scenario = "even";
  int n_jobs = 50;
  double mean_interarrival_s = 1800.0;
  std::uint64_t seed = 1;
  std::uint64_t scheduler_seed = 1;

  std::string trace_path;
  int synth_devices = 20000;
  double synth_horizon_s = 14 * kSecondsPerDay;
  double synth_diurnal_amplitude = 0.5;
  double synth_sessions_per_day = 2.0;
  double synth_mean_session_s = 7200.0;

  std::string catalog_path;
  int catalog_templates = 200;
  int demand_min = 20;
  int demand_max = 200;
  int rounds_min = 5;
  int rounds_max = 40;
  double deadline_min_s = 300.0;
  double deadline_max_s = 900.0;
  double report_threshold = 0.8;

  double epsilon = 0.0;
  int tiers = 5;
  bool matching = true;
  std::string tier_choice = "random";

  double horizon_s = 0.0;
  double base_task_s = 60.0;
  double response_sigma = 0.5;
  double failure_probability = 0.05;

  std::string out_dir = "out";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Throws ConfigError with the offending line number.
RunConfig ParseRunConfig(std::istream& in);
RunConfig LoadRunConfig(const std::string& path);
// Every key, one per line, in a form ParseRunConfig reads back unchanged.
std::string FormatRunConfig(const RunConfig& config);
// Throws ConfigError.
void ValidateRunConfig(const RunConfig& config);

SimConfig ToSimConfig(const RunConfig& config);

// Everything a simulation needs besides the scheduler choice.
struct Inputs {
  DeviceTrace trace;
  std::vector<JobSpec> jobs;
};

// Loads or synthesizes the trace and samples the workload. Trace problems
// surface as ParseError or EmptyTraceError.
Inputs BuildInputs(const RunConfig& config);

// Catalog used when no catalog file is configured.
CatalogParams CatalogParamsOf(const RunConfig& config);
SynthTraceParams SynthParamsOf(const RunConfig& config);

// Writes `contents` to `path` through a temporary file and a rename.
void WriteFileAtomic(const std::string& path, const std::string& contents);

// Entry point shared by the binary and the tests.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace venn::cli

#endif  // VENN_TOOLS_CLI_H_
