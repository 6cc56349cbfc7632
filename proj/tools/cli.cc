#include "cli.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "venn/baselines.h"
#include "venn/eligibility.h"
#include "venn/errors.h"
#include "venn/irs.h"
#include "venn/matcher.h"
#include "venn/metrics.h"
#include "venn/oracle.h"
#include "venn/sim.h"

namespace venn::cli {
namespace {

namespace fs = std::filesystem;

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid value '" + text + "' for " + key);
  }
  return value;
}

bool ParseBool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("invalid boolean '" + text + "' for " + key);
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

struct Field {
  std::string key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

template <typename T>
Field NumberField(std::string key, T RunConfig::*member) {
  return {key,
          [member](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return FormatDouble(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          },
          [member, key](RunConfig& c, const std::string& v) {
            c.*member = ParseNumber<T>(key, v);
          }};
}

Field StringField(std::string key, std::string RunConfig::*member) {
  return {key, [member](const RunConfig& c) { return c.*member; },
          [member](RunConfig& c, const std::string& v) { c.*member = v; }};
}

Field BoolField(std::string key, bool RunConfig::*member) {
  return {key,
          [member](const RunConfig& c) {
            return std::string(c.*member ? "true" : "false");
          },
          [member, key](RunConfig& c, const std::string& v) {
            c.*member = ParseBool(key, v);
          }};
}

const std::vector<Field>& Fields() {
  static const std::vector<Field> kFields = {
      StringField("scheduler", &RunConfig::scheduler),
      StringField("scenario", &RunConfig::scenario),
      NumberField("n_jobs", &RunConfig::n_jobs),
      NumberField("mean_interarrival_s", &RunConfig::mean_interarrival_s),
      NumberField("seed", &RunConfig::seed),
      NumberField("scheduler_seed", &RunConfig::scheduler_seed),
      StringField("trace_path", &RunConfig::trace_path),
      NumberField("synth_devices", &RunConfig::synth_devices),
      NumberField("synth_horizon_s", &RunConfig::synth_horizon_s),
      NumberField("synth_diurnal_amplitude",
                  &RunConfig::synth_diurnal_amplitude),
      NumberField("synth_sessions_per_day",
                  &RunConfig::synth_sessions_per_day),
      NumberField("synth_mean_session_s", &RunConfig::synth_mean_session_s),
      StringField("catalog_path", &RunConfig::catalog_path),
      NumberField("catalog_templates", &RunConfig::catalog_templates),
      NumberField("demand_min", &RunConfig::demand_min),
      NumberField("demand_max", &RunConfig::demand_max),
      NumberField("rounds_min", &RunConfig::rounds_min),
      NumberField("rounds_max", &RunConfig::rounds_max),
      NumberField("deadline_min_s", &RunConfig::deadline_min_s),
      NumberField("deadline_max_s", &RunConfig::deadline_max_s),
      NumberField("report_threshold", &RunConfig::report_threshold),
      NumberField("epsilon", &RunConfig::epsilon),
      NumberField("tiers", &RunConfig::tiers),
      BoolField("matching", &RunConfig::matching),
      StringField("tier_choice", &RunConfig::tier_choice),
      NumberField("horizon_s", &RunConfig::horizon_s),
      NumberField("base_task_s", &RunConfig::base_task_s),
      NumberField("response_sigma", &RunConfig::response_sigma),
      NumberField("failure_probability", &RunConfig::failure_probability),
      StringField("out_dir", &RunConfig::out_dir),
  };
  return kFields;
}

bool IsSynthKey(const std::string& key) { return key.rfind("synth_", 0) == 0; }

TraceFormat FormatOf(const std::string& path) {
  return fs::path(path).extension() == ".csv" ? TraceFormat::kCsv
                                              : TraceFormat::kJsonl;
}

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

nlohmann::json ConfigJson(const RunConfig& config) {
  nlohmann::json j = nlohmann::json::object();
  for (const Field& f : Fields()) j[f.key] = f.get(config);
  return j;
}

double Quantile(std::vector<double> v, double p) { return Percentile(std::move(v), p); }

// Flag overrides shared by the simulation commands.
struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheduler;
  std::optional<double> epsilon;
  std::optional<int> tiers;
  bool no_matching = false;
  std::optional<std::string> out_dir;

  void Register(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Run configuration file");
    cmd->add_option("--seed", seed, "Environment seed");
    cmd->add_option("--scheduler", scheduler, "venn, fifo, srsf or random");
    cmd->add_option("--epsilon", epsilon, "Fairness knob");
    cmd->add_option("--tiers", tiers, "Number of capacity tiers");
    cmd->add_flag("--no-matching", no_matching, "Disable tier matching");
    cmd->add_option("--out", out_dir, "Output directory");
  }

  RunConfig Resolve() const {
    RunConfig c = config_path.empty() ? RunConfig{} : LoadRunConfig(config_path);
    if (seed) c.seed = *seed;
    if (scheduler) c.scheduler = *scheduler;
    if (epsilon) c.epsilon = *epsilon;
    if (tiers) c.tiers = *tiers;
    if (no_matching) c.matching = false;
    if (out_dir) c.out_dir = *out_dir;
    ValidateRunConfig(c);
    return c;
  }
};

std::string ReportCsv(const MetricsReport& report) {
  std::ostringstream out;
  WriteReportCsv(out, report);
  return out.str();
}

int CmdSimulate(const Overrides& ov, std::ostream& out) {
  const RunConfig config = ov.Resolve();
  const Inputs inputs = BuildInputs(config);
  SimConfig sim = ToSimConfig(config);
  sim.run_id = config.scheduler + "-" + std::to_string(config.seed);
  const MetricsReport report = Run(sim, inputs.trace, inputs.jobs).report;
  double speedup = 1.0;
  if (config.scheduler != "random") {
    SimConfig base = sim;
    base.scheduler = "random";
    base.run_id = "random-" + std::to_string(config.seed);
    speedup = Speedup(Run(base, inputs.trace, inputs.jobs).report, report);
  }

  fs::create_directories(config.out_dir);
  WriteFileAtomic((fs::path(config.out_dir) / "report.csv").string(),
                  ReportCsv(report));
  nlohmann::json summary;
  summary["scheduler"] = config.scheduler;
  summary["avg_jct_s"] = report.avg_jct();
  summary["speedup_vs_random"] = speedup;
  summary["fairness_ratio"] = report.fairness_ratio();
  summary["completed_jobs"] = report.completed_jobs();
  summary["warnings"] = report.warnings;
  summary["config"] = ConfigJson(config);
  WriteFileAtomic((fs::path(config.out_dir) / "summary.json").string(),
                  summary.dump(2) + "\n");
  out << "avg_jct_s " << FormatDouble(report.avg_jct()) << '\n';
  return kExitOk;
}

struct CompareArgs {
  Overrides ov;
  std::string schedulers = "venn,srsf,fifo,random";
  std::string seeds = "1";
  std::string scenarios;
  int jobs = 1;
};

int CmdCompare(const CompareArgs& args, std::ostream& out) {
  const RunConfig config = args.ov.Resolve();
  std::vector<std::string> schedulers = SplitList(args.schedulers);
  for (const std::string& s : schedulers) {
    if (!IsSchedulerName(s)) throw ConfigError("unknown scheduler '" + s + "'");
  }
  if (std::find(schedulers.begin(), schedulers.end(), "random") ==
      schedulers.end()) {
    schedulers.push_back("random");
  }
  std::vector<std::uint64_t> seeds;
  for (const std::string& s : SplitList(args.seeds)) {
    seeds.push_back(ParseNumber<std::uint64_t>("--seeds", s));
  }
  if (seeds.empty()) throw ConfigError("--seeds is empty");
  std::vector<std::string> scenarios = args.scenarios.empty()
                                           ? std::vector{config.scenario}
                                           : SplitList(args.scenarios);
  if (args.jobs < 1) throw ConfigError("--jobs must be >= 1");

  std::vector<Inputs> inputs;
  for (const std::string& sc : scenarios) {
    RunConfig c = config;
    c.scenario = sc;
    ValidateRunConfig(c);
    inputs.push_back(BuildInputs(c));
  }

  struct Cell {
    std::size_t scenario;
    std::string scheduler;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (std::size_t sc = 0; sc < scenarios.size(); ++sc) {
    for (const std::string& name : schedulers) {
      for (std::uint64_t seed : seeds) cells.push_back({sc, name, seed});
    }
  }
  std::vector<LabeledReport> runs(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        const Cell& cell = cells[i];
        SimConfig sim = ToSimConfig(config);
        sim.scheduler = cell.scheduler;
        sim.scheduler_seed = cell.seed;
        sim.run_id = scenarios[cell.scenario] + "-" + cell.scheduler + "-" +
                     std::to_string(cell.seed);
        runs[i].scenario = scenarios[cell.scenario];
        runs[i].seed = cell.seed;
        runs[i].epsilon = config.epsilon;
        runs[i].report = Run(sim, inputs[cell.scenario].trace,
                             inputs[cell.scenario].jobs)
                             .report;
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const int threads = std::min<int>(args.jobs, static_cast<int>(cells.size()));
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  const std::vector<ComparisonRow> rows = Aggregate(runs, "random");
  const std::vector<ComparisonRow> table = Summarize(rows);
  std::ostringstream per_seed;
  WriteComparisonCsv(per_seed, rows, true);
  std::ostringstream summary;
  WriteComparisonCsv(summary, table, false);
  fs::create_directories(config.out_dir);
  WriteFileAtomic((fs::path(config.out_dir) / "comparison.csv").string(),
                  per_seed.str());
  WriteFileAtomic((fs::path(config.out_dir) / "summary.csv").string(),
                  summary.str());
  for (const ComparisonRow& r : table) {
    out << r.scheduler << ' ' << r.scenario << " speedup "
        << FormatDouble(r.speedup) << '\n';
  }
  return kExitOk;
}

struct OracleArgs {
  int instances = 200;
  std::size_t max_devices = 10;
  std::size_t max_jobs = 4;
  int max_demand = 3;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
};

int CmdOracleCheck(const OracleArgs& args, std::ostream& out) {
  if (args.instances < 1) throw ConfigError("--instances must be >= 1");
  if (args.max_devices < 1 || args.max_jobs < 1 || args.max_demand < 1) {
    throw ConfigError("instance caps must be positive");
  }
  OracleLimits limits;
  if (args.max_devices > limits.max_devices || args.max_jobs > limits.max_jobs) {
    throw ConfigError("caps exceed the exact solver's limits");
  }
  Rng rng = MakeStream(args.seed, "oracle-instances");
  InstanceGenParams gen{args.max_devices, args.max_jobs, args.max_demand};
  IrsOptions irs;
  irs.matching = false;

  std::ostringstream csv;
  csv << "instance,devices,jobs,optimum,venn,gap\n";
  std::vector<double> gaps;
  int within = 0;
  int equal = 0;
  int below = 0;
  for (int k = 0; k < args.instances; ++k) {
    const ExactInstance inst = RandomInstance(gen, rng);
    const double opt = SolveExact(inst, limits).average;
    IrsScheduler venn(irs, MakeStream(args.seed, streams::kMatcher));
    const double got = ReplayInstance(inst, venn).average;
    const double gap = got / opt - 1.0;
    gaps.push_back(gap);
    if (got < opt - 1e-9) ++below;
    if (std::abs(got - opt) <= 1e-9) ++equal;
    if (got <= 1.25 * opt + 1e-9) ++within;
    csv << k << ',' << inst.num_devices() << ',' << inst.num_jobs() << ','
        << FormatDouble(opt) << ',' << FormatDouble(got) << ','
        << FormatDouble(gap) << '\n';
  }
  const double n = args.instances;
  std::ostringstream report;
  report << "instances,p50_gap,p90_gap,max_gap,within_1.25,equal,below\n"
         << args.instances << ',' << FormatDouble(Quantile(gaps, 0.5)) << ','
         << FormatDouble(Quantile(gaps, 0.9)) << ','
         << FormatDouble(*std::max_element(gaps.begin(), gaps.end())) << ','
         << FormatDouble(within / n) << ',' << FormatDouble(equal / n) << ','
         << below << '\n';
  fs::create_directories(args.out_dir);
  WriteFileAtomic((fs::path(args.out_dir) / "oracle_gaps.csv").string(),
                  csv.str());
  WriteFileAtomic((fs::path(args.out_dir) / "oracle_summary.csv").string(),
                  report.str());
  out << report.str();
  const bool ok = within / n >= 0.9 && equal / n >= 0.5 && below == 0;
  return ok ? kExitOk : kExitOracle;
}

struct GenArgs {
  std::string config_path;
  std::string scenario = "even";
  std::optional<int> n_jobs;
  std::optional<std::uint64_t> seed;
  std::string out_path;
};

int CmdGenWorkload(const GenArgs& args, std::ostream& out) {
  RunConfig config =
      args.config_path.empty() ? RunConfig{} : LoadRunConfig(args.config_path);
  config.scenario = args.scenario;
  if (args.n_jobs) config.n_jobs = *args.n_jobs;
  if (args.seed) config.seed = *args.seed;
  ValidateRunConfig(config);
  std::vector<JobSpec> catalog;
  if (config.catalog_path.empty()) {
    catalog = GenerateCatalog(CatalogParamsOf(config));
  } else {
    std::ifstream in(config.catalog_path);
    if (!in) throw ConfigError("cannot read catalog " + config.catalog_path);
    catalog = LoadJobCatalog(in, FormatOf(config.catalog_path));
  }
  WorkloadScenario ws;
  ws.name = *ParseScenario(config.scenario);
  ws.n_jobs = config.n_jobs;
  ws.mean_interarrival_s = config.mean_interarrival_s;
  ws.seed = config.seed;
  const auto specs = StandardSpecs();
  const std::vector<JobSpec> jobs = SampleWorkload(ws, catalog, specs);
  std::ostringstream body;
  WriteJobCatalog(body, jobs, true);
  if (args.out_path.empty()) {
    out << body.str();
  } else {
    const fs::path parent = fs::path(args.out_path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    WriteFileAtomic(args.out_path, body.str());
  }
  return kExitOk;
}

}  // namespace

RunConfig ParseRunConfig(std::istream& in) {
  RunConfig config;
  std::map<std::string, const Field*> by_key;
  for (const Field& f : Fields()) by_key[f.key] = &f;
  std::set<std::string> seen;
  bool any_synth = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = Trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    }
    const std::string key = Trim(std::string_view(text).substr(0, eq));
    const std::string value = Trim(std::string_view(text).substr(eq + 1));
    const auto it = by_key.find(key);
    if (it == by_key.end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" +
                        key + "'");
    }
    try {
      it->second->set(config, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
    any_synth = any_synth || IsSynthKey(key);
  }
  if (any_synth && !config.trace_path.empty()) {
    throw ConfigError("trace_path and synth_* keys are mutually exclusive");
  }
  return config;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  return ParseRunConfig(in);
}

std::string FormatRunConfig(const RunConfig& config) {
  std::string out;
  for (const Field& f : Fields()) {
    if (!config.trace_path.empty() && IsSynthKey(f.key)) continue;
    out += f.key + " = " + f.get(config) + "\n";
  }
  return out;
}

void ValidateRunConfig(const RunConfig& c) {
  if (!IsSchedulerName(c.scheduler)) {
    throw ConfigError("unknown scheduler '" + c.scheduler + "'");
  }
  if (!ParseScenario(c.scenario)) {
    throw ConfigError("unknown scenario '" + c.scenario + "'");
  }
  if (c.n_jobs < 0) throw ConfigError("n_jobs must be >= 0");
  if (!(c.mean_interarrival_s > 0.0)) {
    throw ConfigError("mean_interarrival_s must be positive");
  }
  if (c.tier_choice != "random" && c.tier_choice != "rotate") {
    throw ConfigError("tier_choice must be random or rotate");
  }
  if (!c.trace_path.empty() && !fs::exists(c.trace_path)) {
    throw ConfigError("trace file " + c.trace_path + " does not exist");
  }
  if (!c.catalog_path.empty() && !fs::exists(c.catalog_path)) {
    throw ConfigError("catalog file " + c.catalog_path + " does not exist");
  }
  if (c.demand_min < 1 || c.demand_max < c.demand_min || c.rounds_min < 1 ||
      c.rounds_max < c.rounds_min || c.catalog_templates < 1) {
    throw ConfigError("invalid catalog ranges");
  }
  if (!(c.report_threshold > 0.0 && c.report_threshold <= 1.0)) {
    throw ConfigError("report_threshold must lie in (0, 1]");
  }
  ValidateSimConfig(ToSimConfig(c));
}

SimConfig ToSimConfig(const RunConfig& c) {
  SimConfig s;
  s.scheduler = c.scheduler;
  s.irs.epsilon = c.epsilon;
  s.irs.num_tiers = c.tiers;
  s.irs.matching = c.matching;
  s.irs.tier_choice =
      c.tier_choice == "rotate" ? TierChoice::kRotate : TierChoice::kRandom;
  s.response.base_task_seconds = c.base_task_s;
  s.response.sigma = c.response_sigma;
  s.response.failure_probability = c.failure_probability;
  s.horizon_s = c.horizon_s;
  s.seed = c.seed;
  s.scheduler_seed = c.scheduler_seed;
  return s;
}

CatalogParams CatalogParamsOf(const RunConfig& c) {
  CatalogParams p;
  p.n_templates = c.catalog_templates;
  p.demand_min = c.demand_min;
  p.demand_max = c.demand_max;
  p.rounds_min = c.rounds_min;
  p.rounds_max = c.rounds_max;
  p.deadline_min_s = c.deadline_min_s;
  p.deadline_max_s = c.deadline_max_s;
  p.report_threshold = c.report_threshold;
  p.seed = c.seed;
  return p;
}

SynthTraceParams SynthParamsOf(const RunConfig& c) {
  SynthTraceParams p;
  p.n_devices = c.synth_devices;
  p.horizon_s = c.synth_horizon_s;
  p.diurnal_amplitude = c.synth_diurnal_amplitude;
  p.sessions_per_day = c.synth_sessions_per_day;
  p.mean_session_s = c.synth_mean_session_s;
  p.seed = c.seed;
  return p;
}

Inputs BuildInputs(const RunConfig& c) {
  Inputs inputs;
  if (c.trace_path.empty()) {
    inputs.trace = SynthDeviceTrace(SynthParamsOf(c));
  } else {
    std::ifstream in(c.trace_path);
    if (!in) throw EmptyTraceError();
    inputs.trace = LoadDeviceTrace(in, FormatOf(c.trace_path));
  }
  std::vector<JobSpec> catalog;
  if (c.catalog_path.empty()) {
    catalog = GenerateCatalog(CatalogParamsOf(c));
  } else {
    std::ifstream in(c.catalog_path);
    if (!in) throw ConfigError("cannot read catalog " + c.catalog_path);
    try {
      catalog = LoadJobCatalog(in, FormatOf(c.catalog_path));
    } catch (const ParseError& e) {
      throw ConfigError(std::string("catalog ") + e.what());
    }
  }
  WorkloadScenario ws;
  ws.name = *ParseScenario(c.scenario);
  ws.n_jobs = c.n_jobs;
  ws.mean_interarrival_s = c.mean_interarrival_s;
  ws.seed = c.seed;
  const auto specs = StandardSpecs();
  inputs.jobs = SampleWorkload(ws, catalog, specs);
  return inputs;
}

void WriteFileAtomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << contents;
    out.close();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("failed writing " + tmp);
    }
  }
  fs::rename(tmp, path);
}

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Multi-job device scheduling simulator"};
  app.require_subcommand(1);

  Overrides sim_ov;
  CLI::App* simulate = app.add_subcommand("simulate", "Run one simulation");
  sim_ov.Register(simulate);

  CompareArgs cmp;
  CLI::App* compare =
      app.add_subcommand("compare", "Compare schedulers across seeds");
  cmp.ov.Register(compare);
  compare->add_option("--schedulers", cmp.schedulers,
                      "Comma-separated scheduler names");
  compare->add_option("--seeds", cmp.seeds,
                      "Comma-separated scheduler seeds");
  compare->add_option("--scenarios", cmp.scenarios,
                      "Comma-separated workload scenarios");
  compare->add_option("--jobs", cmp.jobs, "Parallel simulations");

  OracleArgs orc;
  CLI::App* oracle = app.add_subcommand(
      "oracle-check", "Measure the optimality gap on small instances");
  oracle->add_option("--instances", orc.instances, "Number of instances");
  oracle->add_option("--max-devices", orc.max_devices, "Device cap");
  oracle->add_option("--max-jobs", orc.max_jobs, "Job cap");
  oracle->add_option("--max-demand", orc.max_demand, "Per-job demand cap");
  oracle->add_option("--seed", orc.seed, "Instance seed");
  oracle->add_option("--out", orc.out_dir, "Output directory");

  GenArgs gen;
  CLI::App* gen_cmd =
      app.add_subcommand("gen-workload", "Write a sampled job workload");
  gen_cmd->add_option("--config", gen.config_path, "Run configuration file");
  gen_cmd->add_option("--scenario", gen.scenario,
                      "even, small, large, low or high");
  gen_cmd->add_option("--n-jobs", gen.n_jobs, "Number of jobs");
  gen_cmd->add_option("--seed", gen.seed, "Workload seed");
  gen_cmd->add_option("--out", gen.out_path, "Output JSONL path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (simulate->parsed()) return CmdSimulate(sim_ov, out);
    if (compare->parsed()) return CmdCompare(cmp, out);
    if (oracle->parsed()) return CmdOracleCheck(orc, out);
    if (gen_cmd->parsed()) return CmdGenWorkload(gen, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const EmptyCatalogError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "trace error: " << e.what() << '\n';
    return kExitTrace;
  } catch (const EmptyTraceError& e) {
    err << "trace error: " << e.what() << '\n';
    return kExitTrace;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace venn::cli
