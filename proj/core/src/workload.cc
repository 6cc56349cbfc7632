#include "venn/workload.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "venn/errors.h"
#include "venn/random.h"

namespace venn {
namespace {

using nlohmann::json;

std::vector<std::string> Split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    out.emplace_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double ParseNumber(const std::string& field, std::size_t line,
                   std::string_view name) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "field '" + std::string(name) +
                               "' is not a number: '" + field + "'");
  }
}

TagSet ParseTagList(const std::string& field) {
  std::vector<std::string> tags;
  if (!field.empty()) {
    for (auto& t : Split(field, '|')) {
      if (!t.empty()) tags.push_back(Trim(t));
    }
  }
  return TagSet(std::move(tags));
}

// Maps CSV header names to column positions; throws if any are missing.
std::vector<std::size_t> ResolveColumns(const std::string& header,
                                        std::span<const std::string_view> want) {
  const auto names = Split(header, ',');
  std::vector<std::size_t> cols;
  for (auto w : want) {
    auto it = std::find_if(names.begin(), names.end(),
                           [&](const std::string& n) { return Trim(n) == w; });
    if (it == names.end()) {
      throw ParseError(1, "missing CSV column '" + std::string(w) + "'");
    }
    cols.push_back(static_cast<std::size_t>(it - names.begin()));
  }
  return cols;
}

void FinishDevice(DeviceProfile& d, std::size_t line,
                  std::unordered_set<std::string>& seen) {
  try {
    ValidateDevice(d);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
  if (!seen.insert(d.device_id).second) {
    throw ParseError(line, "duplicate device id '" + d.device_id + "'");
  }
}

DeviceProfile DeviceFromJson(const json& j, std::size_t line) {
  try {
    DeviceProfile d;
    d.device_id = j.at("id").get<std::string>();
    d.cpu_score = j.at("cpu").get<double>();
    d.memory_gb = j.at("mem_gb").get<double>();
    d.tags = TagSet(j.value("tags", std::vector<std::string>{}));
    d.speed_factor = j.value("speed", 1.0);
    for (const auto& iv : j.at("avail")) {
      if (!iv.is_array() || iv.size() != 2) {
        throw ParseError(line, "availability entries must be [start, end]");
      }
      d.availability.push_back({iv[0].get<double>(), iv[1].get<double>()});
    }
    return d;
  } catch (const json::exception& e) {
    throw ParseError(line, e.what());
  }
}

JobSpec JobFromJson(const json& j, std::size_t line) {
  try {
    JobSpec job;
    job.job_id = j.at("id").get<std::string>();
    job.total_rounds = j.at("rounds").get<int>();
    job.round_demand = j.at("demand").get<int>();
    const json& spec = j.at("spec");
    job.spec.min_cpu = spec.value("min_cpu", 0.0);
    job.spec.min_memory_gb = spec.value("min_mem_gb", 0.0);
    job.spec.required_tags =
        TagSet(spec.value("tags", std::vector<std::string>{}));
    job.deadline_seconds = j.at("deadline_s").get<double>();
    job.report_threshold = j.value("threshold", 0.8);
    job.arrival_time = j.value("arrival_s", 0.0);
    return job;
  } catch (const json::exception& e) {
    throw ParseError(line, e.what());
  }
}

int LogUniformInt(Rng& rng, int lo, int hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi + 1.0));
  return std::clamp(static_cast<int>(std::floor(std::exp(u(rng)))), lo, hi);
}

}  // namespace

DeviceTrace LoadDeviceTrace(std::istream& in, TraceFormat format) {
  DeviceTrace trace;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;

  if (format == TraceFormat::kJsonl) {
    while (std::getline(in, line)) {
      ++line_no;
      if (Trim(line).empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ParseError(line_no, e.what());
      }
      DeviceProfile d = DeviceFromJson(j, line_no);
      FinishDevice(d, line_no, seen);
      trace.devices.push_back(std::move(d));
    }
  } else {
    if (!std::getline(in, line)) throw EmptyTraceError();
    ++line_no;
    static constexpr std::string_view kCols[] = {"id",    "cpu",   "mem_gb",
                                                 "tags",  "speed", "avail"};
    const auto cols = ResolveColumns(line, kCols);
    while (std::getline(in, line)) {
      ++line_no;
      if (Trim(line).empty()) continue;
      const auto f = Split(line, ',');
      if (f.size() <= *std::max_element(cols.begin(), cols.end())) {
        throw ParseError(line_no, "too few fields");
      }
      DeviceProfile d;
      d.device_id = Trim(f[cols[0]]);
      d.cpu_score = ParseNumber(Trim(f[cols[1]]), line_no, "cpu");
      d.memory_gb = ParseNumber(Trim(f[cols[2]]), line_no, "mem_gb");
      d.tags = ParseTagList(Trim(f[cols[3]]));
      d.speed_factor = ParseNumber(Trim(f[cols[4]]), line_no, "speed");
      const std::string avail = Trim(f[cols[5]]);
      if (!avail.empty()) {
        for (const auto& piece : Split(avail, '|')) {
          const auto se = Split(piece, ':');
          if (se.size() != 2) throw ParseError(line_no, "bad interval");
          d.availability.push_back(
              {ParseNumber(Trim(se[0]), line_no, "avail"),
               ParseNumber(Trim(se[1]), line_no, "avail")});
        }
      }
      FinishDevice(d, line_no, seen);
      trace.devices.push_back(std::move(d));
    }
  }
  if (trace.devices.empty()) throw EmptyTraceError();
  for (const auto& d : trace.devices) {
    if (!d.availability.empty()) {
      trace.horizon_s = std::max(trace.horizon_s, d.availability.back().end);
    }
  }
  return trace;
}

void WriteDeviceTrace(std::ostream& out, const DeviceTrace& trace) {
  for (const auto& d : trace.devices) {
    json j;
    j["id"] = d.device_id;
    j["cpu"] = d.cpu_score;
    j["mem_gb"] = d.memory_gb;
    j["tags"] = d.tags.values();
    j["speed"] = d.speed_factor;
    json avail = json::array();
    for (const auto& iv : d.availability) avail.push_back({iv.start, iv.end});
    j["avail"] = std::move(avail);
    out << j.dump() << '\n';
  }
}

DeviceTrace SynthDeviceTrace(const SynthTraceParams& p) {
  if (p.n_devices < 1) throw ConfigError("n_devices must be >= 1");
  if (!(p.horizon_s > 0.0)) throw ConfigError("horizon_s must be positive");
  if (!(p.diurnal_amplitude >= 0.0 && p.diurnal_amplitude <= 1.0)) {
    throw ConfigError("diurnal_amplitude must lie in [0, 1]");
  }
  if (!(p.sessions_per_day > 0.0) || !(p.mean_session_s > 0.0)) {
    throw ConfigError("session rate and length must be positive");
  }
  const double weight_sum =
      std::accumulate(p.capacity_mix.weights.begin(),
                      p.capacity_mix.weights.end(), 0.0);
  if (!(weight_sum > 0.0) ||
      std::any_of(p.capacity_mix.weights.begin(), p.capacity_mix.weights.end(),
                  [](double w) { return w < 0.0; })) {
    throw ConfigError("capacity mix weights must be non-negative");
  }

  Rng rng = MakeStream(p.seed, streams::kTrace);
  std::discrete_distribution<int> region(p.capacity_mix.weights.begin(),
                                         p.capacity_mix.weights.end());
  std::uniform_real_distribution<double> low(1.0, kRichCpuThreshold);
  std::uniform_real_distribution<double> high(kRichCpuThreshold, 8.0);
  std::uniform_real_distribution<double> low_mem(1.0, kRichMemoryGb);
  std::uniform_real_distribution<double> high_mem(kRichMemoryGb, 8.0);
  std::lognormal_distribution<double> jitter(0.0, 0.35);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> when(0.0, p.horizon_s);
  std::exponential_distribution<double> session(1.0 / p.mean_session_s);
  std::poisson_distribution<int> n_sessions(p.sessions_per_day * p.horizon_s /
                                            kSecondsPerDay);
  // Typical task slowdown of each region relative to the reference device.
  static constexpr std::array<double, 4> kRegionSpeed = {1.6, 0.9, 1.3, 0.6};

  DeviceTrace trace;
  trace.horizon_s = p.horizon_s;
  trace.devices.reserve(p.n_devices);
  const int width = std::max(6, static_cast<int>(std::to_string(p.n_devices).size()));
  for (int i = 0; i < p.n_devices; ++i) {
    DeviceProfile d;
    std::ostringstream id;
    id << 'd' << std::setw(width) << std::setfill('0') << i;
    d.device_id = id.str();
    const int r = region(rng);
    const auto cls = kAllDeviceClasses[r];
    const bool rich_cpu = cls == DeviceClass::kComputeRich ||
                          cls == DeviceClass::kHighPerformance;
    const bool rich_mem = cls == DeviceClass::kMemoryRich ||
                          cls == DeviceClass::kHighPerformance;
    d.cpu_score = rich_cpu ? high(rng) : low(rng);
    d.memory_gb = rich_mem ? high_mem(rng) : low_mem(rng);
    d.speed_factor = kRegionSpeed[r] * jitter(rng);

    // Onsets by thinning a flat proposal against 1 + A sin(2 pi t / day).
    std::vector<double> onsets;
    const int n = n_sessions(rng);
    for (int k = 0; k < n; ++k) {
      double t = 0.0;
      do {
        t = when(rng);
      } while (unit(rng) * (1.0 + p.diurnal_amplitude) >
               1.0 + p.diurnal_amplitude *
                         std::sin(2.0 * std::numbers::pi * t / kSecondsPerDay));
      onsets.push_back(t);
    }
    std::sort(onsets.begin(), onsets.end());
    for (std::size_t k = 0; k < onsets.size(); ++k) {
      double end = onsets[k] + session(rng);
      if (k + 1 < onsets.size()) end = std::min(end, onsets[k + 1]);
      end = std::min(end, p.horizon_s);
      if (onsets[k] < end) d.availability.push_back({onsets[k], end});
    }
    trace.devices.push_back(std::move(d));
  }
  return trace;
}

std::string_view ToString(Scenario s) {
  switch (s) {
    case Scenario::kEven:
      return "Even";
    case Scenario::kSmall:
      return "Small";
    case Scenario::kLarge:
      return "Large";
    case Scenario::kLow:
      return "Low";
    case Scenario::kHigh:
      return "High";
  }
  return "?";
}

std::optional<Scenario> ParseScenario(std::string_view name) {
  for (Scenario s : {Scenario::kEven, Scenario::kSmall, Scenario::kLarge,
                     Scenario::kLow, Scenario::kHigh}) {
    const std::string_view canon = ToString(s);
    if (canon.size() == name.size() &&
        std::equal(canon.begin(), canon.end(), name.begin(),
                   [](char a, char b) {
                     return std::tolower(static_cast<unsigned char>(a)) ==
                            std::tolower(static_cast<unsigned char>(b));
                   })) {
      return s;
    }
  }
  return std::nullopt;
}

std::vector<JobSpec> GenerateCatalog(const CatalogParams& p) {
  if (p.n_templates < 1 || p.demand_min < 1 || p.demand_max < p.demand_min ||
      p.rounds_min < 1 || p.rounds_max < p.rounds_min) {
    throw ConfigError("invalid catalog parameters");
  }
  Rng rng = MakeStream(p.seed, streams::kCatalog);
  std::vector<JobSpec> catalog;
  catalog.reserve(p.n_templates);
  for (int i = 0; i < p.n_templates; ++i) {
    JobSpec job;
    std::ostringstream id;
    id << 't' << std::setw(4) << std::setfill('0') << i;
    job.job_id = id.str();
    job.round_demand = LogUniformInt(rng, p.demand_min, p.demand_max);
    job.total_rounds = LogUniformInt(rng, p.rounds_min, p.rounds_max);
    job.report_threshold = p.report_threshold;
    catalog.push_back(std::move(job));
  }
  AssignDeadlines(catalog, p.deadline_min_s, p.deadline_max_s);
  return catalog;
}

void AssignDeadlines(std::span<JobSpec> catalog, double min_s, double max_s) {
  if (catalog.empty()) return;
  auto [lo, hi] = std::minmax_element(
      catalog.begin(), catalog.end(), [](const JobSpec& a, const JobSpec& b) {
        return a.round_demand < b.round_demand;
      });
  const double dmin = lo->round_demand;
  const double dmax = hi->round_demand;
  for (JobSpec& job : catalog) {
    const double frac =
        dmax > dmin ? (job.round_demand - dmin) / (dmax - dmin) : 0.0;
    job.deadline_seconds = min_s + frac * (max_s - min_s);
  }
}

std::vector<JobSpec> LoadJobCatalog(std::istream& in, TraceFormat format) {
  std::vector<JobSpec> jobs;
  std::string line;
  std::size_t line_no = 0;
  auto finish = [&](JobSpec job) {
    try {
      ValidateJob(job);
    } catch (const std::invalid_argument& e) {
      throw ParseError(line_no, e.what());
    }
    jobs.push_back(std::move(job));
  };
  if (format == TraceFormat::kJsonl) {
    while (std::getline(in, line)) {
      ++line_no;
      if (Trim(line).empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error& e) {
        throw ParseError(line_no, e.what());
      }
      finish(JobFromJson(j, line_no));
    }
  } else {
    if (!std::getline(in, line)) throw EmptyTraceError();
    ++line_no;
    static constexpr std::string_view kCols[] = {
        "id", "rounds", "demand", "min_cpu", "min_mem_gb", "tags",
        "deadline_s", "threshold"};
    const auto cols = ResolveColumns(line, kCols);
    const auto header = Split(line, ',');
    std::optional<std::size_t> arrival_col;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (Trim(header[c]) == "arrival_s") arrival_col = c;
    }
    while (std::getline(in, line)) {
      ++line_no;
      if (Trim(line).empty()) continue;
      const auto f = Split(line, ',');
      if (f.size() <= *std::max_element(cols.begin(), cols.end())) {
        throw ParseError(line_no, "too few fields");
      }
      JobSpec job;
      job.job_id = Trim(f[cols[0]]);
      job.total_rounds =
          static_cast<int>(ParseNumber(Trim(f[cols[1]]), line_no, "rounds"));
      job.round_demand =
          static_cast<int>(ParseNumber(Trim(f[cols[2]]), line_no, "demand"));
      job.spec.min_cpu = ParseNumber(Trim(f[cols[3]]), line_no, "min_cpu");
      job.spec.min_memory_gb =
          ParseNumber(Trim(f[cols[4]]), line_no, "min_mem_gb");
      job.spec.required_tags = ParseTagList(Trim(f[cols[5]]));
      job.deadline_seconds =
          ParseNumber(Trim(f[cols[6]]), line_no, "deadline_s");
      job.report_threshold =
          ParseNumber(Trim(f[cols[7]]), line_no, "threshold");
      if (arrival_col && *arrival_col < f.size()) {
        job.arrival_time =
            ParseNumber(Trim(f[*arrival_col]), line_no, "arrival_s");
      }
      finish(std::move(job));
    }
  }
  if (jobs.empty()) throw EmptyTraceError();
  return jobs;
}

void WriteJobCatalog(std::ostream& out, std::span<const JobSpec> jobs,
                     bool include_arrival) {
  for (const JobSpec& job : jobs) {
    json j;
    j["id"] = job.job_id;
    j["rounds"] = job.total_rounds;
    j["demand"] = job.round_demand;
    j["spec"] = {{"min_cpu", job.spec.min_cpu},
                 {"min_mem_gb", job.spec.min_memory_gb},
                 {"tags", job.spec.required_tags.values()}};
    j["deadline_s"] = job.deadline_seconds;
    j["threshold"] = job.report_threshold;
    if (include_arrival) j["arrival_s"] = job.arrival_time;
    out << j.dump() << '\n';
  }
}

std::vector<JobSpec> SampleWorkload(
    const WorkloadScenario& scenario, std::span<const JobSpec> catalog,
    std::span<const EligibilitySpec> device_specs) {
  if (catalog.empty()) throw EmptyCatalogError("job catalog is empty");
  if (scenario.n_jobs < 0 || !(scenario.mean_interarrival_s > 0.0)) {
    throw ConfigError("invalid workload scenario parameters");
  }

  auto key = [&](const JobSpec& j) -> double {
    switch (scenario.name) {
      case Scenario::kSmall:
      case Scenario::kLarge:
        return static_cast<double>(j.total_demand());
      default:
        return j.round_demand;
    }
  };
  double mean = 0.0;
  for (const auto& j : catalog) mean += key(j);
  mean /= static_cast<double>(catalog.size());

  std::vector<const JobSpec*> pool;
  for (const auto& j : catalog) {
    switch (scenario.name) {
      case Scenario::kEven:
        pool.push_back(&j);
        break;
      case Scenario::kSmall:
      case Scenario::kLow:
        if (key(j) < mean) pool.push_back(&j);
        break;
      case Scenario::kLarge:
      case Scenario::kHigh:
        if (key(j) > mean) pool.push_back(&j);
        break;
    }
  }
  if (pool.empty()) {
    throw EmptyCatalogError("no catalog entries match scenario " +
                            std::string(ToString(scenario.name)));
  }

  Rng rng = MakeStream(scenario.seed, streams::kWorkload);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::exponential_distribution<double> gap(1.0 / scenario.mean_interarrival_s);
  std::vector<JobSpec> jobs;
  jobs.reserve(scenario.n_jobs);
  double now = 0.0;
  const int width = std::max(3, static_cast<int>(std::to_string(scenario.n_jobs).size()));
  for (int i = 0; i < scenario.n_jobs; ++i) {
    now += gap(rng);
    JobSpec job = *pool[pick(rng)];
    std::ostringstream id;
    id << "job-" << std::setw(width) << std::setfill('0') << i;
    job.job_id = id.str();
    job.arrival_time = now;
    if (!device_specs.empty()) {
      std::uniform_int_distribution<std::size_t> spec(0, device_specs.size() - 1);
      job.spec = device_specs[spec(rng)];
    }
    jobs.push_back(std::move(job));
  }
  return jobs;
}

double SupplyEstimate::total() const {
  return std::accumulate(rates.begin(), rates.end(), 0.0);
}

double SupplyEstimate::RateOf(const AtomSet& atoms) const {
  double sum = 0.0;
  for (AtomId a : atoms.ToVector()) sum += rate(a);
  return sum;
}

namespace {
double Divisor(double now, double window_s, double origin) {
  const double elapsed = now - origin;
  if (elapsed >= window_s) return window_s;
  return std::max(elapsed, 1.0);
}
}  // namespace

SupplyEstimate EstimateSupplyRates(std::span<const CheckIn> log, double now,
                                   double window_s, std::size_t num_atoms,
                                   double origin) {
  if (!(window_s > 0.0)) throw std::invalid_argument("window_s must be > 0");
  SupplyEstimate est;
  est.window_s = window_s;
  est.rates.assign(num_atoms, 0.0);
  for (const CheckIn& c : log) {
    if (c.time > now - window_s && c.time <= now) {
      if (static_cast<std::size_t>(c.atom) >= est.rates.size()) {
        est.rates.resize(c.atom + 1, 0.0);
      }
      est.rates[c.atom] += 1.0;
    }
  }
  const double div = Divisor(now, window_s, origin);
  for (double& r : est.rates) r /= div;
  return est;
}

SupplyTracker::SupplyTracker(std::size_t num_devices, double window_s,
                             double origin)
    : window_s_(window_s), origin_(origin), per_device_(num_devices, 0) {
  if (!(window_s > 0.0)) throw std::invalid_argument("window_s must be > 0");
}

void SupplyTracker::Record(double time, std::size_t device_index) {
  log_.emplace_back(time, device_index);
  ++per_device_.at(device_index);
  if (!device_atoms_.empty()) ++per_atom_[device_atoms_[device_index]];
}

void SupplyTracker::Rebind(const AtomTable& atoms) {
  device_atoms_.assign(atoms.device_atoms().begin(), atoms.device_atoms().end());
  per_atom_.assign(atoms.size(), 0);
  for (std::size_t d = 0; d < per_device_.size() && d < device_atoms_.size();
       ++d) {
    per_atom_[device_atoms_[d]] += per_device_[d];
  }
}

void SupplyTracker::Expire(double now) {
  while (!log_.empty() && log_.front().first <= now - window_s_) {
    const std::size_t d = log_.front().second;
    --per_device_[d];
    if (!device_atoms_.empty()) --per_atom_[device_atoms_[d]];
    log_.pop_front();
  }
}

SupplyEstimate SupplyTracker::Estimate(double now) {
  Expire(now);
  SupplyEstimate est;
  est.window_s = window_s_;
  const double div = Divisor(now, window_s_, origin_);
  est.rates.reserve(per_atom_.size());
  for (long long c : per_atom_) est.rates.push_back(static_cast<double>(c) / div);
  return est;
}

}  // namespace venn
