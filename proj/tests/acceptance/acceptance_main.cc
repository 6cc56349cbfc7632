// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "brute_force.h"
#include "cli.h"
#include "venn/baselines.h"
#include "venn/irs.h"
#include "venn/metrics.h"
#include "venn/oracle.h"
#include "venn/sim.h"

namespace venn {
namespace {

using Clock = std::chrono::steady_clock;

constexpr int kSeeds = 5;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

IrsOptions VennOptions() {
  IrsOptions o;
  o.matching = false;
  return o;
}

// Eight devices at t = 1..8; every second one (t = 2, 4, 6, 8) is eligible
// for the two emoji jobs, and the keyboard job takes any device.
ExactInstance ToyInstance() {
  constexpr int kScarce[8] = {0, 1, 0, 1, 0, 1, 0, 1};
  ExactInstance inst;
  inst.d = {3, 1, 2};
  for (int i = 0; i < 8; ++i) {
    inst.t.push_back(i + 1.0);
    inst.e.push_back({1, kScarce[i], kScarce[i]});
  }
  return inst;
}

Outcome ToyExample() {
  const ExactInstance inst = ToyInstance();
  const double brute = testing::EnumerateOptimum(inst);
  const double opt = SolveExact(inst).average;
  IrsScheduler venn(VennOptions(), MakeStream(1, streams::kMatcher));
  const double v = ReplayInstance(inst, venn).average;
  SrsfScheduler srsf;
  const double s = ReplayInstance(inst, srsf).average;
  const double r = testing::MeanOverSeeds(1000, [&](unsigned seed) {
    RandomScheduler random(MakeStream(seed, streams::kRandomBaseline));
    return ReplayInstance(inst, random).average;
  });
  Outcome out;
  out.pass = std::abs(opt - brute) < 1e-9 && std::abs(v - opt) < 1e-9 &&
             s > opt + 1e-9 && r > opt + 1e-9;
  out.detail = Fmt("optimum %.4f (enumeration %.4f), venn %.4f, srsf %.4f, "
                   "E[random] %.4f",
                   opt, brute, v, s, r);
  return out;
}

Outcome OracleGap() {
  Rng rng = MakeStream(1, "oracle-instances");
  const InstanceGenParams gen;
  int within = 0;
  int equal = 0;
  int below = 0;
  int unfilled = 0;
  constexpr int kInstances = 200;
  for (int k = 0; k < kInstances; ++k) {
    const ExactInstance inst = RandomInstance(gen, rng);
    const double opt = SolveExact(inst).average;
    IrsScheduler venn(VennOptions(), MakeStream(1, streams::kMatcher));
    const double v = ReplayInstance(inst, venn).average;
    if (v < opt - 1e-9) ++below;
    if (std::abs(v - opt) <= 1e-9) ++equal;
    if (v <= 1.25 * opt + 1e-9) ++within;
    if (std::isinf(v)) ++unfilled;
  }
  const double n = kInstances;
  Outcome out;
  out.pass = within / n >= 0.9 && equal / n >= 0.5 && below == 0;
  out.detail = Fmt("within 1.25x %.3f (need 0.9), equal %.3f (need 0.5), "
                   "below %d, left a job unfilled %d",
                   within / n, equal / n, below, unfilled);
  return out;
}

Outcome TwoGroupRule() {
  constexpr int kDraws = 100000;
  constexpr int kMaxQueue = 100;
  // Group A (spec 0) can use atom 0 and atom 1; group B (spec 1) only atom 1.
  JobTable jobs(2 * kMaxQueue);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    JobSpec& spec = jobs[i].spec;
    spec.job_id = Fmt("job-%03zu", i);
    spec.round_demand = 1;
    jobs[i].spec_id = i < kMaxQueue ? 0 : 1;
    jobs[i].request = RoundRequest::Issue(spec, 0, 0, 0.0);
  }
  Rng rng = MakeStream(7, "two-group");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> scale(1.0, 1000.0);
  std::uniform_int_distribution<int> queue(1, kMaxQueue);
  std::uniform_int_distribution<int> head_demand(1, 500);

  FairnessState fairness;
  fairness.fair_share_s.assign(jobs.size(), 1.0);
  int agree = 0;
  int took = 0;
  for (int k = 0; k < kDraws; ++k) {
    double x = unit(rng);
    while (x <= 0.0) x = unit(rng);
    const double rate = scale(rng);
    const int m_a = queue(rng);
    const int m_b = queue(rng);
    const int l = head_demand(rng);

    JobGroup a;
    a.spec_id = 0;
    a.eligible_atoms = AtomSet(2);
    a.eligible_atoms.Insert(0);
    a.eligible_atoms.Insert(1);
    a.supply_rate = rate;
    JobGroup b;
    b.spec_id = 1;
    b.eligible_atoms = AtomSet(2);
    b.eligible_atoms.Insert(1);
    b.supply_rate = x * rate;
    for (int i = 0; i < m_a; ++i) {
      jobs[i].request.remaining_demand = l;
      a.jobs.push_back(i);
    }
    for (int i = 0; i < m_b; ++i) b.jobs.push_back(kMaxQueue + i);

    SupplyEstimate supply;
    supply.rates = {(1.0 - x) * rate, x * rate};
    const std::vector<JobGroup> groups = {a, b};
    const AllocationPlan plan = Schedule(groups, supply, fairness, jobs, 2);
    const bool a_took = plan.atom_owner[1] == 0;
    const DeltaT dt = PairwiseDeltaT(l, x, m_a, m_b);
    if (a_took == dt.prioritize_a) ++agree;
    if (a_took) ++took;
  }
  Outcome out;
  out.pass = agree == kDraws;
  out.detail = Fmt("%d/%d decisions agree with sign(dt); A took the shared "
                   "atom in %d",
                   agree, kDraws, took);
  return out;
}

cli::RunConfig EvenConfig(std::uint64_t seed) {
  cli::RunConfig c;
  c.scenario = "even";
  c.n_jobs = 50;
  c.seed = seed;
  return c;
}

double AvgJct(const cli::RunConfig& config, const cli::Inputs& inputs) {
  return Run(cli::ToSimConfig(config), inputs.trace, inputs.jobs)
      .report.avg_jct();
}

class EvenRuns {
 public:
  const cli::Inputs& InputsFor(std::uint64_t seed) {
    auto it = inputs_.find(seed);
    if (it == inputs_.end()) {
      it = inputs_.emplace(seed, cli::BuildInputs(EvenConfig(seed))).first;
    }
    return it->second;
  }

  const MetricsReport& Report(const std::string& scheduler,
                              std::uint64_t seed, double epsilon) {
    const auto key = std::make_tuple(scheduler, seed, epsilon);
    auto it = reports_.find(key);
    if (it == reports_.end()) {
      cli::RunConfig c = EvenConfig(seed);
      c.scheduler = scheduler;
      c.epsilon = epsilon;
      const cli::Inputs& in = InputsFor(seed);
      it = reports_
               .emplace(key, Run(cli::ToSimConfig(c), in.trace, in.jobs).report)
               .first;
    }
    return it->second;
  }

  double MeanSpeedup(const std::string& scheduler, double epsilon) {
    double sum = 0.0;
    for (int s = 1; s <= kSeeds; ++s) {
      sum += Speedup(Report("random", s, 0.0), Report(scheduler, s, epsilon));
    }
    return sum / kSeeds;
  }

  double MeanFairness(double epsilon) {
    double sum = 0.0;
    for (int s = 1; s <= kSeeds; ++s) {
      sum += Report("venn", s, epsilon).fairness_ratio();
    }
    return sum / kSeeds;
  }

 private:
  std::map<std::uint64_t, cli::Inputs> inputs_;
  std::map<std::tuple<std::string, std::uint64_t, double>, MetricsReport>
      reports_;
};

EvenRuns& Even() {
  static EvenRuns runs;
  return runs;
}

Outcome TableOrdering() {
  const double venn = Even().MeanSpeedup("venn", 0.0);
  const double srsf = Even().MeanSpeedup("srsf", 0.0);
  const double fifo = Even().MeanSpeedup("fifo", 0.0);
  Outcome out;
  out.pass = venn >= srsf && srsf >= fifo && fifo >= 1.0 && venn >= 1.2;
  out.detail = Fmt("speedup over random: venn %.3f, srsf %.3f, fifo %.3f",
                   venn, srsf, fifo);
  return out;
}

cli::RunConfig LowContentionConfig(std::uint64_t seed) {
  cli::RunConfig c;
  c.n_jobs = 20;
  c.synth_devices = 20000;
  c.synth_horizon_s = 7 * kSecondsPerDay;
  c.demand_min = 2;
  c.demand_max = 8;
  c.rounds_min = 5;
  c.rounds_max = 20;
  c.seed = seed;
  return c;
}

std::string ReportCsv(const cli::RunConfig& config, const cli::Inputs& in) {
  std::ostringstream csv;
  WriteReportCsv(csv, Run(cli::ToSimConfig(config), in.trace, in.jobs).report);
  return csv.str();
}

Outcome MatchingBreakdown() {
  double with = 0.0;
  double without = 0.0;
  int identical = 0;
  for (int s = 1; s <= kSeeds; ++s) {
    cli::RunConfig c = LowContentionConfig(s);
    const cli::Inputs in = cli::BuildInputs(c);
    c.matching = true;
    with += AvgJct(c, in);
    c.matching = false;
    without += AvgJct(c, in);

    c.tiers = 1;
    c.matching = true;
    const std::string one_tier = ReportCsv(c, in);
    c.matching = false;
    if (one_tier == ReportCsv(c, in)) ++identical;
  }
  Outcome out;
  out.pass = with <= without && identical == kSeeds;
  out.detail = Fmt("mean avg JCT with matching %.1f s, without %.1f s; "
                   "V=1 identical in %d/%d runs",
                   with / kSeeds, without / kSeeds, identical, kSeeds);
  return out;
}

Outcome FairnessKnob() {
  const double eps[3] = {0.0, 1.0, 2.0};
  double fair[3];
  double speed[3];
  for (int i = 0; i < 3; ++i) {
    fair[i] = Even().MeanFairness(eps[i]);
    speed[i] = Even().MeanSpeedup("venn", eps[i]);
  }
  Outcome out;
  out.pass = fair[0] <= fair[1] && fair[1] <= fair[2] &&
             speed[0] >= speed[1] && speed[1] >= speed[2];
  out.detail = Fmt("fair-share fraction %.3f / %.3f / %.3f, speedup "
                   "%.3f / %.3f / %.3f for eps 0 / 1 / 2",
                   fair[0], fair[1], fair[2], speed[0], speed[1], speed[2]);
  return out;
}

// n groups share one heavily supplied atom and each own a private atom whose
// rate grows with the group index. Every group keeps a nonempty allocation
// and passes every ratio test, so all n(n-1)/2 group pairs are examined.
struct OverheadCase {
  std::vector<JobGroup> groups;
  JobTable jobs;
  SupplyEstimate supply;
  FairnessState fairness;
  std::size_t num_atoms = 0;
};

OverheadCase MakeOverheadCase(std::size_t m, std::size_t n) {
  OverheadCase c;
  c.num_atoms = n + 1;
  const AtomId shared = static_cast<AtomId>(n);
  c.supply.rates.assign(c.num_atoms, 0.0);
  c.supply.rates[shared] = 1e6;
  Rng rng = MakeStream(m * 1000 + n, "overhead");
  std::uniform_int_distribution<int> demand(1, 1000);
  c.jobs.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    JobSpec& spec = c.jobs[i].spec;
    spec.job_id = Fmt("job-%05zu", i);
    spec.round_demand = demand(rng);
    c.jobs[i].spec_id = static_cast<SpecId>(i % n);
    c.jobs[i].request = RoundRequest::Issue(spec, 0, 0, 0.0);
  }
  for (std::size_t g = 0; g < n; ++g) {
    c.supply.rates[g] = 1.0 + static_cast<double>(g);
    JobGroup group;
    group.spec_id = static_cast<SpecId>(g);
    group.eligible_atoms = AtomSet(c.num_atoms);
    group.eligible_atoms.Insert(static_cast<AtomId>(g));
    group.eligible_atoms.Insert(shared);
    group.supply_rate = c.supply.rates[g] + c.supply.rates[shared];
    for (std::size_t i = g; i < m; i += n) group.jobs.push_back(i);
    c.groups.push_back(std::move(group));
  }
  c.fairness.fair_share_s.assign(m, 1.0);
  return c;
}

ScheduleStats Measure(const OverheadCase& c, double* millis) {
  ScheduleStats stats;
  const auto start = Clock::now();
  Schedule(c.groups, c.supply, c.fairness, c.jobs, c.num_atoms, {}, &stats);
  *millis = std::chrono::duration<double, std::milli>(Clock::now() - start)
                .count();
  return stats;
}

Outcome SchedulerOverhead() {
  const OverheadCase base = MakeOverheadCase(1000, 100);
  const OverheadCase doubled = MakeOverheadCase(1000, 200);
  std::vector<double> times;
  ScheduleStats stats;
  for (int rep = 0; rep < 5; ++rep) {
    double ms = 0.0;
    stats = Measure(base, &ms);
    times.push_back(ms);
  }
  std::sort(times.begin(), times.end());
  double ms2 = 0.0;
  const ScheduleStats stats2 = Measure(doubled, &ms2);
  const double ratio = static_cast<double>(stats2.pair_checks) /
                       static_cast<double>(stats.pair_checks);
  Outcome out;
  out.pass = times[times.size() / 2] < 100.0 && ratio >= 3.2 && ratio <= 4.8;
  out.detail = Fmt("median %.3f ms for m=1000 n=100; pair checks %zu -> %zu "
                   "(x%.3f) when n doubles; sort comparisons %zu",
                   times[times.size() / 2], stats.pair_checks,
                   stats2.pair_checks, ratio, stats.sort_comparisons);
  return out;
}

Outcome SimulationIntegrity() {
  cli::RunConfig c;
  c.n_jobs = 20;
  c.seed = 3;
  const cli::Inputs in = cli::BuildInputs(c);
  SimConfig sim = cli::ToSimConfig(c);
  sim.record_assignments = true;
  const SimResult first = Run(sim, in.trace, in.jobs);
  const SimResult second = Run(sim, in.trace, in.jobs);
  std::ostringstream a;
  std::ostringstream b;
  WriteReportCsv(a, first.report);
  WriteReportCsv(b, second.report);
  std::vector<std::string> failures;
  if (a.str() != b.str()) failures.push_back("nondeterministic CSV");

  for (const AssignmentRecord& r : first.assignments) {
    if (!Satisfies(in.trace.devices[r.device], in.jobs[r.job].spec)) {
      failures.push_back("ineligible assignment");
      break;
    }
  }

  std::map<std::size_t, std::vector<double>> by_device;
  for (const AssignmentRecord& r : first.assignments) {
    by_device[r.device].push_back(r.time);
  }
  for (auto& [device, times] : by_device) {
    std::sort(times.begin(), times.end());
    for (std::size_t i = 1; i < times.size(); ++i) {
      if (times[i] - times[i - 1] < kSecondsPerDay - 1e-9) {
        failures.push_back("device reused within a day");
        break;
      }
    }
  }

  int completed = 0;
  int rounds = 0;
  for (std::size_t k = 0; k < first.report.jobs.size(); ++k) {
    const JobMetrics& m = first.report.jobs[k];
    const int demand = in.jobs[k].round_demand;
    const int required = (4 * demand + 4) / 5;
    for (const RoundRecord& r : m.rounds) {
      if (!r.end_s) continue;
      ++rounds;
      if (r.succeeded != (r.responses >= required)) {
        failures.push_back("threshold violated by " + m.job_id);
        break;
      }
    }
    if (!m.completed) continue;
    ++completed;
    double total = 0.0;
    double cursor = m.arrival_s;
    bool chained = true;
    for (const RoundRecord& r : m.rounds) {
      chained = chained && std::abs(r.issue_s - cursor) < 1e-6 && r.end_s;
      total += r.scheduling_delay() + r.collection_time();
      cursor = r.end_s.value_or(cursor);
    }
    if (!chained || std::abs(cursor - m.end_s) > 1e-6 ||
        std::abs(total - m.jct()) > 1e-6 * std::max(1.0, m.jct())) {
      failures.push_back("JCT identity broken for " + m.job_id);
    }
  }
  if (completed == 0) failures.push_back("no job completed");

  Outcome out;
  out.pass = failures.empty();
  out.detail = Fmt("%zu assignments, %d closed rounds, %d/%zu jobs completed",
                   first.assignments.size(), rounds, completed,
                   first.report.jobs.size());
  for (const std::string& f : failures) out.detail += "; " + f;
  return out;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace venn

int main(int argc, char** argv) {
  using venn::Criterion;
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "Run only these criteria (1-8)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "toy example", 1.0, venn::ToyExample},
      {2, "oracle optimality gap", 120.0, venn::OracleGap},
      {3, "two-group rule", 30.0, venn::TwoGroupRule},
      {4, "scheduler ordering on Even", 300.0, venn::TableOrdering},
      {5, "matching breakdown", 300.0, venn::MatchingBreakdown},
      {6, "fairness knob", 600.0, venn::FairnessKnob},
      {7, "scheduler overhead", 60.0, venn::SchedulerOverhead},
      {8, "simulation integrity", 30.0, venn::SimulationIntegrity},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() &&
        std::find(only.begin(), only.end(), c.id) == only.end()) {
      continue;
    }
    const auto start = venn::Clock::now();
    venn::Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(venn::Clock::now() - start).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += venn::Fmt("; took %.1f s, budget %.0f s", secs, c.budget_s);
    }
    std::cout << "criterion " << c.id << ' ' << (o.pass ? "PASS" : "FAIL")
              << " [" << c.name << "] " << o.detail
              << venn::Fmt(" (%.2f s)", secs) << std::endl;
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
