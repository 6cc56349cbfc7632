#include "venn/metrics.h"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <tuple>

#include "venn/eligibility.h"
#include "venn/errors.h"

namespace venn {
namespace {

double Mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

double SubsetSpeedup(const MetricsReport& base, const MetricsReport& x,
                     const std::vector<std::size_t>& idx) {
  double b = 0.0;
  double v = 0.0;
  for (std::size_t i : idx) {
    b += base.jobs[i].jct();
    v += x.jobs[i].jct();
  }
  return v > 0.0 ? b / v : 1.0;
}

// Plain decimal with enough digits to round-trip the value.
void PutNumber(std::ostream& out, double v) {
  out << std::setprecision(17) << v;
}

}  // namespace

double JobMetrics::avg_scheduling_delay() const {
  if (rounds.empty()) return 0.0;
  double sum = 0.0;
  for (const RoundRecord& r : rounds) sum += r.scheduling_delay();
  return sum / static_cast<double>(rounds.size());
}

double JobMetrics::avg_collection_time() const {
  if (rounds.empty()) return 0.0;
  double sum = 0.0;
  for (const RoundRecord& r : rounds) sum += r.collection_time();
  return sum / static_cast<double>(rounds.size());
}

double MetricsReport::avg_jct() const {
  if (jobs.empty()) return 0.0;
  double sum = 0.0;
  for (const JobMetrics& j : jobs) sum += j.jct();
  return sum / static_cast<double>(jobs.size());
}

std::size_t MetricsReport::completed_jobs() const {
  return std::count_if(jobs.begin(), jobs.end(),
                       [](const JobMetrics& j) { return j.completed; });
}

double MetricsReport::fairness_ratio() const {
  if (jobs.empty()) return 0.0;
  const auto met = std::count_if(jobs.begin(), jobs.end(), [](const auto& j) {
    return j.meets_fair_share();
  });
  return static_cast<double>(met) / static_cast<double>(jobs.size());
}

double Speedup(const MetricsReport& base, const MetricsReport& x) {
  const double v = x.avg_jct();
  return v > 0.0 ? base.avg_jct() / v : 1.0;
}

void CheckComparable(const MetricsReport& a, const MetricsReport& b) {
  if (a.jobs.size() != b.jobs.size()) {
    throw MismatchedRunsError("runs '" + a.run_id + "' and '" + b.run_id +
                              "' have different job counts");
  }
  for (std::size_t i = 0; i < a.jobs.size(); ++i) {
    const JobMetrics& x = a.jobs[i];
    const JobMetrics& y = b.jobs[i];
    if (x.job_id != y.job_id || x.arrival_s != y.arrival_s ||
        x.total_demand != y.total_demand) {
      throw MismatchedRunsError("runs '" + a.run_id + "' and '" + b.run_id +
                                "' differ at job " + x.job_id);
    }
  }
}

std::vector<int> DemandQuartiles(const MetricsReport& report) {
  const std::size_t n = report.jobs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return report.jobs[a].total_demand < report.jobs[b].total_demand;
  });
  std::vector<int> bucket(n, 0);
  for (std::size_t rank = 0; rank < n; ++rank) {
    bucket[order[rank]] = static_cast<int>(std::min<std::size_t>(
        3, rank * 4 / std::max<std::size_t>(n, 1)));
  }
  return bucket;
}

Breakdown BreakdownSpeedups(const MetricsReport& base, const MetricsReport& x) {
  CheckComparable(base, x);
  Breakdown out;
  const std::vector<int> bucket = DemandQuartiles(base);
  for (int q = 0; q < 4; ++q) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < bucket.size(); ++i) {
      if (bucket[i] == q) idx.push_back(i);
    }
    out.by_demand_quartile[q] = SubsetSpeedup(base, x, idx);
  }
  std::map<std::string, std::vector<std::size_t>> by_spec;
  for (std::size_t i = 0; i < base.jobs.size(); ++i) {
    by_spec[Describe(base.jobs[i].spec)].push_back(i);
  }
  for (const auto& [name, idx] : by_spec) {
    out.by_eligibility[name] = SubsetSpeedup(base, x, idx);
  }
  return out;
}

std::vector<ComparisonRow> Aggregate(std::span<const LabeledReport> runs,
                                     const std::string& baseline) {
  std::vector<ComparisonRow> rows;
  rows.reserve(runs.size());
  for (const LabeledReport& run : runs) {
    const LabeledReport* base = nullptr;
    for (const LabeledReport& cand : runs) {
      if (cand.report.scheduler == baseline &&
          cand.scenario == run.scenario && cand.seed == run.seed) {
        base = &cand;
        break;
      }
    }
    if (base == nullptr) {
      throw MismatchedRunsError("no '" + baseline + "' run for scenario " +
                                run.scenario + " seed " +
                                std::to_string(run.seed));
    }
    ComparisonRow row;
    row.scheduler = run.report.scheduler;
    row.scenario = run.scenario;
    row.seed = run.seed;
    row.epsilon = run.epsilon;
    row.avg_jct_s = run.report.avg_jct();
    row.breakdown = BreakdownSpeedups(base->report, run.report);
    row.speedup = Speedup(base->report, run.report);
    row.fairness_ratio = run.report.fairness_ratio();
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ComparisonRow> Summarize(std::span<const ComparisonRow> rows) {
  using Key = std::tuple<std::string, std::string, double>;
  std::vector<Key> keys;
  std::map<Key, std::vector<const ComparisonRow*>> groups;
  for (const ComparisonRow& r : rows) {
    Key k{r.scheduler, r.scenario, r.epsilon};
    auto& g = groups[k];
    if (g.empty()) keys.push_back(k);
    g.push_back(&r);
  }
  std::vector<ComparisonRow> out;
  for (const Key& k : keys) {
    const auto& g = groups[k];
    ComparisonRow s;
    std::tie(s.scheduler, s.scenario, s.epsilon) = k;
    std::vector<double> jct, sp, fr;
    std::array<std::vector<double>, 4> quart;
    std::map<std::string, std::vector<double>> elig;
    for (const ComparisonRow* r : g) {
      jct.push_back(r->avg_jct_s);
      sp.push_back(r->speedup);
      fr.push_back(r->fairness_ratio);
      for (int q = 0; q < 4; ++q) {
        quart[q].push_back(r->breakdown.by_demand_quartile[q]);
      }
      for (const auto& [name, v] : r->breakdown.by_eligibility) {
        elig[name].push_back(v);
      }
    }
    s.avg_jct_s = Mean(jct);
    s.speedup = Mean(sp);
    s.fairness_ratio = Mean(fr);
    for (int q = 0; q < 4; ++q) s.breakdown.by_demand_quartile[q] = Mean(quart[q]);
    for (const auto& [name, v] : elig) s.breakdown.by_eligibility[name] = Mean(v);
    out.push_back(std::move(s));
  }
  return out;
}

void WriteReportCsv(std::ostream& out, const MetricsReport& report) {
  out << "run_id,scheduler,job_id,arrival_s,jct_s,rounds,aborts,"
         "avg_sched_delay_s,avg_collect_s\n";
  for (const JobMetrics& j : report.jobs) {
    out << report.run_id << ',' << report.scheduler << ',' << j.job_id << ',';
    PutNumber(out, j.arrival_s);
    out << ',';
    PutNumber(out, j.jct());
    out << ',' << j.rounds_completed << ',' << j.aborts << ',';
    PutNumber(out, j.avg_scheduling_delay());
    out << ',';
    PutNumber(out, j.avg_collection_time());
    out << '\n';
  }
}

void WriteComparisonCsv(std::ostream& out, std::span<const ComparisonRow> rows,
                        bool include_seed) {
  std::vector<std::string> elig_names;
  for (const ComparisonRow& r : rows) {
    for (const auto& [name, v] : r.breakdown.by_eligibility) {
      if (std::find(elig_names.begin(), elig_names.end(), name) ==
          elig_names.end()) {
        elig_names.push_back(name);
      }
    }
  }
  std::sort(elig_names.begin(), elig_names.end());
  out << "scheduler,scenario,";
  if (include_seed) out << "seed,";
  out << "epsilon,avg_jct_s,speedup,fairness_ratio,speedup_q1,speedup_q2,"
         "speedup_q3,speedup_q4";
  for (const std::string& name : elig_names) out << ",speedup_" << name;
  out << '\n';
  for (const ComparisonRow& r : rows) {
    out << r.scheduler << ',' << r.scenario << ',';
    if (include_seed) out << r.seed << ',';
    PutNumber(out, r.epsilon);
    out << ',';
    PutNumber(out, r.avg_jct_s);
    out << ',';
    PutNumber(out, r.speedup);
    out << ',';
    PutNumber(out, r.fairness_ratio);
    for (double q : r.breakdown.by_demand_quartile) {
      out << ',';
      PutNumber(out, q);
    }
    for (const std::string& name : elig_names) {
      out << ',';
      const auto it = r.breakdown.by_eligibility.find(name);
      if (it != r.breakdown.by_eligibility.end()) PutNumber(out, it->second);
    }
    out << '\n';
  }
}

}  // namespace venn
