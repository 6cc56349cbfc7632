#include "venn/sim.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <queue>
#include <string>

#include "venn/baselines.h"
#include "venn/eligibility.h"
#include "venn/errors.h"

namespace venn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct EventAfter {
  bool operator()(const Event& a, const Event& b) const {
    if (a.time != b.time) return a.time > b.time;
    return a.seq > b.seq;
  }
};

class Simulation {
 public:
  Simulation(const SimConfig& config, const DeviceTrace& trace,
             std::span<const JobSpec> specs)
      : config_(config),
        trace_(trace),
        specs_(specs.begin(), specs.end()),
        scheduler_(MakeScheduler(config.scheduler, config.irs,
                                 config.scheduler_seed)),
        response_rng_(MakeStream(config.seed, streams::kResponses)),
        tracker_(trace.devices.size(), config.supply_window_s),
        blocked_until_(trace.devices.size(), -kInf) {
    horizon_ = trace.horizon_s;
    if (config.horizon_s > 0.0) {
      if (config.horizon_s > trace.horizon_s) {
        result_.report.warnings.push_back(
            "horizon exceeds the device trace; truncated to " +
            std::to_string(trace.horizon_s) + " s");
      } else {
        horizon_ = config.horizon_s;
      }
    }
    result_.report.run_id = config.run_id;
    result_.report.scheduler = std::string(scheduler_->name());
    result_.report.seed = config.seed;
    result_.report.jobs.resize(specs_.size());
    for (std::size_t k = 0; k < specs_.size(); ++k) {
      ValidateJob(specs_[k]);
      JobMetrics& m = result_.report.jobs[k];
      m.job_id = specs_[k].job_id;
      m.spec = specs_[k].spec;
      m.arrival_s = specs_[k].arrival_time;
      m.total_rounds = specs_[k].total_rounds;
      m.total_demand = specs_[k].total_demand();
    }
  }

  SimResult Execute() {
    for (std::size_t k = 0; k < specs_.size(); ++k) {
      Event e;
      e.time = specs_[k].arrival_time;
      e.kind = EventKind::kJobArrival;
      e.job = k;
      Push(e);
    }
    for (std::size_t d = 0; d < trace_.devices.size(); ++d) {
      for (const Interval& iv : trace_.devices[d].availability) {
        if (iv.start > horizon_) continue;
        Event e;
        e.time = iv.start;
        e.kind = EventKind::kDeviceCheckIn;
        e.device = d;
        Push(e);
      }
    }

    while (!queue_.empty() && finished_ < specs_.size()) {
      const Event e = queue_.top();
      if (e.time > horizon_) break;
      queue_.pop();
      if (e.time < now_) throw IntegrityError("event scheduled in the past");
      now_ = e.time;
      ++result_.report.counters.events;
      switch (e.kind) {
        case EventKind::kDeviceCheckIn: OnCheckIn(e); break;
        case EventKind::kJobArrival: OnArrival(e); break;
        case EventKind::kRequestIssued: OnIssue(e); break;
        case EventKind::kResponseArrive: OnResponse(e); break;
        case EventKind::kDeadlineExpire: OnDeadline(e); break;
      }
    }
    Finish();
    return std::move(result_);
  }

 private:
  void Push(Event e) {
    e.seq = next_seq_++;
    queue_.push(e);
  }

  SchedulingContext Context() {
    supply_ = tracker_.Estimate(now_);
    SchedulingContext ctx;
    ctx.now = now_;
    ctx.registry = &registry_;
    ctx.atoms = &atoms_;
    ctx.supply = &supply_;
    return ctx;
  }

  JobMetrics& MetricsOf(JobIndex j) {
    return result_.report.jobs[input_index_[j]];
  }

  void OnArrival(const Event& e) {
    const JobSpec& spec = specs_[e.job];
    const std::size_t before = registry_.size();
    const SpecId sid = registry_.Intern(spec.spec);
    const JobIndex j = jobs_.size();
    ActiveJob job;
    job.spec = spec;
    job.spec_id = sid;
    jobs_.push_back(std::move(job));
    input_index_.push_back(e.job);
    if (registry_.size() != before) {
      atoms_ = Atomize(registry_.specs(), trace_.devices);
      tracker_.Rebind(atoms_);
      scheduler_->OnAtomsChanged(jobs_, Context());
    }
    Event issue;
    issue.time = now_;
    issue.kind = EventKind::kRequestIssued;
    issue.job = j;
    Push(issue);
  }

  void OnIssue(const Event& e) {
    ActiveJob& job = jobs_[e.job];
    job.request = RoundRequest::Issue(job.spec, e.round, e.attempt, now_);
    RoundRecord rec;
    rec.round_index = e.round;
    rec.attempt = e.attempt;
    rec.issue_s = now_;
    MetricsOf(e.job).rounds.push_back(rec);
    ++outstanding_;
    scheduler_->OnRequestIssued(e.job, jobs_, Context());
  }

  void OnCheckIn(const Event& e) {
    SimCounters& c = result_.report.counters;
    ++c.check_ins;
    if (now_ < blocked_until_[e.device]) {
      ++c.blocked_check_ins;
      return;
    }
    tracker_.Record(now_, e.device);
    if (outstanding_ == 0) return;

    const DeviceProfile& device = trace_.devices[e.device];
    const AtomId atom = atoms_.AtomOfIndex(e.device);
    const std::optional<JobIndex> chosen =
        scheduler_->AssignDevice(device, atom, jobs_, Context());
    if (!chosen) return;

    const JobIndex j = *chosen;
    ActiveJob& job = jobs_.at(j);
    RoundRequest& req = job.request;
    if (!Satisfies(device, job.spec.spec)) {
      throw IntegrityError("device " + device.device_id +
                           " assigned to ineligible job " + job.spec.job_id);
    }
    if (req.assigned_count > req.demand || req.remaining_demand < 0) {
      throw IntegrityError("job " + job.spec.job_id + " over-assigned");
    }
    blocked_until_[e.device] = now_ + config_.participation_cooldown_s;
    ++c.assignments;
    if (config_.record_assignments) {
      result_.assignments.push_back(
          {now_, e.device, input_index_[j], req.round_index, req.attempt});
    }
    scheduler_->OnParticipant(j, device);

    const std::optional<double> seconds =
        SampleResponseTime(device, config_.response, response_rng_);
    if (seconds) {
      Event r;
      r.time = now_ + *seconds;
      r.kind = EventKind::kResponseArrive;
      r.device = e.device;
      r.job = j;
      r.round = req.round_index;
      r.attempt = req.attempt;
      r.seconds = *seconds;
      Push(r);
    } else {
      ++c.failures;
    }

    if (req.remaining_demand == 0) {
      --outstanding_;
      req.Transition(RequestState::kCollecting);
      MetricsOf(j).rounds.back().full_assign_s = now_;
      Event d;
      d.time = now_ + job.spec.deadline_seconds;
      d.kind = EventKind::kDeadlineExpire;
      d.job = j;
      d.round = req.round_index;
      d.attempt = req.attempt;
      Push(d);
      scheduler_->OnRequestFilled(j, jobs_, Context());
      if (req.responses_received >= job.spec.required_responses()) {
        Succeed(j);
      }
    }
  }

  bool Current(const ActiveJob& job, const Event& e) const {
    return !job.finished && job.request.round_index == e.round &&
           job.request.attempt == e.attempt;
  }

  void OnResponse(const Event& e) {
    ++result_.report.counters.responses;
    ActiveJob& job = jobs_[e.job];
    if (!Current(job, e)) return;
    RoundRequest& req = job.request;
    if (req.state != RequestState::kWaiting &&
        req.state != RequestState::kCollecting) {
      return;
    }
    ++req.responses_received;
    ++MetricsOf(e.job).rounds.back().responses;
    scheduler_->OnResponse(e.job, trace_.devices[e.device], e.seconds);
    if (req.state == RequestState::kCollecting &&
        req.responses_received >= job.spec.required_responses()) {
      Succeed(e.job);
    }
  }

  void OnDeadline(const Event& e) {
    ActiveJob& job = jobs_[e.job];
    if (!Current(job, e) || job.request.state != RequestState::kCollecting) {
      return;
    }
    job.request.Transition(RequestState::kAborted);
    JobMetrics& m = MetricsOf(e.job);
    m.rounds.back().end_s = now_;
    ++m.aborts;
    scheduler_->OnRoundFinished(e.job, false);
    Event issue;
    issue.time = now_;
    issue.kind = EventKind::kRequestIssued;
    issue.job = e.job;
    issue.round = job.request.round_index;
    issue.attempt = job.request.attempt + 1;
    Push(issue);
  }

  void Succeed(JobIndex j) {
    ActiveJob& job = jobs_[j];
    RoundRequest& req = job.request;
    if (req.responses_received < job.spec.required_responses()) {
      throw IntegrityError("round of " + job.spec.job_id +
                           " succeeded below the report threshold");
    }
    req.Transition(RequestState::kSucceeded);
    JobMetrics& m = MetricsOf(j);
    m.rounds.back().end_s = now_;
    m.rounds.back().succeeded = true;
    ++job.rounds_completed;
    m.rounds_completed = job.rounds_completed;
    scheduler_->OnRoundFinished(j, true);
    if (job.rounds_completed == job.spec.total_rounds) {
      job.finished = true;
      m.completed = true;
      m.end_s = now_;
      ++finished_;
      return;
    }
    Event issue;
    issue.time = now_;
    issue.kind = EventKind::kRequestIssued;
    issue.job = j;
    issue.round = job.rounds_completed;
    Push(issue);
  }

  void Finish() {
    MetricsReport& report = result_.report;
    report.end_s = finished_ == specs_.size() ? now_ : horizon_;
    if (auto* irs = dynamic_cast<IrsScheduler*>(scheduler_.get())) {
      report.counters.reschedules = irs->reschedules();
    }
    for (JobMetrics& m : report.jobs) {
      if (!m.completed) m.end_s = std::max(report.end_s, m.arrival_s);
    }
    CheckAccounting();
    AssignFairShare();
  }

  void CheckAccounting() const {
    for (const JobMetrics& m : result_.report.jobs) {
      if (!m.completed) continue;
      double phases = 0.0;
      for (const RoundRecord& r : m.rounds) {
        if (!r.full_assign_s || !r.end_s) {
          throw IntegrityError("completed job " + m.job_id +
                               " has an open round");
        }
        phases += r.scheduling_delay() + r.collection_time();
      }
      const double gap = m.rounds.front().issue_s - m.arrival_s;
      if (std::abs(phases + gap - m.jct()) > 1e-6 * std::max(1.0, m.jct())) {
        throw IntegrityError("JCT of " + m.job_id +
                             " differs from the sum of its round phases");
      }
    }
  }

  void AssignFairShare() {
    std::vector<JobMetrics>& jobs = result_.report.jobs;
    const std::size_t n = jobs.size();
    if (n == 0) return;
    SpecRegistry registry;
    for (const JobSpec& s : specs_) registry.Intern(s.spec);
    std::vector<double> eligible(registry.size(), 0.0);
    std::vector<double> speed(registry.size(), 0.0);
    for (const DeviceProfile& d : trace_.devices) {
      for (std::size_t s = 0; s < registry.size(); ++s) {
        if (Satisfies(d, registry.at(static_cast<SpecId>(s)))) {
          eligible[s] += 1.0;
          speed[s] += d.speed_factor;
        }
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      JobMetrics& m = jobs[k];
      const double life = m.end_s - m.arrival_s;
      double concurrent = 1.0;
      if (life > 0.0) {
        double overlap = 0.0;
        for (const JobMetrics& o : jobs) {
          overlap += std::max(0.0, std::min(m.end_s, o.end_s) -
                                       std::max(m.arrival_s, o.arrival_s));
        }
        concurrent = overlap / life;
      }
      const auto s = static_cast<std::size_t>(*registry.Find(m.spec));
      const double rate = eligible[s] / config_.participation_cooldown_s;
      const double mean_speed = eligible[s] > 0.0 ? speed[s] / eligible[s] : 1.0;
      m.fair_share_s =
          concurrent *
          StandaloneJct(specs_[k], rate, mean_speed, config_.response);
    }
  }

  const SimConfig& config_;
  const DeviceTrace& trace_;
  std::vector<JobSpec> specs_;
  std::unique_ptr<Scheduler> scheduler_;
  Rng response_rng_;

  SpecRegistry registry_;
  AtomTable atoms_;
  SupplyTracker tracker_;
  SupplyEstimate supply_;

  JobTable jobs_;
  std::vector<std::size_t> input_index_;
  std::vector<double> blocked_until_;

  std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
  std::uint64_t next_seq_ = 0;
  double now_ = 0.0;
  double horizon_ = 0.0;
  std::size_t outstanding_ = 0;
  std::size_t finished_ = 0;

  SimResult result_;
};

}  // namespace

void ValidateSimConfig(const SimConfig& config) {
  if (!IsSchedulerName(config.scheduler)) {
    throw ConfigError("unknown scheduler '" + config.scheduler + "'");
  }
  if (!(config.irs.epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  if (config.irs.num_tiers < 1) throw ConfigError("tiers must be >= 1");
  if (!(config.horizon_s >= 0.0)) throw ConfigError("horizon must be >= 0");
  if (!(config.supply_window_s > 0.0)) {
    throw ConfigError("supply window must be positive");
  }
  if (!(config.participation_cooldown_s >= 0.0)) {
    throw ConfigError("participation cooldown must be >= 0");
  }
  try {
    ValidateResponseModel(config.response);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

SimResult Run(const SimConfig& config, const DeviceTrace& trace,
              std::span<const JobSpec> jobs) {
  ValidateSimConfig(config);
  SimConfig resolved = config;
  resolved.irs.response = config.response;
  return Simulation(resolved, trace, jobs).Execute();
}

double StandaloneJct(const JobSpec& job, double eligible_rate,
                     double mean_speed_factor, const ResponseModel& model) {
  return ContentionFreeJct(
      job, eligible_rate,
      ExpectedCollectionSeconds(model, job.report_threshold,
                                mean_speed_factor));
}

ReplayResult ReplayInstance(const ExactInstance& instance,
                            Scheduler& scheduler) {
  ValidateInstance(instance, {std::numeric_limits<std::size_t>::max(),
                              std::numeric_limits<std::size_t>::max()});
  const std::size_t q = instance.num_devices();
  const std::size_t m = instance.num_jobs();
  ReplayResult out;
  out.completion.assign(m, kInf);
  if (m == 0) return out;

  // Jobs with identical eligibility columns share one tag, hence one spec.
  std::vector<std::vector<int>> columns;
  std::vector<std::size_t> column_of(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<int> col(q);
    for (std::size_t i = 0; i < q; ++i) col[i] = instance.e[i][j];
    auto it = std::find(columns.begin(), columns.end(), col);
    column_of[j] = static_cast<std::size_t>(it - columns.begin());
    if (it == columns.end()) columns.push_back(std::move(col));
  }
  auto tag = [](std::size_t c) { return "c" + std::to_string(c); };

  std::vector<DeviceProfile> devices(q);
  for (std::size_t i = 0; i < q; ++i) {
    std::vector<std::string> tags;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c][i]) tags.push_back(tag(c));
    }
    devices[i].device_id = "d" + std::to_string(i);
    devices[i].tags = TagSet(std::move(tags));
  }

  SpecRegistry registry;
  JobTable jobs(m);
  for (std::size_t j = 0; j < m; ++j) {
    char id[32];
    std::snprintf(id, sizeof(id), "j%03zu", j);
    JobSpec& spec = jobs[j].spec;
    spec.job_id = id;
    spec.round_demand = instance.d[j];
    spec.total_rounds = 1;
    spec.spec.required_tags = TagSet{tag(column_of[j])};
    jobs[j].spec_id = registry.Intern(spec.spec);
    jobs[j].request = RoundRequest::Issue(spec, 0, 0, 0.0);
  }
  const AtomTable atoms = Atomize(registry.specs(), devices);

  double horizon = 1.0;
  for (double t : instance.t) horizon = std::max(horizon, t);
  SupplyEstimate supply;
  supply.window_s = horizon;
  supply.rates.assign(atoms.size(), 0.0);
  for (std::size_t i = 0; i < q; ++i) {
    supply.rates[atoms.AtomOfIndex(i)] += 1.0 / horizon;
  }

  SchedulingContext ctx;
  ctx.registry = &registry;
  ctx.atoms = &atoms;
  ctx.supply = &supply;
  scheduler.OnAtomsChanged(jobs, ctx);
  for (std::size_t j = 0; j < m; ++j) scheduler.OnRequestIssued(j, jobs, ctx);

  std::vector<std::size_t> order(q);
  for (std::size_t i = 0; i < q; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a,
                                                   std::size_t b) {
    return instance.t[a] < instance.t[b];
  });
  for (std::size_t i : order) {
    ctx.now = instance.t[i];
    const auto chosen =
        scheduler.AssignDevice(devices[i], atoms.AtomOfIndex(i), jobs, ctx);
    if (!chosen) continue;
    if (!instance.e[i][*chosen]) {
      throw IntegrityError("replay assigned device " + std::to_string(i) +
                           " to an ineligible job");
    }
    RoundRequest& req = jobs[*chosen].request;
    if (req.remaining_demand == 0) {
      out.completion[*chosen] = instance.t[i];
      req.Transition(RequestState::kCollecting);
      scheduler.OnRequestFilled(*chosen, jobs, ctx);
    }
  }
  double sum = 0.0;
  for (double c : out.completion) sum += c;
  out.average = sum / static_cast<double>(m);
  return out;
}

}  // namespace venn
