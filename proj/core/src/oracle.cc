#include "venn/oracle.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "venn/errors.h"

namespace venn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieEps = 1e-9;

class BranchAndBound {
 public:
  explicit BranchAndBound(const ExactInstance& inst) : inst_(inst) {
    const std::size_t q = inst.num_devices();
    order_.resize(q);
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) {
      return inst.t[a] < inst.t[b];
    });
    rem_ = inst.d;
    current_.assign(q, -1);
    completion_.assign(inst.num_jobs(), 0.0);
  }

  ExactSolution Solve() {
    Search(0, 0.0);
    if (!std::isfinite(best_cost_)) {
      throw InfeasibleError("no assignment satisfies every demand");
    }
    ExactSolution sol;
    sol.assignment = best_assignment_;
    sol.completion = best_completion_;
    sol.average = best_cost_ / static_cast<double>(inst_.num_jobs());
    sol.nodes = nodes_;
    return sol;
  }

 private:
  // Sum over unmet jobs of the arrival time of their rem-th eligible device
  // from position `pos` on, ignoring contention. Infinite when some job can
  // no longer be satisfied.
  double LowerBound(std::size_t pos) const {
    double bound = 0.0;
    for (std::size_t j = 0; j < rem_.size(); ++j) {
      if (rem_[j] == 0) continue;
      int need = rem_[j];
      double at = kInf;
      for (std::size_t p = pos; p < order_.size(); ++p) {
        if (inst_.e[order_[p]][j] && --need == 0) {
          at = inst_.t[order_[p]];
          break;
        }
      }
      if (!std::isfinite(at)) return kInf;
      bound += at;
    }
    return bound;
  }

  void Search(std::size_t pos, double cost) {
    ++nodes_;
    const bool done =
        std::all_of(rem_.begin(), rem_.end(), [](int r) { return r == 0; });
    if (done) {
      if (cost < best_cost_ - kTieEps) {
        best_cost_ = cost;
        best_assignment_ = current_;
        best_completion_ = completion_;
      }
      return;
    }
    if (pos == order_.size()) return;
    // Ties are kept by the first (lexicographically smallest) solution, so
    // only strictly better subtrees are worth visiting.
    if (cost + LowerBound(pos) >= best_cost_ - kTieEps) return;

    const int dev = order_[pos];
    const double t = inst_.t[dev];
    bool any_eligible = false;
    for (std::size_t j = 0; j < rem_.size(); ++j) {
      if (rem_[j] == 0 || !inst_.e[dev][j]) continue;
      any_eligible = true;
      --rem_[j];
      current_[dev] = static_cast<int>(j);
      double add = 0.0;
      if (rem_[j] == 0) {
        completion_[j] = t;
        add = t;
      }
      Search(pos + 1, cost + add);
      current_[dev] = -1;
      ++rem_[j];
    }
    // Leaving a device idle while an eligible job still needs one never
    // helps: that job's later device can be swapped for this one.
    if (!any_eligible) Search(pos + 1, cost);
  }

  const ExactInstance& inst_;
  std::vector<int> order_;
  std::vector<int> rem_;
  std::vector<int> current_;
  std::vector<double> completion_;
  double best_cost_ = kInf;
  std::vector<int> best_assignment_;
  std::vector<double> best_completion_;
  std::size_t nodes_ = 0;
};

}  // namespace

void ValidateInstance(const ExactInstance& instance,
                      const OracleLimits& limits) {
  const std::size_t q = instance.num_devices();
  const std::size_t m = instance.num_jobs();
  if (instance.e.size() != q) {
    throw std::invalid_argument("eligibility matrix needs one row per device");
  }
  for (const auto& row : instance.e) {
    if (row.size() != m) {
      throw std::invalid_argument("eligibility row needs one entry per job");
    }
    for (int v : row) {
      if (v != 0 && v != 1) {
        throw std::invalid_argument("eligibility entries must be 0 or 1");
      }
    }
  }
  for (double t : instance.t) {
    if (!std::isfinite(t)) throw std::invalid_argument("non-finite time");
  }
  for (int d : instance.d) {
    if (d <= 0) throw std::invalid_argument("demands must be positive");
  }
  if (q > limits.max_devices || m > limits.max_jobs) {
    throw InstanceTooLargeError(
        "instance has " + std::to_string(q) + " devices and " +
        std::to_string(m) + " jobs; limits are " +
        std::to_string(limits.max_devices) + " and " +
        std::to_string(limits.max_jobs));
  }
  for (std::size_t j = 0; j < m; ++j) {
    int eligible = 0;
    for (std::size_t i = 0; i < q; ++i) eligible += instance.e[i][j];
    if (eligible < instance.d[j]) {
      throw InfeasibleError("job " + std::to_string(j) + " needs " +
                            std::to_string(instance.d[j]) + " devices but " +
                            std::to_string(eligible) + " are eligible");
    }
  }
}

ExactSolution SolveExact(const ExactInstance& instance,
                         const OracleLimits& limits) {
  ValidateInstance(instance, limits);
  if (instance.num_jobs() == 0) {
    ExactSolution empty;
    empty.assignment.assign(instance.num_devices(), -1);
    return empty;
  }
  return BranchAndBound(instance).Solve();
}

double EvaluateAssignment(const ExactInstance& instance,
                          const std::vector<int>& assignment) {
  const std::size_t m = instance.num_jobs();
  if (assignment.size() != instance.num_devices()) {
    throw std::invalid_argument("assignment needs one entry per device");
  }
  std::vector<int> got(m, 0);
  std::vector<double> last(m, -kInf);
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    const int j = assignment[i];
    if (j < 0) continue;
    if (static_cast<std::size_t>(j) >= m || !instance.e[i][j]) {
      throw std::invalid_argument("device " + std::to_string(i) +
                                  " is not eligible for its job");
    }
    ++got[j];
    last[j] = std::max(last[j], instance.t[i]);
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (got[j] > instance.d[j]) {
      throw std::invalid_argument("job " + std::to_string(j) +
                                  " is over-assigned");
    }
    if (got[j] < instance.d[j]) return kInf;
    sum += last[j];
  }
  return m == 0 ? 0.0 : sum / static_cast<double>(m);
}

DeltaT PairwiseDeltaT(double l, double x, double m_a, double m_b) {
  if (!(x > 0.0 && x < 1.0)) {
    throw DomainError("x must lie strictly between 0 and 1");
  }
  if (!(l > 0.0)) throw std::invalid_argument("l must be positive");
  if (!(m_a >= 0.0 && m_b >= 0.0)) {
    throw std::invalid_argument("queue lengths must be non-negative");
  }
  DeltaT out;
  out.delta_t = l * m_b - (l / (1.0 - x) - l) * m_a;
  out.prioritize_a = out.delta_t < 0.0;

  const double lhs = m_a / (1.0 - x);
  const double rhs = m_b / x;
  const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  const bool ratio_rule = lhs > rhs;
  if (ratio_rule != out.prioritize_a && std::abs(lhs - rhs) > 1e-9 * scale) {
    throw IntegrityError("delta-t sign disagrees with the ratio rule");
  }
  return out;
}

ExactInstance ReadInstance(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(1, e.what());
  }
  ExactInstance inst;
  try {
    inst.t = j.at("t").get<std::vector<double>>();
    inst.e = j.at("e").get<std::vector<std::vector<int>>>();
    inst.d = j.at("d").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(1, e.what());
  }
  return inst;
}

void WriteInstance(std::ostream& out, const ExactInstance& instance) {
  nlohmann::json j;
  j["t"] = instance.t;
  j["e"] = instance.e;
  j["d"] = instance.d;
  out << j.dump() << '\n';
}

ExactInstance RandomInstance(const InstanceGenParams& params, Rng& rng) {
  if (params.max_jobs < 1 || params.max_devices < 1 || params.max_demand < 1) {
    throw std::invalid_argument("instance generator limits must be positive");
  }
  // Region r satisfies spec s iff the spec's requirement bits are a subset
  // of the region's bits (bit 0: compute-rich, bit 1: memory-rich).
  constexpr int kRegionBits[4] = {0, 1, 2, 3};
  std::uniform_int_distribution<int> pick4(0, 3);
  std::uniform_int_distribution<std::size_t> jobs_dist(1, params.max_jobs);
  std::uniform_int_distribution<int> demand_dist(1, params.max_demand);
  OracleLimits limits{params.max_devices, params.max_jobs};
  while (true) {
    const std::size_t m = jobs_dist(rng);
    ExactInstance inst;
    int total = 0;
    std::vector<int> spec_bits(m);
    for (std::size_t j = 0; j < m; ++j) {
      inst.d.push_back(demand_dist(rng));
      total += inst.d.back();
      spec_bits[j] = kRegionBits[pick4(rng)];
    }
    std::uniform_int_distribution<std::size_t> dev_dist(
        std::min<std::size_t>(total, params.max_devices), params.max_devices);
    const std::size_t q = dev_dist(rng);
    for (std::size_t i = 0; i < q; ++i) {
      inst.t.push_back(static_cast<double>(i + 1));
      const int region = kRegionBits[pick4(rng)];
      std::vector<int> row(m);
      for (std::size_t j = 0; j < m; ++j) {
        row[j] = (spec_bits[j] & region) == spec_bits[j] ? 1 : 0;
      }
      inst.e.push_back(std::move(row));
    }
    try {
      SolveExact(inst, limits);
      return inst;
    } catch (const InfeasibleError&) {
    }
  }
}

}  // namespace venn
