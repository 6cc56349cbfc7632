#include "venn/eligibility.h"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace venn {

bool Satisfies(const DeviceProfile& device, const EligibilitySpec& spec) {
  return device.cpu_score >= spec.min_cpu &&
         device.memory_gb >= spec.min_memory_gb &&
         device.tags.Includes(spec.required_tags);
}

std::string_view ToString(DeviceClass cls) {
  switch (cls) {
    case DeviceClass::kGeneral:
      return "General";
    case DeviceClass::kComputeRich:
      return "Compute-Rich";
    case DeviceClass::kMemoryRich:
      return "Memory-Rich";
    case DeviceClass::kHighPerformance:
      return "High-Performance";
  }
  return "?";
}

EligibilitySpec StandardSpec(DeviceClass cls) {
  switch (cls) {
    case DeviceClass::kGeneral:
      return {};
    case DeviceClass::kComputeRich:
      return {.min_cpu = kRichCpuThreshold, .required_tags = {}};
    case DeviceClass::kMemoryRich:
      return {.min_memory_gb = kRichMemoryGb, .required_tags = {}};
    case DeviceClass::kHighPerformance:
      return {.min_cpu = kRichCpuThreshold, .min_memory_gb = kRichMemoryGb,
              .required_tags = {}};
  }
  return {};
}

std::array<EligibilitySpec, 4> StandardSpecs() {
  std::array<EligibilitySpec, 4> out;
  for (std::size_t i = 0; i < kAllDeviceClasses.size(); ++i) {
    out[i] = StandardSpec(kAllDeviceClasses[i]);
  }
  return out;
}

SpecId SpecRegistry::Intern(const EligibilitySpec& spec) {
  auto it = index_.find(spec);
  if (it != index_.end()) return it->second;
  const SpecId id = static_cast<SpecId>(specs_.size());
  specs_.push_back(spec);
  index_.emplace(spec, id);
  ++version_;
  return id;
}

std::optional<SpecId> SpecRegistry::Find(const EligibilitySpec& spec) const {
  auto it = index_.find(spec);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void AtomSet::Insert(AtomId a) {
  words_.at(static_cast<std::size_t>(a) / 64) |= std::uint64_t{1} << (a % 64);
}

void AtomSet::Erase(AtomId a) {
  words_.at(static_cast<std::size_t>(a) / 64) &=
      ~(std::uint64_t{1} << (a % 64));
}

bool AtomSet::Contains(AtomId a) const {
  if (a < 0 || static_cast<std::size_t>(a) >= universe_) return false;
  return (words_[a / 64] >> (a % 64)) & 1U;
}

bool AtomSet::empty() const {
  return std::all_of(words_.begin(), words_.end(),
                     [](std::uint64_t w) { return w == 0; });
}

std::size_t AtomSet::count() const {
  std::size_t n = 0;
  for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool AtomSet::Intersects(const AtomSet& other) const {
  const std::size_t n = std::min(words_.size(), other.words_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (words_[i] & other.words_[i]) return true;
  }
  return false;
}

AtomSet& AtomSet::operator|=(const AtomSet& other) {
  if (other.universe_ > universe_) {
    universe_ = other.universe_;
    words_.resize(other.words_.size(), 0);
  }
  for (std::size_t i = 0; i < other.words_.size(); ++i) {
    words_[i] |= other.words_[i];
  }
  return *this;
}

AtomSet& AtomSet::operator&=(const AtomSet& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    words_[i] &= i < other.words_.size() ? other.words_[i] : 0;
  }
  return *this;
}

AtomSet& AtomSet::operator-=(const AtomSet& other) {
  const std::size_t n = std::min(words_.size(), other.words_.size());
  for (std::size_t i = 0; i < n; ++i) words_[i] &= ~other.words_[i];
  return *this;
}

std::vector<AtomId> AtomSet::ToVector() const {
  std::vector<AtomId> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w) {
      const int bit = std::countr_zero(w);
      out.push_back(static_cast<AtomId>(i * 64 + bit));
      w &= w - 1;
    }
  }
  return out;
}

bool Atom::Admits(SpecId spec) const {
  return std::binary_search(member_specs.begin(), member_specs.end(), spec);
}

AtomId AtomTable::AtomOf(std::string_view device_id) const {
  auto it = by_device_id_.find(std::string(device_id));
  if (it == by_device_id_.end()) {
    throw std::out_of_range("device '" + std::string(device_id) +
                            "' is not in the atom table");
  }
  return it->second;
}

AtomSet AtomTable::EligibleAtoms(SpecId spec) const {
  AtomSet out(atoms_.size());
  for (const Atom& a : atoms_) {
    if (a.Admits(spec)) out.Insert(a.atom_id);
  }
  return out;
}

AtomTable Atomize(std::span<const EligibilitySpec> specs,
                  std::span<const DeviceProfile> devices) {
  if (specs.empty()) {
    throw std::invalid_argument("Atomize requires at least one spec");
  }
  AtomTable table;
  table.num_specs_ = specs.size();
  table.device_atoms_.reserve(devices.size());
  table.by_device_id_.reserve(devices.size());

  std::map<std::vector<bool>, AtomId> by_signature;
  std::vector<bool> signature(specs.size());
  for (const DeviceProfile& device : devices) {
    for (std::size_t s = 0; s < specs.size(); ++s) {
      signature[s] = Satisfies(device, specs[s]);
    }
    auto [it, inserted] = by_signature.try_emplace(
        signature, static_cast<AtomId>(table.atoms_.size()));
    if (inserted) {
      Atom atom;
      atom.atom_id = it->second;
      for (std::size_t s = 0; s < specs.size(); ++s) {
        if (signature[s]) atom.member_specs.push_back(static_cast<SpecId>(s));
      }
      if (atom.member_specs.empty()) table.null_atom_ = atom.atom_id;
      table.atoms_.push_back(std::move(atom));
    }
    ++table.atoms_[it->second].device_count;
    table.device_atoms_.push_back(it->second);
    table.by_device_id_.emplace(device.device_id, it->second);
  }
  return table;
}

std::vector<JobGroup> GroupJobs(const JobTable& jobs, const AtomTable& atoms,
                                const SpecRegistry& registry,
                                std::span<const double> atom_rates) {
  std::vector<JobGroup> groups;
  std::unordered_map<SpecId, std::size_t> slot;
  for (JobIndex i = 0; i < jobs.size(); ++i) {
    const ActiveJob& job = jobs[i];
    if (!job.has_outstanding_request()) continue;
    auto [it, inserted] = slot.try_emplace(job.spec_id, groups.size());
    if (inserted) {
      JobGroup g;
      g.spec_id = job.spec_id;
      g.spec = registry.at(job.spec_id);
      g.eligible_atoms = atoms.EligibleAtoms(job.spec_id);
      for (AtomId a : g.eligible_atoms.ToVector()) {
        if (static_cast<std::size_t>(a) < atom_rates.size()) {
          g.supply_rate += atom_rates[a];
        }
      }
      groups.push_back(std::move(g));
    }
    groups[it->second].jobs.push_back(i);
  }
  return groups;
}

}  // namespace venn
