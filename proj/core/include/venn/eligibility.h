// Eligibility predicates, atomization of the device population into
// eligibility classes, and grouping of jobs that share a requirement.
//
// An atom is a maximal set of devices that satisfy exactly the same
// registered specs; atoms are the regions of the eligibility Venn diagram.
// Every set operation the scheduler performs (S_j, S_j', S_j ∩ S_k) is an
// operation over atom ids.

#ifndef VENN_ELIGIBILITY_H_
#define VENN_ELIGIBILITY_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "venn/types.h"

namespace venn {

bool Satisfies(const DeviceProfile& device, const EligibilitySpec& spec);

// The four capacity regions used to stratify devices and jobs.
enum class DeviceClass { kGeneral, kComputeRich, kMemoryRich, kHighPerformance };

inline constexpr std::array<DeviceClass, 4> kAllDeviceClasses = {
    DeviceClass::kGeneral, DeviceClass::kComputeRich, DeviceClass::kMemoryRich,
    DeviceClass::kHighPerformance};

inline constexpr double kRichCpuThreshold = 4.0;
inline constexpr double kRichMemoryGb = 4.0;

std::string_view ToString(DeviceClass cls);
EligibilitySpec StandardSpec(DeviceClass cls);
std::array<EligibilitySpec, 4> StandardSpecs();

// Interns distinct specs to dense ids. Ids are stable for the registry's
// lifetime; `version()` changes whenever a new spec is added.
class SpecRegistry {
 public:
  SpecId Intern(const EligibilitySpec& spec);
  std::optional<SpecId> Find(const EligibilitySpec& spec) const;
  const EligibilitySpec& at(SpecId id) const { return specs_.at(id); }
  std::size_t size() const { return specs_.size(); }
  std::span<const EligibilitySpec> specs() const { return specs_; }
  std::uint64_t version() const { return version_; }

 private:
  std::vector<EligibilitySpec> specs_;
  std::map<EligibilitySpec, SpecId> index_;
  std::uint64_t version_ = 0;
};

// Dense bitset over atom ids.
class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(std::size_t universe) : universe_(universe),
      words_((universe + 63) / 64, 0) {}

  std::size_t universe() const { return universe_; }
  void Insert(AtomId a);
  void Erase(AtomId a);
  bool Contains(AtomId a) const;
  bool empty() const;
  std::size_t count() const;
  bool Intersects(const AtomSet& other) const;

  AtomSet& operator|=(const AtomSet& other);
  AtomSet& operator&=(const AtomSet& other);
  AtomSet& operator-=(const AtomSet& other);
  friend AtomSet operator&(AtomSet a, const AtomSet& b) { return a &= b; }
  friend AtomSet operator|(AtomSet a, const AtomSet& b) { return a |= b; }
  friend AtomSet operator-(AtomSet a, const AtomSet& b) { return a -= b; }
  friend bool operator==(const AtomSet&, const AtomSet&) = default;

  std::vector<AtomId> ToVector() const;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct Atom {
  AtomId atom_id = 0;
  // Sorted ids of every registered spec the atom's devices satisfy.
  std::vector<SpecId> member_specs;
  std::size_t device_count = 0;

  bool Admits(SpecId spec) const;
};

class AtomTable {
 public:
  AtomTable() = default;

  std::span<const Atom> atoms() const { return atoms_; }
  const Atom& atom(AtomId id) const { return atoms_.at(id); }
  std::size_t size() const { return atoms_.size(); }
  std::size_t num_specs() const { return num_specs_; }

  // Atom for the i-th device passed to Atomize.
  AtomId AtomOfIndex(std::size_t device_index) const {
    return device_atoms_.at(device_index);
  }
  // Throws std::out_of_range for a device that was not atomized.
  AtomId AtomOf(std::string_view device_id) const;
  std::span<const AtomId> device_atoms() const { return device_atoms_; }

  // The atom holding devices that satisfy no registered spec, if any exist.
  std::optional<AtomId> null_atom() const { return null_atom_; }

  // All atoms whose members satisfy `spec`.
  AtomSet EligibleAtoms(SpecId spec) const;

 private:
  friend AtomTable Atomize(std::span<const EligibilitySpec> specs,
                           std::span<const DeviceProfile> devices);

  std::vector<Atom> atoms_;
  std::vector<AtomId> device_atoms_;
  std::unordered_map<std::string, AtomId> by_device_id_;
  std::optional<AtomId> null_atom_;
  std::size_t num_specs_ = 0;
};

// Partitions `devices` by satisfaction signature against `specs` (spec ids
// are positions in `specs`). Atoms are numbered in order of first
// appearance. Throws std::invalid_argument if `specs` is empty.
AtomTable Atomize(std::span<const EligibilitySpec> specs,
                  std::span<const DeviceProfile> devices);

struct JobGroup {
  EligibilitySpec spec;
  SpecId spec_id = -1;
  std::vector<JobIndex> jobs;
  AtomSet eligible_atoms;
  // Eligible check-ins per second, summed over eligible_atoms.
  double supply_rate = 0.0;
};

// One group per distinct spec id among jobs with an outstanding request, in
// order of first appearance. `atom_rates` (indexed by atom id) may be empty,
// in which case supply rates are zero.
std::vector<JobGroup> GroupJobs(const JobTable& jobs, const AtomTable& atoms,
                                const SpecRegistry& registry,
                                std::span<const double> atom_rates = {});

}  // namespace venn

#endif  // VENN_ELIGIBILITY_H_
