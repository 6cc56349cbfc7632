#ifndef VENN_RANDOM_H_
#define VENN_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace venn {

using Rng = std::mt19937_64;

// Independent named stream derived from a run seed. Components draw from
// their own stream so enabling one does not shift another's draws.
Rng MakeStream(std::uint64_t seed, std::string_view name);

namespace streams {
inline constexpr std::string_view kTrace = "trace";
inline constexpr std::string_view kCatalog = "catalog";
inline constexpr std::string_view kWorkload = "workload";
inline constexpr std::string_view kResponses = "responses";
inline constexpr std::string_view kMatcher = "matcher";
inline constexpr std::string_view kRandomBaseline = "random-baseline";
}  // namespace streams

}  // namespace venn

#endif  // VENN_RANDOM_H_
