#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "mbrep/enumeration.hpp"
#include "mbrep/numsys.hpp"

namespace mbrep {

inline constexpr std::uint8_t kUnreachable = 0xff;

// Relaxed lower-bound table: lb[m] is the minimal number of terms d*B
// (d in D\{0}, B a power-product) summing to m when the same B may be
// reused.  Reuse makes this a relaxation, so lb[m] <= true minimal weight.
// Unreachable entries hold kUnreachable.
std::vector<std::uint8_t> reuse_lower_bound_table(const BaseSystem& system,
                                                  std::uint64_t N,
                                                  std::uint64_t memory_cap = 1u << 28);

/// Shared read-only state for exact solves: the monoid, the lb table, and
/// prefix sums for the feasibility prune.
struct SolverContext {
    const BaseSystem* system = nullptr;
    TruncatedMonoid monoid;           // covers every n passed to the solver
    std::vector<std::uint8_t> lb;     // indexed 0..table_limit
    std::uint64_t table_limit = 0;
    std::vector<Int> prefix_sums;     // prefix_sums[i] = sum of elements[0..i-1]
    std::vector<std::uint64_t> prefix_sums_u64;  // mirror when values fit

    std::uint64_t node_cap = 200'000'000;  // search guard, BudgetError beyond
};

SolverContext make_solver_context(const BaseSystem& system, const Int& monoid_bound,
                                  std::uint64_t table_limit);

enum class SolveStatus { found, exceeds_budget, unrepresentable };

struct MinWeightResult {
    SolveStatus status = SolveStatus::unrepresentable;
    std::uint32_t weight = 0;
    Representation witness;
    std::uint64_t nodes = 0;
};

// Exact minimal Hamming weight by iterative-deepening DFS over terms in
// strictly decreasing power-product order (distinct B per representation,
// digits in D\{0}).  Deepening starts at the lb estimate and stops at the
// greedy weight unless `budget` overrides it.  `unrepresentable` is returned
// only when a pass exhausts the search space without any depth cutoff.
MinWeightResult minimal_weight_exact(const SolverContext& ctx, const Int& n,
                                     std::optional<std::uint32_t> budget = {});

// Convenience overload that builds a throwaway context.
MinWeightResult minimal_weight_exact(const BaseSystem& system, const Int& n,
                                     std::optional<std::uint32_t> budget = {});

inline constexpr std::uint16_t kWeightUnrepresentable = 0xffff;
inline constexpr std::uint16_t kWeightExceedsBudget = 0xfffe;

struct WeightProfile {
    std::uint64_t limit = 0;
    // weights[n] for 1 <= n <= limit; index 0 unused.  Sentinels above.
    std::vector<std::uint16_t> weights;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> records;
};

// Minimal weight for every n <= N through per-n exact solves sharing one
// context; `jobs` > 1 splits the range deterministically.
WeightProfile weight_profile(const BaseSystem& system, std::uint64_t N,
                             std::optional<std::uint32_t> budget = {},
                             unsigned jobs = 1);

struct CountingCheck {
    Int N;
    std::uint32_t K = 0;
    std::uint64_t distinct_representable = 0;
    Int binom_bound;  // sum_{k<=K} C(T,k) (|D|-1)^k
    Int crude_bound;  // ((|D|-1) T)^K
};

// Counts distinct integers representable with weight <= K over B_N supports
// and evaluates the two counting bounds.  Throws BudgetError when the
// support enumeration would explode.
CountingCheck counting_check(const BaseSystem& system, const Int& N, std::uint32_t K,
                             std::uint64_t support_cap = 20'000'000);

}  // namespace mbrep
