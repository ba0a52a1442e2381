#pragma once

#include <cstdint>
#include <vector>

#include "mbrep/numsys.hpp"

namespace mbrep {

/// The truncated monoid B_N: all power-products with value <= N, sorted
/// ascending by value, deduplicated by value.
struct TruncatedMonoid {
    Int bound;
    std::vector<PowerProduct> elements;
    Int t_bound;

    // Mirror of element values when every one fits in uint64; empty otherwise.
    std::vector<std::uint64_t> values_u64;

    std::size_t size() const { return elements.size(); }
};

inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

// Exact enumeration of { B in monoid : B <= N }.  Throws BudgetError when the
// element count would exceed `cap`.
TruncatedMonoid enumerate_power_products(const BaseSystem& system, const Int& N,
                                         std::size_t cap = kDefaultEnumerationCap);

// T(N) = prod_j (1 + floor(log_{b_j} N)); an upper bound for |B_N|.
// Floor-logs are computed by exact repeated multiplication.
Int t_bound(const BaseSystem& system, const Int& N);

// The maximal power-product <= n (n >= 1); B = 1 always qualifies.
PowerProduct largest_leq(const BaseSystem& system, const Int& n);

// uint64 fast path: returns only the value of the maximal power-product <= n.
std::uint64_t largest_leq_u64(const BaseSystem& system, std::uint64_t n);

}  // namespace mbrep
