#include "mbrep/enumeration.hpp"

#include <algorithm>
#include <bit>

namespace mbrep {

namespace {

void enumerate_rec(const BaseSystem& system, const Int& N, std::size_t j,
                   Int current, std::vector<std::uint32_t>& exps,
                   std::vector<PowerProduct>& out, std::size_t cap) {
    if (j == system.r()) {
        if (out.size() >= cap) {
            throw BudgetError("enumeration: element cap " + std::to_string(cap) +
                              " exceeded");
        }
        out.push_back(PowerProduct{exps, current});
        return;
    }
    const std::uint64_t b = system.bases()[j];
    Int value = current;
    std::uint32_t e = 0;
    while (true) {
        exps[j] = e;
        enumerate_rec(system, N, j + 1, value, exps, out, cap);
        value *= static_cast<unsigned long>(b);
        if (value > N) break;
        ++e;
    }
    exps[j] = 0;
}

// Base indices iterated exhaustively; the remaining slot is maximized per
// combination.  Base 2 goes into the maximized slot when present (bit_floor).
struct SearchOrder {
    std::vector<std::size_t> loops;
    std::size_t max_slot;
};

SearchOrder search_order(const BaseSystem& system) {
    SearchOrder order;
    order.max_slot = system.r() - 1;
    for (std::size_t j = 0; j < system.r(); ++j) {
        if (system.bases()[j] == 2) order.max_slot = j;
    }
    for (std::size_t j = 0; j < system.r(); ++j) {
        if (j != order.max_slot) order.loops.push_back(j);
    }
    return order;
}

void largest_leq_u64_rec(const BaseSystem& system, std::uint64_t n,
                         const SearchOrder& order, std::size_t level,
                         std::uint64_t current, std::vector<std::uint32_t>& exps,
                         std::uint64_t& best, std::vector<std::uint32_t>* best_exps) {
    if (level == order.loops.size()) {
        const std::uint64_t q = n / current;
        const auto& tab = system.power_table(order.max_slot);
        std::uint64_t top;
        std::uint32_t top_e;
        if (system.bases()[order.max_slot] == 2) {
            top = std::bit_floor(q);
            top_e = static_cast<std::uint32_t>(std::bit_width(q) - 1);
        } else {
            auto it = std::upper_bound(tab.begin(), tab.end(), q) - 1;
            top = *it;
            top_e = static_cast<std::uint32_t>(it - tab.begin());
        }
        const std::uint64_t candidate = current * top;
        if (candidate > best) {
            best = candidate;
            if (best_exps) {
                exps[order.max_slot] = top_e;
                *best_exps = exps;
            }
        }
        return;
    }
    const std::uint64_t b = system.bases()[order.loops[level]];
    std::uint64_t value = current;
    std::uint32_t e = 0;
    while (true) {
        if (best_exps) exps[order.loops[level]] = e;
        largest_leq_u64_rec(system, n, order, level + 1, value, exps, best, best_exps);
        if (value > n / b) break;
        value *= b;
        ++e;
    }
    if (best_exps) exps[order.loops[level]] = 0;
}

void largest_leq_rec(const BaseSystem& system, const Int& n, const SearchOrder& order,
                     std::size_t level, Int current, std::vector<std::uint32_t>& exps,
                     Int& best, std::vector<std::uint32_t>& best_exps) {
    if (level == order.loops.size()) {
        const Int q = n / current;
        std::uint32_t top_e;
        if (system.bases()[order.max_slot] == 2) {
            top_e = static_cast<std::uint32_t>(bit_length(q) - 1);
        } else {
            top_e = floor_log(system.bases()[order.max_slot], q);
        }
        Int candidate = current * pow_int(system.bases()[order.max_slot], top_e);
        if (candidate > best) {
            best = candidate;
            exps[order.max_slot] = top_e;
            best_exps = exps;
        }
        return;
    }
    const std::size_t j = order.loops[level];
    const std::uint64_t b = system.bases()[j];
    Int value = current;
    std::uint32_t e = 0;
    while (value <= n) {
        exps[j] = e;
        largest_leq_rec(system, n, order, level + 1, value, exps, best, best_exps);
        value *= static_cast<unsigned long>(b);
        ++e;
    }
    exps[j] = 0;
}

}  // namespace

TruncatedMonoid enumerate_power_products(const BaseSystem& system, const Int& N,
                                         std::size_t cap) {
    if (N < 1) throw ValidationError("enumerate_power_products: N must be >= 1");
    TruncatedMonoid m;
    m.bound = N;
    std::vector<std::uint32_t> exps(system.r(), 0);
    enumerate_rec(system, N, 0, Int(1), exps, m.elements, cap);

    std::sort(m.elements.begin(), m.elements.end(),
              [](const PowerProduct& a, const PowerProduct& b) {
                  if (a.value != b.value) return a.value < b.value;
                  return a.exponents < b.exponents;
              });
    // Dependent bases can reach one value through different exponent vectors;
    // dedupe by value, keeping the lexicographically smallest vector.
    m.elements.erase(std::unique(m.elements.begin(), m.elements.end(),
                                 [](const PowerProduct& a, const PowerProduct& b) {
                                     return a.value == b.value;
                                 }),
                     m.elements.end());

    m.t_bound = t_bound(system, N);

    if (fits_u64(N)) {
        m.values_u64.reserve(m.elements.size());
        for (const auto& e : m.elements) m.values_u64.push_back(to_u64(e.value));
    }
    return m;
}

Int t_bound(const BaseSystem& system, const Int& N) {
    if (N < 1) throw ValidationError("t_bound: N must be >= 1");
    Int t(1);
    for (auto b : system.bases()) {
        t *= static_cast<unsigned long>(1 + floor_log(b, N));
    }
    return t;
}

std::uint64_t largest_leq_u64(const BaseSystem& system, std::uint64_t n) {
    if (n == 0) throw ValidationError("largest_leq: n must be >= 1");
    const SearchOrder order = search_order(system);
    std::uint64_t best = 1;
    std::vector<std::uint32_t> exps;
    largest_leq_u64_rec(system, n, order, 0, 1, exps, best, nullptr);
    return best;
}

PowerProduct largest_leq(const BaseSystem& system, const Int& n) {
    if (n < 1) throw ValidationError("largest_leq: n must be >= 1");
    const SearchOrder order = search_order(system);
    std::vector<std::uint32_t> exps(system.r(), 0);
    std::vector<std::uint32_t> best_exps(system.r(), 0);

    if (fits_u64(n)) {
        std::uint64_t best = 1;
        largest_leq_u64_rec(system, to_u64(n), order, 0, 1, exps, best, &best_exps);
        return PowerProduct{best_exps, Int(static_cast<unsigned long>(best))};
    }

    Int best(1);
    largest_leq_rec(system, n, order, 0, Int(1), exps, best, best_exps);
    return PowerProduct{best_exps, best};
}

}  // namespace mbrep
