#include "mbrep/minweight.hpp"

#include <algorithm>
#include <set>
#include <thread>
#include <unordered_set>

#include "mbrep/greedy.hpp"

namespace mbrep {

namespace {

constexpr std::uint32_t kInfeasible = 0xffffffffu;

// Admissible estimate for the remaining weight.  Inside the table it is the
// reuse-DP value (a relaxation of the distinct-support problem); beyond the
// table the estimate degrades to 1.  kInfeasible marks remainders that are
// unreachable even with reuse, which rules them out at every depth.
template <typename Value>
std::uint32_t lb_estimate(const SolverContext& ctx, const Value& m) {
    if (m == 0) return 0;
    std::uint64_t idx;
    if constexpr (std::is_same_v<Value, std::uint64_t>) {
        if (m > ctx.table_limit) return 1;
        idx = m;
    } else {
        if (!fits_u64(m) || to_u64(m) > ctx.table_limit) return 1;
        idx = to_u64(m);
    }
    const std::uint8_t v = ctx.lb[idx];
    if (v == kUnreachable) return kInfeasible;
    return v;
}

template <typename Value>
struct Dfs {
    const SolverContext& ctx;
    const std::vector<Value>& elements;  // ascending
    std::vector<std::uint64_t> nonzero_digits_desc;
    std::uint64_t max_digit;
    std::uint32_t bound = 0;
    bool cutoff = false;
    std::uint64_t nodes = 0;
    std::vector<std::pair<std::size_t, std::uint64_t>> path;  // (element index, digit)

    explicit Dfs(const SolverContext& c, const std::vector<Value>& elems)
        : ctx(c), elements(elems) {
        const auto& digits = ctx.system->digits();
        for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
            if (*it != 0) nonzero_digits_desc.push_back(*it);
        }
        max_digit = ctx.system->max_digit();
    }

    // Sum of elements[0..count-1]; saturating in the u64 mirror.
    bool feasible(std::size_t count, const Value& remaining) const {
        if constexpr (std::is_same_v<Value, std::uint64_t>) {
            const unsigned __int128 avail =
                static_cast<unsigned __int128>(max_digit) * ctx.prefix_sums_u64[count];
            return avail >= remaining;
        } else {
            return ctx.prefix_sums[count] * Int(static_cast<unsigned long>(max_digit)) >=
                   remaining;
        }
    }

    // Terms are chosen in strictly decreasing power-product order; idx_limit
    // is the exclusive upper index of still-usable elements.
    bool run(const Value& remaining, std::size_t idx_limit, std::uint32_t depth) {
        if (remaining == 0) return true;
        if (++nodes > ctx.node_cap) {
            throw BudgetError("minweight: node cap exceeded");
        }
        const std::size_t hi =
            std::upper_bound(elements.begin(), elements.begin() + idx_limit, remaining) -
            elements.begin();
        if (hi == 0) return false;
        if (!feasible(hi, remaining)) return false;
        if (depth == bound) {
            cutoff = true;
            return false;
        }
        for (std::size_t i = hi; i-- > 0;) {
            const Value& b = elements[i];
            for (std::uint64_t d : nonzero_digits_desc) {
                Value term;
                if constexpr (std::is_same_v<Value, std::uint64_t>) {
                    const unsigned __int128 t = static_cast<unsigned __int128>(d) * b;
                    if (t > remaining) continue;
                    term = static_cast<std::uint64_t>(t);
                } else {
                    term = b * Int(static_cast<unsigned long>(d));
                    if (term > remaining) continue;
                }
                const Value rest = remaining - term;
                const std::uint32_t est = lb_estimate(ctx, rest);
                if (est == kInfeasible) continue;
                if (depth + 1 + est > bound) {
                    cutoff = true;
                    continue;
                }
                path.emplace_back(i, d);
                if (run(rest, i, depth + 1)) return true;
                path.pop_back();
            }
        }
        return false;
    }
};

template <typename Value>
MinWeightResult solve(const SolverContext& ctx, const std::vector<Value>& elements,
                      const Value& n, std::optional<std::uint32_t> budget,
                      std::optional<std::uint32_t> greedy_weight) {
    MinWeightResult result;

    std::uint32_t start = 1;
    {
        const std::uint32_t est = lb_estimate(ctx, n);
        if (est == kInfeasible) {
            result.status = SolveStatus::unrepresentable;
            return result;
        }
        start = std::max<std::uint32_t>(1, est);
    }

    // Distinct supports cap any representation's weight at the number of
    // usable elements, so searching up to that bound is exhaustive.  The
    // greedy weight (always attainable) and an explicit budget may stop
    // deepening earlier.
    const std::uint32_t exhaustive_cap = static_cast<std::uint32_t>(
        std::upper_bound(elements.begin(), elements.end(), n) - elements.begin());
    std::uint32_t upper = exhaustive_cap;
    if (greedy_weight && *greedy_weight < upper) upper = *greedy_weight;
    bool budget_limited = false;
    if (budget && *budget < upper) {
        upper = *budget;
        budget_limited = true;
    }

    Dfs<Value> dfs(ctx, elements);
    for (std::uint32_t bound = start; bound <= upper; ++bound) {
        dfs.bound = bound;
        dfs.cutoff = false;
        dfs.path.clear();
        if (dfs.run(n, elements.size(), 0)) {
            result.status = SolveStatus::found;
            result.weight = bound;
            result.nodes = dfs.nodes;
            std::vector<Representation::Term> terms;
            terms.reserve(dfs.path.size());
            for (const auto& [idx, digit] : dfs.path) {
                terms.push_back({ctx.monoid.elements[idx], digit});
            }
            result.witness = Representation::create(*ctx.system, std::move(terms));
            return result;
        }
        if (!dfs.cutoff) {
            // The pass explored the whole space without a depth cutoff, so no
            // deeper pass can find anything.
            result.status = SolveStatus::unrepresentable;
            result.nodes = dfs.nodes;
            return result;
        }
    }
    result.nodes = dfs.nodes;
    if (budget_limited) {
        result.status = SolveStatus::exceeds_budget;
        return result;
    }
    if (greedy_weight) {
        // A greedy representation exists within the searched bounds.
        throw Error("minweight: internal: greedy witness not rediscovered");
    }
    result.status = SolveStatus::unrepresentable;
    return result;
}

}  // namespace

std::vector<std::uint8_t> reuse_lower_bound_table(const BaseSystem& system,
                                                  std::uint64_t N,
                                                  std::uint64_t memory_cap) {
    if (N + 1 > memory_cap) {
        throw BudgetError("reuse_lower_bound_table: memory cap exceeded");
    }
    const TruncatedMonoid monoid =
        enumerate_power_products(system, Int(static_cast<unsigned long>(N)));

    // Distinct step sizes d*B <= N.
    std::vector<std::uint64_t> steps;
    for (std::uint64_t d : system.digits()) {
        if (d == 0) continue;
        for (std::uint64_t b : monoid.values_u64) {
            const unsigned __int128 t = static_cast<unsigned __int128>(d) * b;
            if (t <= N) steps.push_back(static_cast<std::uint64_t>(t));
        }
    }
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());

    std::vector<std::uint8_t> lb(N + 1, kUnreachable);
    lb[0] = 0;
    for (std::uint64_t m = 1; m <= N; ++m) {
        std::uint8_t best = kUnreachable;
        for (std::uint64_t s : steps) {
            if (s > m) break;
            const std::uint8_t prev = lb[m - s];
            if (prev != kUnreachable && prev + 1 < best) {
                best = static_cast<std::uint8_t>(prev + 1);
            }
        }
        lb[m] = best;
    }
    return lb;
}

SolverContext make_solver_context(const BaseSystem& system, const Int& monoid_bound,
                                  std::uint64_t table_limit) {
    SolverContext ctx;
    ctx.system = &system;
    ctx.monoid = enumerate_power_products(system, monoid_bound);
    ctx.table_limit = table_limit;
    ctx.lb = reuse_lower_bound_table(system, table_limit);

    ctx.prefix_sums.resize(ctx.monoid.size() + 1);
    ctx.prefix_sums[0] = 0;
    for (std::size_t i = 0; i < ctx.monoid.size(); ++i) {
        ctx.prefix_sums[i + 1] = ctx.prefix_sums[i] + ctx.monoid.elements[i].value;
    }
    ctx.prefix_sums_u64.resize(ctx.prefix_sums.size());
    for (std::size_t i = 0; i < ctx.prefix_sums.size(); ++i) {
        ctx.prefix_sums_u64[i] = fits_u64(ctx.prefix_sums[i])
                                     ? to_u64(ctx.prefix_sums[i])
                                     : std::numeric_limits<std::uint64_t>::max();
    }
    return ctx;
}

MinWeightResult minimal_weight_exact(const SolverContext& ctx, const Int& n,
                                     std::optional<std::uint32_t> budget) {
    if (n < 1) throw ValidationError("minimal_weight_exact: n must be >= 1");
    if (n > ctx.monoid.bound) {
        throw ValidationError("minimal_weight_exact: context monoid does not cover n");
    }
    if (budget && *budget < 1) {
        throw ValidationError("minimal_weight_exact: weight budget must be >= 1");
    }

    std::optional<std::uint32_t> greedy_weight;
    try {
        greedy_weight = static_cast<std::uint32_t>(
            greedy_encode(*ctx.system, n).representation.weight());
    } catch (const DigitOverflowError&) {
        // No greedy upper bound for this n; deepening is capped elsewhere.
    }

    if (!ctx.monoid.values_u64.empty() && fits_u64(n)) {
        return solve<std::uint64_t>(ctx, ctx.monoid.values_u64, to_u64(n), budget,
                                    greedy_weight);
    }
    std::vector<Int> values;
    values.reserve(ctx.monoid.size());
    for (const auto& e : ctx.monoid.elements) values.push_back(e.value);
    return solve<Int>(ctx, values, n, budget, greedy_weight);
}

MinWeightResult minimal_weight_exact(const BaseSystem& system, const Int& n,
                                     std::optional<std::uint32_t> budget) {
    if (n < 1) throw ValidationError("minimal_weight_exact: n must be >= 1");
    const std::uint64_t table_limit =
        fits_u64(n) ? std::min<std::uint64_t>(to_u64(n), 1u << 22) : (1u << 22);
    SolverContext ctx = make_solver_context(system, n, table_limit);
    return minimal_weight_exact(ctx, n, budget);
}

WeightProfile weight_profile(const BaseSystem& system, std::uint64_t N,
                             std::optional<std::uint32_t> budget, unsigned jobs) {
    if (N < 1) throw ValidationError("weight_profile: N must be >= 1");
    SolverContext ctx =
        make_solver_context(system, Int(static_cast<unsigned long>(N)), N);

    WeightProfile profile;
    profile.limit = N;
    profile.weights.assign(N + 1, 0);

    auto worker = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t n = lo; n < hi; ++n) {
            MinWeightResult r =
                minimal_weight_exact(ctx, Int(static_cast<unsigned long>(n)), budget);
            switch (r.status) {
                case SolveStatus::found:
                    profile.weights[n] = static_cast<std::uint16_t>(r.weight);
                    break;
                case SolveStatus::exceeds_budget:
                    profile.weights[n] = kWeightExceedsBudget;
                    break;
                case SolveStatus::unrepresentable:
                    profile.weights[n] = kWeightUnrepresentable;
                    break;
            }
        }
    };

    if (jobs <= 1) {
        worker(1, N + 1);
    } else {
        std::vector<std::thread> threads;
        const std::uint64_t chunk = (N + jobs - 1) / jobs;
        for (unsigned t = 0; t < jobs; ++t) {
            const std::uint64_t lo = 1 + t * chunk;
            const std::uint64_t hi = std::min<std::uint64_t>(N + 1, lo + chunk);
            if (lo > N) break;
            threads.emplace_back(worker, lo, hi);
        }
        for (auto& th : threads) th.join();
    }

    std::uint32_t best = 0;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const std::uint16_t w = profile.weights[n];
        if (w == kWeightUnrepresentable || w == kWeightExceedsBudget) continue;
        if (w > best) {
            best = w;
            profile.records.emplace_back(n, w);
        }
    }
    return profile;
}

CountingCheck counting_check(const BaseSystem& system, const Int& N, std::uint32_t K,
                             std::uint64_t support_cap) {
    if (N < 1) throw ValidationError("counting_check: N must be >= 1");
    const TruncatedMonoid monoid = enumerate_power_products(system, N);
    const std::uint64_t nd = system.digits().size() - 1;  // nonzero digit choices

    CountingCheck check;
    check.N = N;
    check.K = K;

    const Int t = monoid.t_bound;

    // binom_bound = sum_{k=1..K} C(T,k) (|D|-1)^k with T = t_bound(N).
    Int binom(0);
    Int choose(1);
    Int dpow(1);
    for (std::uint32_t k = 1; k <= K; ++k) {
        choose = choose * (t - static_cast<long>(k - 1)) / static_cast<unsigned long>(k);
        dpow *= static_cast<unsigned long>(nd);
        binom += choose * dpow;
    }
    check.binom_bound = binom;

    Int crude(1);
    for (std::uint32_t k = 0; k < K; ++k) {
        crude *= t * static_cast<unsigned long>(nd);
    }
    check.crude_bound = crude;

    if (K == 0) {
        check.distinct_representable = 0;
        return check;
    }

    // Explosion guard on the raw support/digit enumeration count.
    {
        Int combos(0);
        Int c(1);
        Int dp(1);
        for (std::uint32_t k = 1; k <= K; ++k) {
            c = c * Int(static_cast<unsigned long>(monoid.size() >= k ? monoid.size() - (k - 1) : 0)) /
                static_cast<unsigned long>(k);
            dp *= static_cast<unsigned long>(nd);
            combos += c * dp;
        }
        if (combos > Int(static_cast<unsigned long>(support_cap))) {
            throw BudgetError("counting_check: support enumeration exceeds cap");
        }
    }

    std::vector<std::uint64_t> nonzero_digits;
    for (auto d : system.digits()) {
        if (d != 0) nonzero_digits.push_back(d);
    }

    // All sums fit in uint64 iff maxD * K * N does.
    const Int max_sum =
        N * Int(static_cast<unsigned long>(system.max_digit())) * Int(static_cast<unsigned long>(K));
    if (fits_u64(max_sum) && !monoid.values_u64.empty()) {
        std::unordered_set<std::uint64_t> seen;
        auto rec = [&](auto&& self, std::size_t next, std::uint64_t sum,
                       std::uint32_t k) -> void {
            if (k > 0) seen.insert(sum);
            if (k == K) return;
            for (std::size_t i = next; i < monoid.values_u64.size(); ++i) {
                for (std::uint64_t d : nonzero_digits) {
                    self(self, i + 1, sum + d * monoid.values_u64[i], k + 1);
                }
            }
        };
        rec(rec, 0, 0, 0);
        check.distinct_representable = seen.size();
    } else {
        std::set<Int> seen;
        auto rec = [&](auto&& self, std::size_t next, const Int& sum,
                       std::uint32_t k) -> void {
            if (k > 0) seen.insert(sum);
            if (k == K) return;
            for (std::size_t i = next; i < monoid.size(); ++i) {
                for (std::uint64_t d : nonzero_digits) {
                    self(self, i + 1,
                         sum + monoid.elements[i].value * Int(static_cast<unsigned long>(d)),
                         k + 1);
                }
            }
        };
        rec(rec, 0, Int(0), 0);
        check.distinct_representable = seen.size();
    }
    return check;
}

}  // namespace mbrep
