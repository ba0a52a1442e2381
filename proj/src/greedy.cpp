#include "mbrep/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "mbrep/enumeration.hpp"
#include "mbrep/minweight.hpp"

namespace mbrep {

namespace {

struct Accumulator {
    // keyed by power-product value; digit accumulates multiplicities
    std::map<Int, Representation::Term> terms;

    void add(const BaseSystem& system, const PowerProduct& pp, std::uint64_t digit) {
        auto it = terms.find(pp.value);
        if (it == terms.end()) {
            terms.emplace(pp.value, Representation::Term{pp, digit});
            return;
        }
        it->second.digit += digit;
        if (it->second.digit > system.max_digit()) {
            std::ostringstream msg;
            msg << "digit " << it->second.digit << " at power-product "
                << it->second.pp.value.get_str() << " exceeds max digit "
                << system.max_digit();
            throw DigitOverflowError(msg.str());
        }
    }

    Representation finish(const BaseSystem& system, bool table_merge) const {
        std::vector<Representation::Term> out;
        out.reserve(terms.size());
        for (const auto& [value, term] : terms) {
            if (!system.has_digit(term.digit)) {
                std::ostringstream msg;
                msg << "accumulated digit " << term.digit << " at power-product "
                    << value.get_str() << " is not in the digit set";
                if (table_merge) throw CollisionError(msg.str());
                throw DigitOverflowError(msg.str());
            }
            out.push_back(term);
        }
        return Representation::create(system, std::move(out));
    }
};

}  // namespace

GreedyResult greedy_encode(const BaseSystem& system, const Int& n) {
    if (n < 0) throw ValidationError("greedy_encode: n must be >= 0");
    GreedyResult result;
    Accumulator acc;
    Int remainder = n;
    while (remainder > 0) {
        PowerProduct b = largest_leq(system, remainder);
        remainder -= b.value;
        acc.add(system, b, 1);
        ++result.steps;
    }
    result.representation = acc.finish(system, false);
    return result;
}

bool GreedyTable::covers(const Int& n) const {
    return n >= 0 && fits_u64(n) && to_u64(n) <= limit() && !reps_.empty();
}

const Representation& GreedyTable::at(std::uint64_t n) const {
    if (reps_.empty() || n >= reps_.size()) {
        throw MissingTableEntryError("greedy table: no entry for " + std::to_string(n));
    }
    return reps_[n];
}

GreedyTable build_greedy_table(const BaseSystem& system, std::uint64_t n0) {
    SolverContext ctx =
        make_solver_context(system, Int(static_cast<unsigned long>(std::max<std::uint64_t>(n0, 1))), n0);
    std::vector<Representation> reps(n0 + 1);
    for (std::uint64_t n = 1; n <= n0; ++n) {
        MinWeightResult r = minimal_weight_exact(ctx, Int(static_cast<unsigned long>(n)));
        if (r.status != SolveStatus::found) {
            throw MissingTableEntryError("greedy table: " + std::to_string(n) +
                                         " has no representation");
        }
        reps[n] = std::move(r.witness);
    }
    return GreedyTable(std::move(reps));
}

GreedyResult greedy_encode_with_table(const BaseSystem& system, const Int& n,
                                      const GreedyTable& table) {
    if (n < 0) throw ValidationError("greedy_encode: n must be >= 0");
    GreedyResult result;
    Accumulator acc;
    Int remainder = n;
    while (remainder > 0) {
        if (table.covers(remainder)) {
            const Representation& entry = table.at(to_u64(remainder));
            try {
                for (const auto& term : entry.terms()) {
                    acc.add(system, term.pp, term.digit);
                }
            } catch (const DigitOverflowError& e) {
                throw CollisionError(std::string("table splice: ") + e.what());
            }
            result.used_table = true;
            remainder = 0;
            break;
        }
        PowerProduct b = largest_leq(system, remainder);
        remainder -= b.value;
        acc.add(system, b, 1);
        ++result.steps;
    }
    result.representation = acc.finish(system, result.used_table);
    return result;
}

GreedyProfile greedy_profile(const BaseSystem& system, std::uint64_t n_from,
                             std::uint64_t n_to, unsigned jobs) {
    if (n_from < 1 || n_from > n_to) {
        throw ValidationError("greedy_profile: need 1 <= n_from <= n_to");
    }
    GreedyProfile profile;
    profile.n_from = n_from;
    profile.n_to = n_to;
    profile.entries.resize(n_to - n_from + 1);

    auto worker = [&](std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t n = lo; n < hi; ++n) {
            GreedyProfileEntry& e = profile.entries[n - n_from];
            e.n = n;
            try {
                GreedyResult r = greedy_encode(system, Int(static_cast<unsigned long>(n)));
                e.steps = static_cast<std::uint32_t>(r.steps);
                e.weight = static_cast<std::uint32_t>(r.representation.weight());
                if (n >= 3) {
                    const double logn = std::log(static_cast<double>(n));
                    e.normalized = e.steps * std::log(logn) / logn;
                }
            } catch (const Error&) {
                e.failed = true;
            }
        }
    };

    if (jobs <= 1) {
        worker(n_from, n_to + 1);
    } else {
        std::vector<std::thread> threads;
        const std::uint64_t total = n_to - n_from + 1;
        const std::uint64_t chunk = (total + jobs - 1) / jobs;
        for (unsigned t = 0; t < jobs; ++t) {
            const std::uint64_t lo = n_from + t * chunk;
            if (lo > n_to) break;
            const std::uint64_t hi = std::min(n_to + 1, lo + chunk);
            threads.emplace_back(worker, lo, hi);
        }
        for (auto& th : threads) th.join();
    }

    std::uint32_t best = 0;
    for (const auto& e : profile.entries) {
        if (e.failed) continue;
        if (e.steps > best) {
            best = e.steps;
            profile.records.emplace_back(e.n, e.steps);
        }
        profile.max_normalized = std::max(profile.max_normalized, e.normalized);
    }
    return profile;
}

}  // namespace mbrep
