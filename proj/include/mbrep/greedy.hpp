#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mbrep/numsys.hpp"

namespace mbrep {

struct GreedyResult {
    Representation representation;
    std::uint64_t steps = 0;  // number of subtraction iterations
    bool used_table = false;
};

// Repeatedly subtracts the largest power-product <= remainder until zero.
// A power-product hit k times receives digit k; throws DigitOverflowError
// when an accumulated multiplicity is not in D.
GreedyResult greedy_encode(const BaseSystem& system, const Int& n);

/// Preprocessing table: representation of every integer in [0, size()-1].
/// Entry 0 is the empty representation.
class GreedyTable {
  public:
    GreedyTable() = default;
    explicit GreedyTable(std::vector<Representation> reps) : reps_(std::move(reps)) {}
    std::uint64_t limit() const { return reps_.empty() ? 0 : reps_.size() - 1; }
    bool covers(const Int& n) const;
    const Representation& at(std::uint64_t n) const;

  private:
    std::vector<Representation> reps_;
};

// Builds the table for 0..n0 with the exact minimal-weight solver.
GreedyTable build_greedy_table(const BaseSystem& system, std::uint64_t n0);

// Greedy as above while remainder > table limit; once the remainder is
// covered, the table entry is spliced in.  Colliding terms merge by exact
// digit addition; a merged digit outside D throws CollisionError.
GreedyResult greedy_encode_with_table(const BaseSystem& system, const Int& n,
                                      const GreedyTable& table);

struct GreedyProfileEntry {
    std::uint64_t n = 0;
    std::uint32_t steps = 0;
    std::uint32_t weight = 0;
    double normalized = 0.0;  // steps * log log n / log n, for n >= 3
    bool failed = false;      // greedy error recorded, sweep continues
};

struct GreedyProfile {
    std::uint64_t n_from = 0;
    std::uint64_t n_to = 0;
    std::vector<GreedyProfileEntry> entries;
    // Running maxima of the step count, ascending in both coordinates.
    std::vector<std::pair<std::uint64_t, std::uint32_t>> records;
    double max_normalized = 0.0;
};

// Per-n step counts plus records over [n_from, n_to]; `jobs` > 1 partitions
// the range across threads with a deterministic merge.
GreedyProfile greedy_profile(const BaseSystem& system, std::uint64_t n_from,
                             std::uint64_t n_to, unsigned jobs = 1);

}  // namespace mbrep
