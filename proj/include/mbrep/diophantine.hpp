#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mbrep/numsys.hpp"

namespace mbrep {

/// Precision contract for the gap machinery.  mantissa_bits must leave at
/// least 64 spare bits below the scale 2^(-2 log2 M) of the smallest gap,
/// otherwise equal gap lengths could fail to cluster.
struct PrecisionPolicy {
    unsigned mantissa_bits = 256;
    double cluster_tolerance = 1e-12;
};

/// Exact fixed-point real: value = mantissa / 2^frac_bits.  Arithmetic on
/// these is exact integer arithmetic, so gap statistics are reproducible
/// bit for bit under a fixed policy.
struct FixedReal {
    Int mantissa;
    unsigned frac_bits = 0;

    double to_double() const;
    std::string to_decimal_string(std::size_t digits) const;
};

// lambda = log_p q to mantissa_bits fixed-point precision, certified by
// recomputation at two working precisions.  Rejects dependent pairs (their
// lambda is rational, which breaks the gap machinery downstream).
FixedReal log_ratio(std::uint64_t p, std::uint64_t q,
                    const PrecisionPolicy& policy = {});

struct Convergent {
    Int numerator;
    Int denominator;
};

// First `count` continued-fraction convergents of lambda.  Every emitted
// a/b is certified to satisfy |lambda - a/b| < 1/b^2 via exact interval
// arithmetic; PrecisionError when a CF step cannot be certified.
std::vector<Convergent> convergents(const FixedReal& lambda, std::size_t count);

/// Sorted fractional parts of (lambda * m) for m < M with circular gap
/// lengths, all in fixed-point scale 2^frac_bits.
struct FractionalPartSequence {
    FixedReal lambda;
    std::uint64_t M = 0;
    unsigned frac_bits = 0;
    std::vector<Int> sorted_points;
    std::vector<Int> gaps;            // gaps[i] = distance from point i to its successor
    std::vector<Int> clustered_gaps;  // distinct lengths after tolerance clustering, ascending
    Int max_gap;

    double max_gap_value() const;
};

FractionalPartSequence gap_stats(const FixedReal& lambda, std::uint64_t M,
                                 const PrecisionPolicy& policy = {});

// Incremental sweep over M = 1..M_max; the visitor receives the clustered
// gap lengths (ascending) for each M.  Produces the same gap multisets as
// per-M gap_stats calls.
void three_gap_sweep(
    const FixedReal& lambda, std::uint64_t M_max, const PrecisionPolicy& policy,
    const std::function<void(std::uint64_t M, const std::vector<Int>& clustered,
                             const Int& max_gap)>& visit);

// Constructive form of the nearest-power-product-below search: with
// M = ceil(log_q n), picks m < M minimizing frac(log_p n) - frac(lambda m) >= 0,
// sets l = floor(log_p n - lambda m) and returns p^l q^m.  The result is
// confirmed <= n by exact integer comparison.
PowerProduct nearest_below_via_lattice(std::uint64_t p, std::uint64_t q, const Int& n,
                                       const PrecisionPolicy& policy = {});

struct LemmaFitGridPoint {
    double kappa = 0;
    double C = 0;
    std::uint64_t violations = 0;
};

struct LemmaFit {
    bool accepted = false;
    double C = 0;
    double kappa = 0;
    std::pair<std::uint64_t, std::uint64_t> fit_range;
    std::pair<std::uint64_t, std::uint64_t> validation_range;
    double max_violation = 0;  // max over validation of delta - C (log n)^-kappa
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<LemmaFitGridPoint> grid;
};

// Fits C on a kappa grid {0.05,...,0.50} over the fit range as
// C(kappa) = max delta(n) (log n)^kappa with delta(n) = log(n / largest_leq(n)),
// then accepts the largest kappa with zero violations on a seeded sample of
// the validation range.
LemmaFit fit_lemma_constants(std::uint64_t p, std::uint64_t q,
                             std::pair<std::uint64_t, std::uint64_t> fit_range,
                             std::pair<std::uint64_t, std::uint64_t> validation_range,
                             std::uint64_t samples = 10000, std::uint64_t seed = 1);

struct GapDecayRow {
    std::uint64_t M = 0;
    double max_gap = 0;
};

struct GapDecayTable {
    std::vector<GapDecayRow> rows;
    double slope = 0;  // log-log regression slope; empirically -kappa
};

GapDecayTable gap_decay_table(std::uint64_t p, std::uint64_t q,
                              const std::vector<std::uint64_t>& M_list,
                              const PrecisionPolicy& policy = {});

// Star discrepancy of the first M fractional parts by the O(M log M) sorted
// formula; cross-check for the max-gap proxy at small M.
double star_discrepancy(const FixedReal& lambda, std::uint64_t M,
                        const PrecisionPolicy& policy = {});

}  // namespace mbrep
