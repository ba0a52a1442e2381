#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mbrep/bigint.hpp"
#include "mbrep/errors.hpp"

namespace mbrep {

/// A validated set of bases plus digit set.  Immutable after construction.
///
/// Invariants enforced by create(): every base > 1, bases pairwise distinct,
/// r >= 1; digits are nonnegative, contain 0 and 1, stored sorted ascending.
/// Multiplicative-independence flags are computed once from the factor
/// exponent matrix.
class BaseSystem {
  public:
    static BaseSystem create(std::vector<std::uint64_t> bases,
                             std::vector<std::uint64_t> digits);

    // Config text uses `bases = [2, 3]` / `digits = [0, 1]` lines;
    // '#' starts a comment.
    static BaseSystem from_config_text(std::string_view text);
    static BaseSystem from_config_file(const std::string& path);

    const std::vector<std::uint64_t>& bases() const { return bases_; }
    const std::vector<std::uint64_t>& digits() const { return digits_; }
    std::size_t r() const { return bases_.size(); }
    std::uint64_t min_base() const;
    std::uint64_t max_digit() const { return digits_.back(); }
    bool has_digit(std::uint64_t d) const;
    // Index of d in the sorted digit list; throws if absent.
    std::size_t digit_index(std::uint64_t d) const;
    bool has_base_two() const;

    bool full_set_independent() const { return full_set_independent_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& pairwise_independent() const {
        return pairwise_independent_;
    }

    // Powers of bases_[j] that fit in uint64, ascending from 1.  Used by the
    // fast paths in enumeration and greedy.
    const std::vector<std::uint64_t>& power_table(std::size_t j) const {
        return power_tables_[j];
    }

  private:
    BaseSystem() = default;
    std::vector<std::uint64_t> bases_;
    std::vector<std::uint64_t> digits_;
    bool full_set_independent_ = false;
    std::vector<std::pair<std::size_t, std::size_t>> pairwise_independent_;
    std::vector<std::vector<std::uint64_t>> power_tables_;
};

/// An exponent vector with its exact integer value b1^a1 * ... * br^ar.
struct PowerProduct {
    std::vector<std::uint32_t> exponents;
    Int value;

    bool operator==(const PowerProduct& other) const { return value == other.value; }
};

// Builds a PowerProduct and computes its value by exact multiplication.
PowerProduct make_power_product(const BaseSystem& system,
                                std::vector<std::uint32_t> exponents);

// Recomputes the value from the exponents; used by round-trip checks.
Int evaluate_power_product(const BaseSystem& system, const PowerProduct& pp);

/// A sparse multi-base representation: terms (B, d_B) with d_B nonzero,
/// kept sorted descending by power-product value, no duplicate values.
class Representation {
  public:
    struct Term {
        PowerProduct pp;
        std::uint64_t digit;
    };

    Representation() = default;
    // Validates digits against D, rejects duplicate power-product values,
    // sorts terms descending by value.
    static Representation create(const BaseSystem& system, std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t weight() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    Int value() const;

  private:
    std::vector<Term> terms_;
};

// Prime-exponent matrix of the bases: row j holds the exponents of base j
// over the ascending union of primes dividing any base.
struct FactorMatrix {
    std::vector<std::uint64_t> primes;
    std::vector<std::vector<std::uint32_t>> rows;
};

FactorMatrix factor_exponent_matrix(const std::vector<std::uint64_t>& bases);

// True iff the factor exponent matrix has full row rank over the rationals,
// i.e. no nontrivial signed-exponent product of the bases equals 1.
bool is_mult_independent_set(const std::vector<std::uint64_t>& bases);

enum class Completeness { guaranteed, exhaustively_checked, unknown };

std::string completeness_name(Completeness c);

struct ValidationReport {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairwise_independent_pairs;
    bool full_set_independent = false;
    Completeness completeness = Completeness::unknown;
    std::uint64_t completeness_limit = 0;
    std::vector<std::string> diagnostics;
};

// Reports independence and representability of a system.  Completeness is
// `guaranteed` when D contains {0..min(b)-1}, `exhaustively_checked` when an
// exact-solver sweep covers 1..completeness_limit, otherwise `unknown`.
ValidationReport validate_system(const BaseSystem& system,
                                 std::uint64_t completeness_limit);

}  // namespace mbrep
