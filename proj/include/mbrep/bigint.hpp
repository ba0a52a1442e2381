#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <string>

namespace mbrep {

// Exact arbitrary-precision integer.  All value comparisons in the library
// go through this type or through uint64_t fast paths that mirror it.
using Int = mpz_class;

inline Int pow_int(std::uint64_t base, std::uint32_t exp) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
    return r;
}

inline bool fits_u64(const Int& x) {
    return mpz_sgn(x.get_mpz_t()) >= 0 && mpz_fits_ulong_p(x.get_mpz_t()) != 0;
}

inline std::uint64_t to_u64(const Int& x) {
    return mpz_get_ui(x.get_mpz_t());
}

// Number of bits in x (0 for x = 0).
inline std::size_t bit_length(const Int& x) {
    if (mpz_sgn(x.get_mpz_t()) == 0) return 0;
    return mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline std::uint64_t popcount(const Int& x) {
    return mpz_popcount(x.get_mpz_t());
}

inline Int powm(const Int& base, const Int& exp, const Int& mod) {
    Int r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
    return r;
}

// Largest e >= 0 with base^e <= x.  Exact repeated multiplication; never
// touches floating point.  Requires base > 1 and x >= 1.
inline std::uint32_t floor_log(std::uint64_t base, const Int& x) {
    std::uint32_t e = 0;
    Int p(1);
    Int next;
    while (true) {
        next = p * static_cast<unsigned long>(base);
        if (next > x) break;
        p = next;
        ++e;
    }
    return e;
}

// ceil(log2(x)) for x >= 1.
inline unsigned ceil_log2_u64(std::uint64_t x) {
    unsigned bits = 0;
    while ((std::uint64_t(1) << bits) < x) {
        ++bits;
        if (bits == 64) break;
    }
    return bits;
}

inline std::string to_string(const Int& x) {
    return x.get_str(10);
}

}  // namespace mbrep
