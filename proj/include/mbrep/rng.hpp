#pragma once

#include <cstdint>
#include <vector>

#include "mbrep/bigint.hpp"

namespace mbrep {

// Deterministic PRNG utilities.  Everything seeded here produces the same
// stream on every platform; std::uniform_int_distribution is avoided on
// purpose (its output is implementation-defined).

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// xoshiro256** seeded via splitmix64.  Separate streams are derived from
// (seed, stream) so parallel workers stay reproducible.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
        std::uint64_t sm = seed ^ (0x6a09e667f3bcc909ULL * (stream + 1));
        for (auto& word : s_) word = splitmix64(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, n) by rejection; n >= 1.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        while (true) {
            std::uint64_t x = next_u64();
            if (x >= threshold) return x % n;
        }
    }

    // Uniform in [lo, hi] inclusive.
    std::uint64_t range(std::uint64_t lo, std::uint64_t hi) {
        return lo + below(hi - lo + 1);
    }

    // Uniform integer in [0, 2^bits).
    Int bits(unsigned nbits) {
        Int x(0);
        unsigned remaining = nbits;
        while (remaining >= 64) {
            x <<= 64;
            x += Int(static_cast<unsigned long>(next_u64()));
            remaining -= 64;
        }
        if (remaining > 0) {
            x <<= remaining;
            std::uint64_t mask = (remaining == 64) ? ~0ULL : ((1ULL << remaining) - 1);
            x += Int(static_cast<unsigned long>(next_u64() & mask));
        }
        return x;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t s_[4];
};

}  // namespace mbrep
