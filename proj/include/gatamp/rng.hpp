#pragma once

#include <cstdint>

namespace gatamp {

/// splitmix64; used to derive independent stream seeds from (seed, indices).
inline std::uint64_t hash_mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    return hash_mix(hash_mix(hash_mix(seed ^ a) ^ b) ^ c);
}

/// xoshiro256** — self-contained so streams are identical across platforms
/// and standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm += 0x9e3779b97f4a7c15ULL;
            word = hash_mix(sm);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return n ? next_u64() % n : 0; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

/// Van der Corput radical inverse in base 2: 0, 1/2, 1/4, 3/4, 1/8, ...
/// Prefixes of the sequence are themselves uniform covers.
inline double van_der_corput(std::uint64_t i) {
    i = ((i & 0xaaaaaaaaaaaaaaaaULL) >> 1) | ((i & 0x5555555555555555ULL) << 1);
    i = ((i & 0xccccccccccccccccULL) >> 2) | ((i & 0x3333333333333333ULL) << 2);
    i = ((i & 0xf0f0f0f0f0f0f0f0ULL) >> 4) | ((i & 0x0f0f0f0f0f0f0f0fULL) << 4);
    i = ((i & 0xff00ff00ff00ff00ULL) >> 8) | ((i & 0x00ff00ff00ff00ffULL) << 8);
    i = ((i & 0xffff0000ffff0000ULL) >> 16) | ((i & 0x0000ffff0000ffffULL) << 16);
    i = (i >> 32) | (i << 32);
    return static_cast<double>(i >> 11) * 0x1.0p-53;
}

}  // namespace gatamp
