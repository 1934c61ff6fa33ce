#pragma once

#include <cstdint>

namespace mcut {

// Deterministic cross-platform PRNG: xoshiro256++ seeded through splitmix64.
// Fixed here (not std::mt19937) so identical seeds give identical instances
// on every build; the exact algorithm is documented in the README.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& word : s_) {
            // splitmix64 step
            x += 0x9e3779b97f4a7c15ULL;
            uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    uint64_t next() {
        auto rotl = [](uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
        uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n) by 128-bit multiply (Lemire reduction without
    // the rejection step; bias is below 2^-64 and irrelevant here).
    uint64_t below(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(n)) >> 64);
    }

    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    bool chance(double p) { return uniform() < p; }

private:
    uint64_t s_[4];
};

}  // namespace mcut
