#pragma once

#include <cstdint>

namespace curtainlab {

// splitmix64, used both as a stream generator and as the seed hasher.
// We avoid <random> distributions: their output is implementation-defined,
// and scenario runs must be byte-identical across platforms.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL + index * 0xff51afd7ed558ccdULL);
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : state_(seed) {
        // warm up so that small seeds do not produce small first outputs
        splitmix64(state_);
        splitmix64(state_);
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // uniform in [0, 1)
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // uniform integer in [0, n)
    std::uint64_t next_below(std::uint64_t n) { return n ? next_u64() % n : 0; }

    // derived stream for sample `index`; keeps parallel sampling deterministic
    Rng fork(std::uint64_t index) const { return Rng(hash_combine(state_, index)); }

private:
    std::uint64_t state_;
};

} // namespace curtainlab
