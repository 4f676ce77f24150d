#pragma once
#include <cstdint>
#include <cmath>

namespace icsec {

// splitmix64: tiny, seedable, identical stream on every platform.
struct SplitMix64 {
    uint64_t s;
    explicit SplitMix64(uint64_t seed) : s(seed) {}
    uint64_t next() {
        s += 0x9E3779B97F4A7C15ull;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    // [0,1) with 53 random bits
    double u01() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * u01(); }
    // Box-Muller, first component only; u1 kept in (0,1]
    double gauss() {
        double u1 = double((next() >> 11) + 1) * 0x1.0p-53;
        double u2 = u01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }
};

// independent child stream per trial index
inline uint64_t child_seed(uint64_t master, uint64_t idx) {
    SplitMix64 r(master + 0x9E3779B97F4A7C15ull * (idx + 1));
    return r.next();
}

} // namespace icsec
