#pragma once
#include <cstdint>
#include <utility>
#include <vector>
#include "icsec/channel.hpp"

namespace icsec::align {

// Beam-forming dimension map: m in {1..M} <-> exponent tuples of length 2K-2
// with entries in {1..T}, M = T^(2K-2).
struct PhiMapping {
    int K = 0, T = 0;
    long long M = 0;
    PhiMapping(int K_, int T_);
};

using ExponentTuple = std::vector<int>;

ExponentTuple phi(long long m, const PhiMapping& map);
long long phi_inv(const ExponentTuple& r, const PhiMapping& map);

// Product of integer powers of channel-gain variables. Equality is decided on
// the exponent vectors, never on evaluated values.
struct Monomial {
    // ((tx, rx), exponent), sorted by variable id, exponents > 0
    std::vector<std::pair<std::pair<int, int>, int>> e;
    void bump(int tx, int rx, int add);
    void normalize();
    bool operator==(const Monomial& o) const { return e == o.e; }
    bool operator<(const Monomial& o) const { return e < o.e; }
    int exponent(int tx, int rx) const;
};

struct Precoded {
    double value = 1.0;
    Monomial mono;
};

// Beam m of user l's message: gains from transmitters l and K-l+1 toward every
// receiver except l, raised to the phi(m) exponents.
Precoded precoder_f(long long m, int l, const channel::ChannelMatrix& H, const PhiMapping& map);
// Beam m of user i's jamming, which protects user K-i+1: same construction with
// receiver K-i+1 excluded.
Precoded precoder_g(long long m, int i, const channel::ChannelMatrix& H, const PhiMapping& map);

struct AlignedSet {
    std::vector<std::pair<long long, long long>> pairs; // (message beam, jamming beam)
    std::vector<long long> S;                           // message beams that align
};

// Aligned beams of user l's message at unintended receiver i: message beam m
// pairs with jamming beam m' of user K-l+1 when the shifted monomials match.
AlignedSet aligned_set(int l, int i, const PhiMapping& map);
// Quadratic-time oracle doing literal monomial matching (small M only).
AlignedSet aligned_set_brute(int l, int i, const PhiMapping& map);

struct Fraction {
    long long num = 0, den = 1;
    double value() const { return double(num) / double(den); }
};

// |S|/M in closed form: ((T-1)/T)^2, independent of K.
Fraction aligned_fraction(int K, int T);

} // namespace icsec::align
