#include "icsec/alignment.hpp"
#include <algorithm>
#include <map>
#include <stdexcept>

namespace icsec::align {

PhiMapping::PhiMapping(int K_, int T_) : K(K_), T(T_) {
    if (K < 4 || K % 2) throw std::invalid_argument("mapping needs even K >= 4");
    if (T < 1) throw std::invalid_argument("mapping needs T >= 1");
    M = 1;
    for (int j = 0; j < 2 * K - 2; ++j) {
        if (M > (1ll << 56) / T) throw std::invalid_argument("T^(2K-2) overflows");
        M *= T;
    }
}

ExponentTuple phi(long long m, const PhiMapping& map) {
    if (m < 1 || m > map.M) throw std::out_of_range("beam index out of range");
    ExponentTuple r(size_t(2 * map.K - 2));
    long long v = m - 1;
    // little-endian base-T digits, offset so entries live in {1..T}
    for (auto& d : r) {
        d = int(v % map.T) + 1;
        v /= map.T;
    }
    return r;
}

long long phi_inv(const ExponentTuple& r, const PhiMapping& map) {
    if (int(r.size()) != 2 * map.K - 2) throw std::invalid_argument("tuple length != 2K-2");
    long long m = 0, base = 1;
    for (int d : r) {
        if (d < 1 || d > map.T) throw std::out_of_range("exponent outside {1..T}");
    }
    for (size_t j = 0; j < r.size(); ++j) {
        m += (r[j] - 1) * base;
        base *= map.T;
    }
    return m + 1;
}

void Monomial::bump(int tx, int rx, int add) {
    e.push_back({{tx, rx}, add});
}

void Monomial::normalize() {
    std::sort(e.begin(), e.end());
    std::vector<std::pair<std::pair<int, int>, int>> out;
    for (auto& t : e) {
        if (!out.empty() && out.back().first == t.first) out.back().second += t.second;
        else out.push_back(t);
    }
    std::erase_if(out, [](auto& t) { return t.second == 0; });
    e = std::move(out);
}

int Monomial::exponent(int tx, int rx) const {
    for (auto& t : e)
        if (t.first == std::pair{tx, rx}) return t.second;
    return 0;
}

// Common body for both precoders: two blocks of K-1 receivers (excluded one
// skipped, ascending), transmitters (own, partner), digits from phi(m).
static Precoded monomial_product(long long m, int tx_a, int tx_b, int excluded_rx,
                                 const channel::ChannelMatrix& H, const PhiMapping& map) {
    ExponentTuple r = phi(m, map);
    Precoded out;
    int K = map.K, pos = 0;
    for (int k = 0; k < K; ++k) {
        if (k == excluded_rx) continue;
        out.mono.bump(tx_a, k, r[size_t(pos)]);
        out.mono.bump(tx_b, k, r[size_t(K - 1 + pos)]);
        for (int c = 0; c < r[size_t(pos)]; ++c) out.value *= H.at(tx_a, k);
        for (int c = 0; c < r[size_t(K - 1 + pos)]; ++c) out.value *= H.at(tx_b, k);
        ++pos;
    }
    out.mono.normalize();
    return out;
}

Precoded precoder_f(long long m, int l, const channel::ChannelMatrix& H, const PhiMapping& map) {
    if (l < 0 || l >= map.K) throw std::out_of_range("user out of range");
    return monomial_product(m, l, channel::partner(map.K, l), l, H, map);
}

Precoded precoder_g(long long m, int i, const channel::ChannelMatrix& H, const PhiMapping& map) {
    if (i < 0 || i >= map.K) throw std::out_of_range("user out of range");
    return monomial_product(m, i, channel::partner(map.K, i), channel::partner(map.K, i), H, map);
}

AlignedSet aligned_set(int l, int i, const PhiMapping& map) {
    if (i == l) throw std::invalid_argument("alignment is defined at unintended receivers only");
    if (l < 0 || l >= map.K || i < 0 || i >= map.K) throw std::out_of_range("user out of range");
    int K = map.K, T = map.T;
    // position of receiver i among {0..K-1} \ {l}
    int pos_i = 0;
    for (int k = 0; k < i; ++k)
        if (k != l) ++pos_i;

    AlignedSet out;
    for (long long m = 1; m <= map.M; ++m) {
        ExponentTuple r = phi(m, map);
        // the arriving gain bumps the (l,i) exponent; the partner's jamming beam
        // must absorb the bump on its mirrored digit pair
        if (r[size_t(pos_i)] > T - 1 || r[size_t(K - 1 + pos_i)] < 2) continue;
        ExponentTuple rp(r.size());
        for (int p = 0; p < K - 1; ++p) {
            rp[size_t(K - 1 + p)] = r[size_t(p)] + (p == pos_i ? 1 : 0);
            rp[size_t(p)] = r[size_t(K - 1 + p)] - (p == pos_i ? 1 : 0);
        }
        out.pairs.push_back({m, phi_inv(rp, map)});
        out.S.push_back(m);
    }
    return out;
}

AlignedSet aligned_set_brute(int l, int i, const PhiMapping& map) {
    if (i == l) throw std::invalid_argument("alignment is defined at unintended receivers only");
    int j = channel::partner(map.K, l);
    channel::ChannelMatrix ones;
    ones.K = map.K;
    ones.g.assign(size_t(map.K) * map.K, 1.0);

    std::map<Monomial, long long> by_mono;
    for (long long mp = 1; mp <= map.M; ++mp) {
        Monomial g = precoder_g(mp, j, ones, map).mono;
        g.bump(j, i, 1);
        g.normalize();
        by_mono.emplace(std::move(g), mp);
    }
    AlignedSet out;
    for (long long m = 1; m <= map.M; ++m) {
        Monomial f = precoder_f(m, l, ones, map).mono;
        f.bump(l, i, 1);
        f.normalize();
        auto it = by_mono.find(f);
        if (it != by_mono.end()) {
            out.pairs.push_back({m, it->second});
            out.S.push_back(m);
        }
    }
    return out;
}

Fraction aligned_fraction(int K, int T) {
    if (K < 4 || K % 2) throw std::invalid_argument("even K >= 4 required");
    if (T < 2) throw std::invalid_argument("T >= 2 required");
    return {(long long)(T - 1) * (T - 1), (long long)T * T};
}

} // namespace icsec::align
