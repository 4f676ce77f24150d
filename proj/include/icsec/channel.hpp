#pragma once
#include <cstdint>
#include <string>
#include <vector>
#include "json.hpp"

namespace icsec::channel {

// Gain distribution descriptor, parsed from a config string.
//   uniform(a,b)          i.i.d. entries, 0 < a < b
//   gaussmag(mu,sigma)    i.i.d. |gaussian|, truncated away from 0
//   bands(dlo,dhi,clo,chi) diagonal from (dlo,dhi), off-diagonal from (clo,chi)
struct GainSpec {
    enum class Kind { Uniform, GaussMag, Bands };
    Kind kind = Kind::Uniform;
    double p0 = 0, p1 = 0, p2 = 0, p3 = 0;
    std::string text;

    static GainSpec parse(const std::string& s);
};

struct ChannelMatrix {
    int K = 0;
    std::vector<double> g;   // row-major, gains[j*K+i] = gain from transmitter j at receiver i
    uint64_t seed = 0;
    std::string spec;
    int dummy = -1;          // index of the padded user, -1 when none

    double at(int tx, int rx) const { return g[size_t(tx) * K + rx]; }
    double& at(int tx, int rx) { return g[size_t(tx) * K + rx]; }

    nlohmann::ordered_json to_json() const;
    static ChannelMatrix from_json(const nlohmann::ordered_json& j);
};

// partner user in the jamming pairing (1-based K-i+1; 0-based K-1-i)
inline int partner(int K, int i) { return K - 1 - i; }

ChannelMatrix sample_channel(int K, const GainSpec& spec, uint64_t seed);

// Extends an odd-K channel by one user; the original block is preserved
// bit-exactly and the new row/column are sampled from the same spec.
ChannelMatrix pad_dummy_user(const ChannelMatrix& H, const GainSpec& spec, uint64_t seed);

} // namespace icsec::channel
