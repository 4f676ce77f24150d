#include "icsec/channel.hpp"
#include "icsec/rng.hpp"
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace icsec::channel {

static bool starts_with(const std::string& s, const char* p) {
    return s.rfind(p, 0) == 0;
}

GainSpec GainSpec::parse(const std::string& s) {
    GainSpec out;
    out.text = s;
    double a = 0, b = 0, c = 0, d = 0;
    if (starts_with(s, "uniform(")) {
        if (std::sscanf(s.c_str(), "uniform(%lf,%lf)", &a, &b) != 2)
            throw std::invalid_argument("bad gain spec: " + s);
        if (!(0 < a && a < b))
            throw std::invalid_argument("uniform gain spec needs 0 < a < b: " + s);
        out.kind = Kind::Uniform;
        out.p0 = a; out.p1 = b;
    } else if (starts_with(s, "gaussmag(")) {
        if (std::sscanf(s.c_str(), "gaussmag(%lf,%lf)", &a, &b) != 2)
            throw std::invalid_argument("bad gain spec: " + s);
        if (!(b > 0))
            throw std::invalid_argument("gaussmag gain spec needs sigma > 0: " + s);
        out.kind = Kind::GaussMag;
        out.p0 = a; out.p1 = b;
    } else if (starts_with(s, "bands(")) {
        if (std::sscanf(s.c_str(), "bands(%lf,%lf,%lf,%lf)", &a, &b, &c, &d) != 4)
            throw std::invalid_argument("bad gain spec: " + s);
        if (!(0 < a && a < b && 0 < c && c < d))
            throw std::invalid_argument("bands gain spec needs 0 < lo < hi per band: " + s);
        out.kind = Kind::Bands;
        out.p0 = a; out.p1 = b; out.p2 = c; out.p3 = d;
    } else {
        throw std::invalid_argument("unknown gain spec: " + s);
    }
    return out;
}

static double draw_gain(SplitMix64& r, const GainSpec& spec, bool diag) {
    switch (spec.kind) {
    case GainSpec::Kind::Uniform:
        return r.uniform(spec.p0, spec.p1);
    case GainSpec::Kind::GaussMag: {
        // atomless and bounded away from zero
        for (;;) {
            double v = std::fabs(spec.p0 + spec.p1 * r.gauss());
            if (v > 1e-9) return v;
        }
    }
    case GainSpec::Kind::Bands:
        return diag ? r.uniform(spec.p0, spec.p1) : r.uniform(spec.p2, spec.p3);
    }
    return 0;
}

ChannelMatrix sample_channel(int K, const GainSpec& spec, uint64_t seed) {
    if (K < 3) throw std::invalid_argument("K must be >= 3");
    ChannelMatrix H;
    H.K = K;
    H.seed = seed;
    H.spec = spec.text;
    H.g.resize(size_t(K) * K);
    SplitMix64 r(seed);
    for (int j = 0; j < K; ++j)
        for (int i = 0; i < K; ++i)
            H.at(j, i) = draw_gain(r, spec, j == i);
    return H;
}

ChannelMatrix pad_dummy_user(const ChannelMatrix& H, const GainSpec& spec, uint64_t seed) {
    if (H.K % 2 == 0) throw std::invalid_argument("channel already has even K");
    int K = H.K, Kp = K + 1;
    ChannelMatrix P;
    P.K = Kp;
    P.seed = H.seed;
    P.spec = H.spec;
    P.dummy = Kp - 1;
    P.g.resize(size_t(Kp) * Kp);
    for (int j = 0; j < K; ++j)
        for (int i = 0; i < K; ++i)
            P.at(j, i) = H.at(j, i);
    SplitMix64 r(seed);
    for (int i = 0; i < Kp; ++i) P.at(K, i) = draw_gain(r, spec, K == i);
    for (int j = 0; j < K; ++j) P.at(j, K) = draw_gain(r, spec, false);
    return P;
}

nlohmann::ordered_json ChannelMatrix::to_json() const {
    nlohmann::ordered_json j;
    j["K"] = K;
    auto rows = nlohmann::ordered_json::array();
    for (int t = 0; t < K; ++t) {
        auto row = nlohmann::ordered_json::array();
        for (int rx = 0; rx < K; ++rx) row.push_back(at(t, rx));
        rows.push_back(std::move(row));
    }
    j["gains"] = std::move(rows);
    j["seed"] = seed;
    j["spec"] = spec;
    if (dummy >= 0) j["dummy"] = dummy + 1;
    return j;
}

ChannelMatrix ChannelMatrix::from_json(const nlohmann::ordered_json& j) {
    ChannelMatrix H;
    H.K = j.at("K").get<int>();
    if (H.K < 3) throw std::invalid_argument("K must be >= 3");
    H.seed = j.at("seed").get<uint64_t>();
    H.spec = j.at("spec").get<std::string>();
    H.g.resize(size_t(H.K) * H.K);
    const auto& rows = j.at("gains");
    if (int(rows.size()) != H.K) throw std::invalid_argument("gain row count != K");
    for (int t = 0; t < H.K; ++t) {
        if (int(rows[t].size()) != H.K) throw std::invalid_argument("gain column count != K");
        for (int rx = 0; rx < H.K; ++rx) H.at(t, rx) = rows[t][rx].get<double>();
    }
    if (j.contains("dummy")) H.dummy = j["dummy"].get<int>() - 1;
    return H;
}

} // namespace icsec::channel
