#include "icsec/power.hpp"
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icsec::power {

double PowerProfile::alpha_tot(int u) const {
    double s = 0;
    for (int m = 0; m < M; ++m) s += a(u, m);
    return s;
}

double PowerProfile::beta_tot(int u) const {
    double s = 0;
    for (int m = 0; m < M; ++m) s += b(u, m);
    return s;
}

static PowerProfile split_profile(const channel::ChannelMatrix& H, double P, double P_ref,
                                  int M, double jam_share, bool enforce_cap) {
    if (!(P > 0) || !(P_ref > 0)) throw std::invalid_argument("P must be positive");
    if (M < 1) throw std::invalid_argument("M must be >= 1");
    if (!(jam_share > 0 && jam_share < 1)) throw std::invalid_argument("jam_share must be in (0,1)");
    PowerProfile p;
    p.K = H.K;
    p.M = M;
    p.P = P;
    p.alpha.resize(size_t(H.K) * M);
    p.beta.resize(size_t(H.K) * M);
    for (int u = 0; u < H.K; ++u) {
        double h = H.at(u, channel::partner(H.K, u)); // arrives at the protected user's receiver
        double jam = jam_share * P_ref;
        if (enforce_cap) jam = std::min(jam, 1.0 / (h * h));
        double bfrac = jam / P_ref, afrac = 1.0 - bfrac;
        for (int m = 0; m < M; ++m) {
            p.alpha[size_t(u) * M + m] = afrac / M;
            p.beta[size_t(u) * M + m] = bfrac / M;
        }
    }
    return p;
}

PowerProfile uniform_profile(const channel::ChannelMatrix& H, double P, int M, double jam_share) {
    return split_profile(H, P, P, M, jam_share, true);
}

PowerProfile fixed_fraction_profile(const channel::ChannelMatrix& H, double P_ref, int M,
                                    double jam_share, bool enforce_cap) {
    return split_profile(H, P_ref, P_ref, M, jam_share, enforce_cap);
}

PowerProfile with_power(const PowerProfile& p, double P) {
    if (!(P > 0)) throw std::invalid_argument("P must be positive");
    PowerProfile q = p;
    q.P = P;
    return q;
}

PowerProfile message_only_profile(int K, double P, int M) {
    if (!(P > 0)) throw std::invalid_argument("P must be positive");
    PowerProfile p;
    p.K = K;
    p.M = M;
    p.P = P;
    p.alpha.assign(size_t(K) * M, 1.0 / M);
    p.beta.assign(size_t(K) * M, 0.0);
    return p;
}

std::vector<Violation> validate_profile(const PowerProfile& p, const channel::ChannelMatrix& H) {
    if (p.K != H.K) throw std::invalid_argument("profile/channel size mismatch");
    std::vector<Violation> out;
    const double tol = 1e-12;
    for (int u = 0; u < p.K; ++u) {
        for (int m = 0; m < p.M; ++m) {
            if (!(p.a(u, m) > 0)) out.push_back({"message fraction not positive", u, p.a(u, m)});
            if (!(p.b(u, m) > 0)) out.push_back({"jamming fraction not positive", u, p.b(u, m)});
        }
        double tot = p.alpha_tot(u) + p.beta_tot(u);
        if (tot > 1 + tol) out.push_back({"per-user power budget exceeded", u, tot - 1});
        double h = H.at(u, channel::partner(H.K, u));
        double cap = h * h * p.jam_power(u);
        if (cap > 1 + tol) out.push_back({"jamming bound exceeded at protected receiver", u, cap - 1});
    }
    return out;
}

int densest_component(const PowerProfile& p, int user) {
    int best = 0;
    for (int m = 1; m < p.M; ++m)
        if (p.b(user, m) > p.b(user, best)) best = m;
    return best;
}

} // namespace icsec::power
