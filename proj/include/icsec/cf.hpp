#pragma once
#include <vector>
#include <cstdint>
#include "icsec/channel.hpp"
#include "icsec/power.hpp"

namespace icsec::cf {

// One receiver's view after unaligned jamming has been folded into the noise.
// Entry 0 is the receiver's own message; entries 1..K-1 are the aligned
// (interferer message + protecting jam) pairs, interferer index ascending.
// Noise is unit variance by construction.
struct EffectiveMac {
    int receiver = -1;
    int K = 0;                   // number of entries (== number of users)
    std::vector<double> h;       // effective gains
    std::vector<double> P;       // effective powers
    std::vector<int> source;     // source[k] = user whose message drives entry k
};

EffectiveMac build_effective_mac(int receiver, const channel::ChannelMatrix& H,
                                 const power::PowerProfile& prof, bool enforce_cap = true);

struct CompRate {
    double rate = 0.0;    // bits per channel use, clipped at zero
    double sigma2 = 0.0;  // effective noise after MMSE scaling and side info
    double beta = 0.0;    // optimal receiver scale
};

// Effective noise and rate for integer combination a, given previously decoded
// combinations as noiseless side information. Throws on a == 0, size mismatch,
// or a within span(decoded).
CompRate computation_rate(const EffectiveMac& mac, const std::vector<long long>& a,
                          const std::vector<std::vector<long long>>& decoded = {});

// K decoded combinations in presentation order: rates nonincreasing, ties
// broken by sigma2 ascending then decode step. order[s] gives the presentation
// row decoded at step s; sigma/rate are the conditional values at decode time.
struct CoefficientSet {
    std::vector<std::vector<long long>> A;
    std::vector<int> order;
    std::vector<double> sigma;
    std::vector<double> rate;
};

long long auto_radius(const EffectiveMac& mac);

// Greedy selection of K independent combinations, each maximizing
// computation_rate given the ones already chosen. Deterministic: candidates
// are scanned in lexicographic order with canonical sign (first nonzero
// positive) and the first maximizer wins.
CoefficientSet best_coefficients(const EffectiveMac& mac, long long radius);
CoefficientSet best_coefficients_serial(const EffectiveMac& mac, long long radius);

// Per-row rates recomputed from stored fields; equals CoefficientSet::rate.
std::vector<double> combination_rates(const EffectiveMac& mac, const CoefficientSet& cs);

// Achievable rate for the receiver's own message: limited by the worst
// (largest) effective noise among the K decoded combinations.
double own_message_rate(int receiver, const channel::ChannelMatrix& H,
                        const power::PowerProfile& prof, long long radius,
                        bool enforce_cap = true);

} // namespace icsec::cf
