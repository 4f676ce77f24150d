#pragma once
#include <cstdint>
#include <vector>
#include "icsec/alignment.hpp"
#include "icsec/channel.hpp"
#include "icsec/power.hpp"

namespace icsec::rates {

// Rate loss that buys secrecy of user l's message at the worst unintended
// receiver. Single-component profiles only; the protecting jammer is l's
// pairing partner. Throws if that user does not jam.
double penalty_m1(int l, const channel::ChannelMatrix& H, const power::PowerProfile& prof);

// Multi-beam version: each aligned (message beam, jamming beam) pair at the
// eavesdropping receiver contributes to the numerator; the denominator is the
// partner's strongest received jamming beam.
double penalty_aligned(int l, const channel::ChannelMatrix& H, const power::PowerProfile& prof,
                       const align::PhiMapping& map);

struct UserRate {
    int user = 0;        // 0-based
    double r_comb = 0;   // decodable combination bound for the own message
    double penalty = 0;
    double r_secure = 0; // max(0, r_comb - penalty)
};

struct SecureRateReport {
    double P = 0;
    int K = 0;                        // users in the (possibly padded) system
    int dummy = -1;
    bool feasible = true;
    std::vector<power::Violation> violations;
    std::vector<UserRate> users;      // one row per user; dummy row is zero
    double sum_comb = 0;              // message-carrying users only
    double sum_secure = 0;
    double ssdf = 0;                  // sum_secure / (0.5*log2(1+P))
};

// Full per-user evaluation. Profiles with M > 1 need the beam mapping that
// produced them. An inadmissible profile yields feasible=false and no rows.
SecureRateReport secure_rate_report(const channel::ChannelMatrix& H,
                                    const power::PowerProfile& prof, long long radius,
                                    const align::PhiMapping* map = nullptr,
                                    bool enforce_cap = true);

struct SweepPoint {
    double P = 0;
    double sum_rate = 0;       // sum of secure rates
    double ssdf = 0;
    double penalty_check = 0;  // summed penalties; constant under fixed fractions
};

struct SweepCurve {
    uint64_t seed = 0;
    std::vector<SweepPoint> points;
    double slope = 0;          // least-squares slope vs 0.5*log2(1+P)
};

struct SweepResult {
    std::vector<double> grid;
    std::vector<SweepCurve> curves;
    double mean_slope = 0;
    double ssdf_top_mean = 0;
    bool with_uncapped = false;
    std::vector<double> uncapped_slopes;
    double uncapped_mean_slope = 0;
    bool uncapped_below_capped = false;
};

double ls_slope(const std::vector<double>& x, const std::vector<double>& y);

// One channel swept over the power grid with fractions frozen at the top grid
// point, so the jamming cap binds identically at every P.
SweepCurve sweep_channel(const channel::ChannelMatrix& H, const std::vector<double>& grid,
                         double jam_share, long long radius, bool enforce_cap = true);

// Family of seeded channels; the aggregate slope is the mean of per-seed
// slopes. include_uncapped repeats the sweep with the jamming bound ignored.
SweepResult dof_sweep(int K, const channel::GainSpec& spec, const std::vector<double>& grid,
                      int nseeds, uint64_t master_seed, double jam_share, long long radius,
                      bool include_uncapped = false);

} // namespace icsec::rates
