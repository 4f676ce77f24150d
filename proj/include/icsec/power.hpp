#pragma once
#include <string>
#include <vector>
#include "icsec/channel.hpp"

namespace icsec::power {

// Per-user, per-component power split: message power alpha[u][m]*P, jamming
// power beta[u][m]*P. Fractions are stored, absolute powers derived.
struct PowerProfile {
    int K = 0, M = 1;
    double P = 0;
    std::vector<double> alpha; // K*M row-major fractions
    std::vector<double> beta;

    double a(int u, int m) const { return alpha[size_t(u) * M + m]; }
    double b(int u, int m) const { return beta[size_t(u) * M + m]; }
    double alpha_tot(int u) const;
    double beta_tot(int u) const;
    double msg_power(int u) const { return alpha_tot(u) * P; }
    double jam_power(int u) const { return beta_tot(u) * P; }
};

// Equal split over M components; per user the jamming total is
// min(jam_share*P, 1/h^2) where h is that user's gain into the receiver it
// protects, and the message takes the rest of the budget.
PowerProfile uniform_profile(const channel::ChannelMatrix& H, double P, int M, double jam_share);

// Same jamming rule with the cap frozen at P_ref, returned as fractions of
// P_ref; combined with with_power this keeps alpha,beta constant over a sweep.
PowerProfile fixed_fraction_profile(const channel::ChannelMatrix& H, double P_ref, int M,
                                    double jam_share, bool enforce_cap = true);

// Same fractions, different budget.
PowerProfile with_power(const PowerProfile& p, double P);

// Jamming disabled; test harness helper, not a scheme profile.
PowerProfile message_only_profile(int K, double P, int M);

struct Violation {
    std::string what;
    int user = 0;
    double slack = 0;
};

// Empty result means admissible: positive fractions, per-user budget, and the
// jamming bound at every receiver.
std::vector<Violation> validate_profile(const PowerProfile& p, const channel::ChannelMatrix& H);

// Component carrying the largest jamming power (ties: smallest index).
int densest_component(const PowerProfile& p, int user);

} // namespace icsec::power
