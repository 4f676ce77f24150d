#pragma once
#include <cstdint>
#include <vector>
#include "icsec/channel.hpp"

namespace icsec::lattice {

// Scalar lattice gamma*Z. Nesting means gamma_coarse is an integer multiple of
// gamma_fine; the fundamental cell is [-gamma/2, gamma/2).
double mod_lattice(double x, double gamma);
// Nearest lattice point, halves rounded toward zero so the cell stays
// half-open on the right.
double quantize(double x, double gamma);

enum class Role {
    Shaping = 0,
    MessageCoarse = 1,
    JammingCoarse = 2,
    MessageFine = 3,
    JammingFine = 4,
};

struct Level {
    Role role;
    int user = 0;  // 1-based
    double gamma = 0;
};

// Chain of nested scalar lattices, coarsest first. Within a role users appear
// K..1 descending; successive gammas must divide (integer ratio >= 1).
struct NestedScalarChain {
    std::vector<Level> levels;

    static NestedScalarChain build(std::vector<Level> levels);
    double second_moment(size_t idx) const;
    int find(Role role, int user) const;  // -1 when absent
};

// Codeword for message point t under dither d, folded into the shaping cell.
std::vector<double> dither_encode(const std::vector<double>& t, const std::vector<double>& d,
                                  double gamma_c);

struct CryptoCheck {
    int q = 0;
    double tv_max = 0;       // max over messages of total variation to uniform
    double mutual_info = 0;  // bits between message and folded output
    bool exact = true;       // every folded sum landed exactly on a coset rep
};

// Exhaustive check that a uniform dither over the q coset representatives
// makes the folded sum uniform and independent of the message. Exact
// enumeration; both statistics are identically zero in IEEE arithmetic.
CryptoCheck crypto_lemma_check(int q);
// Negative control: dither restricted to q-1 cosets; tv_max = 1/q.
CryptoCheck crypto_lemma_check_subset(int q);

struct EntropyCheck {
    double entropy = 0;   // empirical, bits
    double bound = 0;     // log2(total received pair power / densest jam power)
    double se = 0;        // plug-in standard error of the entropy estimate
    long long n = 0;
    int cells = 0;
    double gamma = 0;
};

// Monte Carlo entropy of the eavesdropper's observable: per beam a uniform
// message component plus its protecting uniform jamming component, quantized
// at the scale whose cell second moment equals the densest received pair
// power. Pmsg/Pjam are transmit powers per beam; h_msg/h_jam the gains into
// the eavesdropper.
EntropyCheck quantization_entropy_check(double h_msg, double h_jam,
                                        const std::vector<double>& Pmsg,
                                        const std::vector<double>& Pjam,
                                        long long nsamples, uint64_t seed);

struct ToyConfig {
    int K = 4;
    int blocks = 32;       // per trial
    int trials = 1000;
    double snr_db = 40;
    int q = 4;             // coarse/fine ratio
    long long radius = 4;
    channel::GainSpec spec;
    uint64_t seed = 1;
};

struct ToyResult {
    long long decodes = 0;
    long long errors = 0;
    double error_rate = 0;
};

// Scalar dithered transceiver over fresh channels: every receiver decodes its
// best integer combination of the lattice codewords each block. Jamming off;
// this exercises encoding, folding, scaling and quantized decoding end to end.
ToyResult toy_end_to_end(const ToyConfig& cfg);

} // namespace icsec::lattice
