// Timing harness for the coefficient search: serial reference vs the
// OpenMP scan, plus one end-to-end sweep. Not a test; numbers only.
#include "icsec/cf.hpp"
#include "icsec/channel.hpp"
#include "icsec/parallel.hpp"
#include "icsec/power.hpp"
#include "icsec/rates.hpp"

#include <chrono>
#include <cstdio>
#include <vector>

using namespace icsec;
using clk = std::chrono::steady_clock;

static double seconds(clk::time_point a, clk::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

int main() {
    auto spec = channel::GainSpec::parse("uniform(0.5,1.5)");
    std::vector<cf::EffectiveMac> macs;
    for (uint64_t s = 1; s <= 24; ++s) {
        auto H = channel::sample_channel(4, spec, s);
        auto prof = power::uniform_profile(H, 1e4, 1, 0.3);
        macs.push_back(cf::build_effective_mac(int(s % 4), H, prof));
    }

    std::printf("threads available: %d\n\n", thread_cap());
    std::printf("%-28s %10s %10s %8s\n", "kernel", "serial s", "parallel s", "speedup");
    for (int radius : {3, 4, 5}) {
        double checksum_s = 0, checksum_p = 0;
        auto t0 = clk::now();
        for (const auto& m : macs) checksum_s += cf::best_coefficients_serial(m, radius).rate[0];
        auto t1 = clk::now();
        for (const auto& m : macs) checksum_p += cf::best_coefficients(m, radius).rate[0];
        auto t2 = clk::now();
        double ts = seconds(t0, t1), tp = seconds(t1, t2);
        char label[64];
        std::snprintf(label, sizeof label, "coefficient search r=%d", radius);
        std::printf("%-28s %10.3f %10.3f %7.2fx%s\n", label, ts, tp, ts / tp,
                    checksum_s == checksum_p ? "" : "  MISMATCH");
    }

    std::vector<double> grid = {1e2, 1e3, 1e4, 1e5};
    auto weak = channel::GainSpec::parse("bands(1.2,1.8,0.0018,0.0022)");
    auto t0 = clk::now();
    auto res = rates::dof_sweep(4, weak, grid, 6, 1, 0.3, 4);
    auto t1 = clk::now();
    std::printf("\nsweep (6 seeds x 4 powers): %.3f s, mean slope %.4f\n", seconds(t0, t1),
                res.mean_slope);
    return 0;
}
