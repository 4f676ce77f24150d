#include "icsec/alignment.hpp"
#include "icsec/cf.hpp"
#include "icsec/channel.hpp"
#include "icsec/lattice.hpp"
#include "icsec/power.hpp"
#include "icsec/rates.hpp"
#include "icsec/rng.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace icsec;

namespace {

int fails = 0;

void verdict(int idx, bool ok, const std::string& what, const std::string& detail) {
    std::printf("criterion %d: %s %s (%s)\n", idx, ok ? "PASS" : "FAIL", what.c_str(),
                detail.c_str());
    if (!ok) ++fails;
}

std::string num(double v) {
    char b[40];
    std::snprintf(b, sizeof b, "%.4g", v);
    return b;
}

// ---- 1: aligned fraction closed form, exact and monotone -------------------

void criterion1() {
    bool ok = true;
    std::string note;
    int cases = 0;
    for (int K : {4, 6}) {
        double prev = -1;
        for (int T : {2, 3, 4}) {
            align::PhiMapping map(K, T);
            long long S = (long long)align::aligned_set(0, 1, map).pairs.size();
            auto fr = align::aligned_fraction(K, T);
            long long expect_num = (long long)(T - 1) * (T - 1);
            long long expect_den = (long long)T * T;
            // |S|/M must equal the closed form exactly, as integers
            if (S * expect_den != map.M * expect_num) ok = false;
            if (fr.num != expect_num || fr.den != expect_den) ok = false;
            if (!(fr.value() > prev)) ok = false;
            prev = fr.value();
            ++cases;
            // brute-force monomial matching agrees on the smallest instances
            if (T == 2 && K == 4) {
                auto b = align::aligned_set_brute(0, 1, map);
                if (b.S != align::aligned_set(0, 1, map).S) ok = false;
            }
        }
    }
    verdict(1, ok, "aligned fraction ((T-1)/T)^2, exact counts, monotone in T",
            std::to_string(cases) + " (K,T) cases");
}

// ---- 2: scaled-noise closed form against a refined beta grid ---------------

struct GridOut {
    double final_min, seen_min;
};

GridOut beta_grid(const std::vector<double>& h, const std::vector<double>& P,
                  const std::vector<long long>& a) {
    auto eval = [&](double beta) {
        double s = beta * beta;
        for (size_t k = 0; k < h.size(); ++k) {
            double dd = beta * h[k] - double(a[k]);
            s += P[k] * dd * dd;
        }
        return s;
    };
    double bound = 0;
    for (size_t k = 0; k < h.size(); ++k) bound += P[k] * double(a[k]) * double(a[k]);
    double lo = -std::sqrt(bound) - 1, hi = std::sqrt(bound) + 1;
    double best = 1e300, best_b = 0, seen = 1e300;
    for (int stage = 0; stage < 4; ++stage) {
        double step = (hi - lo) / 1000;
        best = 1e300;
        for (int g = 0; g <= 1000; ++g) {
            double b = lo + step * g;
            double s = eval(b);
            seen = std::min(seen, s);
            if (s < best) {
                best = s;
                best_b = b;
            }
        }
        lo = best_b - step;
        hi = best_b + step;
    }
    return {best, seen};
}

void criterion2() {
    SplitMix64 rng(1001);
    double worst = 0;
    bool ok = true;
    for (int t = 0; t < 10000; ++t) {
        std::vector<double> h(4), P(4);
        std::vector<long long> a(4);
        bool nz = false;
        for (int k = 0; k < 4; ++k) {
            h[k] = rng.uniform(0.2, 2.0);
            P[k] = std::exp(rng.uniform(0.0, std::log(1e3)));
            a[k] = (long long)std::floor(rng.uniform(-3.0, 4.0));
            if (a[k] > 3) a[k] = 3;
            nz = nz || a[k] != 0;
        }
        if (!nz) a[0] = 1;
        cf::EffectiveMac mac;
        mac.K = 4;
        mac.h = h;
        mac.P = P;
        mac.source = {0, 1, 2, 3};
        auto r = cf::computation_rate(mac, a);
        auto g = beta_grid(h, P, a);
        worst = std::max(worst, std::abs(r.sigma2 - g.final_min));
        if (std::abs(r.sigma2 - g.final_min) > 1e-6) ok = false;
        if (r.sigma2 > g.seen_min + 1e-9) ok = false;
    }
    double worst_id = 0;
    SplitMix64 rng2(1002);
    for (int t = 0; t < 1000; ++t) {
        double h = rng2.uniform(0.1, 3.0);
        double P = std::exp(rng2.uniform(0.0, std::log(1e4)));
        cf::EffectiveMac mac;
        mac.K = 1;
        mac.h = {h};
        mac.P = {P};
        mac.source = {0};
        auto r = cf::computation_rate(mac, {1});
        double gap = std::abs(r.rate - 0.5 * std::log2(1 + h * h * P));
        worst_id = std::max(worst_id, gap);
        if (gap > 1e-9) ok = false;
    }
    verdict(2, ok, "closed-form noise matches the beta grid and the one-user capacity",
            "grid gap " + num(worst) + ", identity gap " + num(worst_id));
}

// ---- 3: selected combinations have full rank and ordered rates -------------

void criterion3() {
    auto spec = channel::GainSpec::parse("uniform(0.5,1.5)");
    SplitMix64 rng(3003);
    bool ok = true;
    int bad_rank = 0, bad_order = 0;
    for (int t = 0; t < 1000; ++t) {
        auto H = channel::sample_channel(4, spec, child_seed(77, uint64_t(t)));
        double P = std::exp(rng.uniform(std::log(10.0), std::log(1e4)));
        auto prof = power::uniform_profile(H, P, 1, 0.3);
        auto mac = cf::build_effective_mac(int(t % 4), H, prof);
        auto cs = cf::best_coefficients(mac, 3);
        double m[4][4];
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) m[r][c] = double(cs.A[size_t(r)][size_t(c)]);
        double det = 1;
        for (int c = 0; c < 4; ++c) {
            int piv = -1;
            for (int r = c; r < 4; ++r)
                if (std::abs(m[r][c]) > 1e-12) { piv = r; break; }
            if (piv < 0) { det = 0; break; }
            if (piv != c) {
                for (int k = 0; k < 4; ++k) std::swap(m[piv][k], m[c][k]);
                det = -det;
            }
            det *= m[c][c];
            for (int r = c + 1; r < 4; ++r) {
                double f = m[r][c] / m[c][c];
                for (int k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
            }
        }
        if (std::abs(det) < 0.5) {
            ok = false;
            ++bad_rank;
        }
        for (int r = 0; r + 1 < 4; ++r)
            if (cs.rate[size_t(r)] < cs.rate[size_t(r + 1)] - 1e-12) {
                ok = false;
                ++bad_order;
            }
    }
    verdict(3, ok, "1000 seeded selections: full rank, nonincreasing rates",
            std::to_string(bad_rank) + " rank / " + std::to_string(bad_order) + " order failures");
}

// ---- 4: penalty invariant to the power budget under frozen fractions -------

void criterion4() {
    auto spec = channel::GainSpec::parse("uniform(0.5,1.5)");
    bool ok = true;
    double worst = 0;
    for (uint64_t s = 1; s <= 100; ++s) {
        auto H = channel::sample_channel(4, spec, s);
        auto ref = power::fixed_fraction_profile(H, 1e6, 1, 0.3);
        auto lo = power::with_power(ref, 1e3);
        auto hi = power::with_power(ref, 1e5);
        for (int l = 0; l < 4; ++l) {
            double gap = std::abs(rates::penalty_m1(l, H, lo) - rates::penalty_m1(l, H, hi));
            worst = std::max(worst, gap);
            if (gap > 1e-9) ok = false;
        }
    }
    verdict(4, ok, "penalty identical at P and 100P", "largest gap " + num(worst));
}

// ---- 5: sum secure rate grows at the K/2-like slope ------------------------

void criterion5() {
    auto spec = channel::GainSpec::parse("bands(1.2,1.8,0.0018,0.0022)");
    std::vector<double> grid = {1e2, 1e3, 1e4, 1e5, 1e6};
    auto res = rates::dof_sweep(4, spec, grid, 10, 1, 0.3, 4);
    double top_worst = 0;
    for (const auto& cv : res.curves)
        top_worst = std::max(top_worst, cv.points.back().ssdf);
    bool ok = res.mean_slope >= 0.8 && res.mean_slope <= 1.05 && top_worst <= 1.05;
    verdict(5, ok, "10-channel power sweep: slope in [0.8,1.05], top ssdf <= 1.05",
            "mean slope " + num(res.mean_slope) + ", worst top ssdf " + num(top_worst));
}

// ---- 6: dither uniformity, exactly ----------------------------------------

void criterion6() {
    bool ok = true;
    double sub_min = 1e300;
    for (int q = 2; q <= 64; ++q) {
        auto c = lattice::crypto_lemma_check(q);
        if (!(c.tv_max == 0.0) || !(c.mutual_info == 0.0) || !c.exact) ok = false;
        auto s = lattice::crypto_lemma_check_subset(q);
        sub_min = std::min(sub_min, s.tv_max);
        if (!(s.tv_max > 0.0)) ok = false;
    }
    verdict(6, ok, "folded dither exactly uniform for q in 2..64, control leaks",
            "control tv >= " + num(sub_min));
}

// ---- 7: quantized observable entropy under its bound -----------------------

void criterion7() {
    auto e1 = lattice::quantization_entropy_check(1, 1, {1.0}, {1.0}, 1000000, 424);
    std::vector<double> p(4, 0.25);
    auto e4 = lattice::quantization_entropy_check(1, 1, p, p, 1000000, 425);
    bool ok = e1.entropy <= e1.bound + 3 * e1.se && e4.entropy <= e4.bound + 3 * e4.se;
    verdict(7, ok, "entropy within bound + 3 stderr at 1e6 samples, 1 and 4 beams",
            "H1 " + num(e1.entropy) + " vs " + num(e1.bound) + ", H4 " + num(e4.entropy) +
                " vs " + num(e4.bound));
}

// ---- 8: toy transceiver over the snr cliff ---------------------------------

void criterion8() {
    lattice::ToyConfig cfg;
    cfg.K = 4;
    cfg.blocks = 32;
    cfg.trials = 1000;
    cfg.spec = channel::GainSpec::parse("bands(2,4,0.05,0.15)");
    cfg.seed = 33;
    cfg.snr_db = 40;
    auto hi = lattice::toy_end_to_end(cfg);
    cfg.snr_db = -10;
    auto lo = lattice::toy_end_to_end(cfg);
    bool ok = hi.error_rate < 0.01 && lo.error_rate > 0.5;
    verdict(8, ok, "decode errors under 1% at 40 dB, over 50% at -10 dB",
            num(hi.error_rate) + " and " + num(lo.error_rate));
}

// ---- 9: tool output is a pure function of (config, seed) -------------------

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return "<missing " + path + ">";
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void criterion9(const char* binpath) {
    if (!binpath) {
        verdict(9, false, "tool reruns byte-identical", "tool path not provided");
        return;
    }
    std::filesystem::create_directories("acceptance_tmp");
    std::string bin = std::string("\"") + binpath + "\"";
    struct Job {
        const char* name;
        std::string args;
    };
    std::vector<Job> jobs = {
        {"rates", "rates --K 4 --seed 7 --P 300 --radius 3"},
        {"align", "align --K 6 --T 3"},
        {"sweep", "sweep --K 4 --seeds 3 --seed 5 --grid 100,1000,10000 --radius 3 --no_jam_cap"},
        {"toy", "toy --trials 20 --blocks 8 --seed 2"},
        {"check", "check --q_max 16 --entropy_samples 100000"},
    };
    bool ok = true;
    std::string bad;
    for (const auto& j : jobs) {
        std::string f1 = "acceptance_tmp/" + std::string(j.name) + "_1.csv";
        std::string f2 = "acceptance_tmp/" + std::string(j.name) + "_2.csv";
        std::string c1 = "ICSEC_THREADS=1 " + bin + " " + j.args + " --out " + f1;
        std::string c2 = "ICSEC_THREADS=4 " + bin + " " + j.args + " --out " + f2;
        if (std::string(j.name) == "sweep") {
            c1 += " --json_out acceptance_tmp/sweep_1.json";
            c2 += " --json_out acceptance_tmp/sweep_2.json";
        }
        if (std::system(c1.c_str()) != 0 || std::system(c2.c_str()) != 0) {
            ok = false;
            bad += std::string(j.name) + ":exit ";
            continue;
        }
        if (slurp(f1) != slurp(f2)) {
            ok = false;
            bad += std::string(j.name) + ":bytes ";
        }
    }
    if (slurp("acceptance_tmp/sweep_1.json") != slurp("acceptance_tmp/sweep_2.json")) {
        ok = false;
        bad += "sweep-json:bytes ";
    }
    verdict(9, ok, "tool reruns byte-identical across thread counts",
            bad.empty() ? std::to_string(jobs.size()) + " commands, csv+json" : bad);
}

} // namespace

int main(int argc, char** argv) {
    const char* binpath = argc > 1 ? argv[1] : nullptr;
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9(binpath);
    if (fails == 0) std::printf("all criteria passed\n");
    else std::printf("%d criteria failed\n", fails);
    return fails;
}
