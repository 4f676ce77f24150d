#include "icsec/lattice.hpp"
#include "icsec/cf.hpp"
#include "icsec/parallel.hpp"
#include "icsec/power.hpp"
#include "icsec/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace icsec::lattice {

double mod_lattice(double x, double gamma) {
    if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
    return x - gamma * std::floor(x / gamma + 0.5);
}

double quantize(double x, double gamma) {
    if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
    double t = x / gamma;
    double r = (t >= 0) ? std::ceil(t - 0.5) : -std::ceil(-t - 0.5);
    return gamma * r;
}

double NestedScalarChain::second_moment(size_t idx) const {
    double g = levels.at(idx).gamma;
    return g * g / 12.0;
}

int NestedScalarChain::find(Role role, int user) const {
    for (size_t k = 0; k < levels.size(); ++k)
        if (levels[k].role == role && levels[k].user == user) return int(k);
    return -1;
}

NestedScalarChain NestedScalarChain::build(std::vector<Level> levels) {
    if (levels.empty()) throw std::invalid_argument("empty lattice chain");
    for (const auto& lv : levels) {
        if (!(lv.gamma > 0)) throw std::invalid_argument("lattice scale must be positive");
        if (lv.user < 1) throw std::invalid_argument("lattice user index is 1-based");
    }
    for (size_t k = 0; k + 1 < levels.size(); ++k) {
        const Level& a = levels[k];
        const Level& b = levels[k + 1];
        int ra = int(a.role), rb = int(b.role);
        bool ordered = ra < rb || (ra == rb && a.user > b.user);
        if (!ordered) throw std::invalid_argument("chain levels out of order");
        double ratio = a.gamma / b.gamma;
        double rounded = std::round(ratio);
        if (rounded < 1 || std::abs(ratio - rounded) > 1e-9)
            throw std::invalid_argument("chain scales must nest by integer ratios");
    }
    for (size_t k = 0; k < levels.size(); ++k)
        for (size_t l = k + 1; l < levels.size(); ++l)
            if (levels[k].role == levels[l].role && levels[k].user == levels[l].user)
                throw std::invalid_argument("duplicate chain level");
    NestedScalarChain c;
    c.levels = std::move(levels);
    return c;
}

std::vector<double> dither_encode(const std::vector<double>& t, const std::vector<double>& d,
                                  double gamma_c) {
    if (t.size() != d.size()) throw std::invalid_argument("message/dither length mismatch");
    std::vector<double> x(t.size());
    for (size_t k = 0; k < t.size(); ++k) x[k] = mod_lattice(t[k] + d[k], gamma_c);
    return x;
}

namespace {

std::vector<double> coset_reps(int q) {
    std::vector<double> r(q);
    for (int k = 0; k < q; ++k) r[k] = mod_lattice(double(k), double(q));
    return r;
}

CryptoCheck crypto_enumerate(int q, int dither_support) {
    if (q < 2) throw std::invalid_argument("need at least two cosets");
    const double gc = double(q);
    std::vector<double> reps = coset_reps(q);
    // counts[a][b]: message coset a folded to output coset b
    std::vector<std::vector<long long>> cnt(q, std::vector<long long>(q, 0));
    CryptoCheck out;
    out.q = q;
    for (int a = 0; a < q; ++a) {
        for (int u = 0; u < dither_support; ++u) {
            double w = mod_lattice(reps[a] + reps[u], gc);
            int b = -1;
            for (int k = 0; k < q; ++k)
                if (w == reps[k]) { b = k; break; }
            if (b < 0) {
                out.exact = false;
                double bestd = 1e300;
                for (int k = 0; k < q; ++k) {
                    double d2 = std::abs(w - reps[k]);
                    if (d2 < bestd) { bestd = d2; b = k; }
                }
            }
            ++cnt[a][b];
        }
    }
    const double D = double(dither_support);
    for (int a = 0; a < q; ++a) {
        double tv = 0;
        for (int b = 0; b < q; ++b) tv += std::abs(double(cnt[a][b]) / D - 1.0 / q);
        out.tv_max = std::max(out.tv_max, 0.5 * tv);
    }
    // I from integer counts: the full-support case gives log2 of exactly 1.0
    long long N = (long long)q * dither_support;
    double mi = 0;
    for (int a = 0; a < q; ++a) {
        for (int b = 0; b < q; ++b) {
            if (cnt[a][b] == 0) continue;
            long long row = dither_support;
            long long col = 0;
            for (int a2 = 0; a2 < q; ++a2) col += cnt[a2][b];
            double arg = double(cnt[a][b] * N) / double(row * col);
            mi += (double(cnt[a][b]) / double(N)) * std::log2(arg);
        }
    }
    out.mutual_info = mi;
    return out;
}

} // namespace

CryptoCheck crypto_lemma_check(int q) { return crypto_enumerate(q, q); }

CryptoCheck crypto_lemma_check_subset(int q) {
    if (q < 2) throw std::invalid_argument("need at least two cosets");
    return crypto_enumerate(q, q - 1);
}

EntropyCheck quantization_entropy_check(double h_msg, double h_jam,
                                        const std::vector<double>& Pmsg,
                                        const std::vector<double>& Pjam,
                                        long long nsamples, uint64_t seed) {
    const size_t M = Pmsg.size();
    if (M == 0 || Pjam.size() != M) throw std::invalid_argument("beam power length mismatch");
    if (nsamples < 1) throw std::invalid_argument("need samples");
    for (double p : Pmsg)
        if (p < 0) throw std::invalid_argument("negative power");
    for (double p : Pjam)
        if (p < 0) throw std::invalid_argument("negative power");

    size_t mstar = 0;
    for (size_t m = 1; m < M; ++m)
        if (Pjam[m] > Pjam[mstar]) mstar = m;
    const double den = h_jam * h_jam * Pjam[mstar];
    if (den <= 0) throw std::domain_error("entropy bound undefined without jamming");
    const double pairpow = h_msg * h_msg * Pmsg[mstar] + den;
    const double gamma = std::sqrt(12.0 * pairpow);
    double total = 0;
    std::vector<double> wm(M), wj(M);
    for (size_t m = 0; m < M; ++m) {
        double rm = h_msg * h_msg * Pmsg[m];
        double rj = h_jam * h_jam * Pjam[m];
        total += rm + rj;
        wm[m] = std::sqrt(12.0 * rm);
        wj[m] = std::sqrt(12.0 * rj);
    }

    const int nchunk = 256;
    std::vector<std::unordered_map<long long, long long>> hist(nchunk);
#pragma omp parallel for schedule(dynamic) num_threads(thread_cap())
    for (int c = 0; c < nchunk; ++c) {
        long long lo = nsamples * c / nchunk;
        long long hi = nsamples * (c + 1) / nchunk;
        SplitMix64 rng(child_seed(seed, uint64_t(c)));
        auto& h = hist[c];
        for (long long s = lo; s < hi; ++s) {
            double U = 0;
            for (size_t m = 0; m < M; ++m) {
                U += (rng.u01() - 0.5) * wm[m];
                U += (rng.u01() - 0.5) * wj[m];
            }
            double t = U / gamma;
            long long cell = (long long)((t >= 0) ? std::ceil(t - 0.5) : -std::ceil(-t - 0.5));
            ++h[cell];
        }
    }
    std::unordered_map<long long, long long> merged;
    for (auto& h : hist)
        for (auto& [cell, c] : h) merged[cell] += c;

    EntropyCheck out;
    out.n = nsamples;
    out.gamma = gamma;
    out.cells = int(merged.size());
    out.bound = std::log2(total / den);
    double H = 0, H2 = 0;
    for (auto& [cell, c] : merged) {
        double p = double(c) / double(nsamples);
        double l = -std::log2(p);
        H += p * l;
        H2 += p * l * l;
    }
    out.entropy = H;
    out.se = std::sqrt(std::max(0.0, H2 - H * H) / double(nsamples));
    return out;
}

ToyResult toy_end_to_end(const ToyConfig& cfg) {
    if (cfg.K < 3) throw std::invalid_argument("K must be >= 3");
    if (cfg.q < 2) throw std::invalid_argument("need at least two cosets");
    if (cfg.blocks < 1 || cfg.trials < 1) throw std::invalid_argument("need blocks and trials");

    const int K = cfg.K;
    const double gf = 1.0;
    const double gc = gf * cfg.q;
    const double P = 1.0;
    const double sigma_z = std::pow(10.0, -cfg.snr_db / 20.0) * std::sqrt(P);
    const double cP = std::sqrt(P / (gc * gc / 12.0));
    std::vector<double> reps = coset_reps(cfg.q);

    // the transceiver's lattice structure; build() enforces the nesting
    std::vector<Level> levels;
    for (int u = K; u >= 1; --u) levels.push_back({Role::Shaping, u, gc});
    for (int u = K; u >= 1; --u) levels.push_back({Role::MessageFine, u, gf});
    NestedScalarChain chain = NestedScalarChain::build(levels);
    (void)chain;

    std::vector<long long> errs(cfg.trials, 0);
#pragma omp parallel for schedule(dynamic) num_threads(thread_cap())
    for (int trial = 0; trial < cfg.trials; ++trial) {
        uint64_t tseed = child_seed(cfg.seed, uint64_t(trial));
        channel::ChannelMatrix H = channel::sample_channel(K, cfg.spec, tseed);
        SplitMix64 rng(child_seed(tseed, 1));

        // per-receiver equation and scale, fixed for the trial
        std::vector<std::vector<long long>> a_user(K, std::vector<long long>(K, 0));
        std::vector<double> beta(K, 0.0);
        for (int i = 0; i < K; ++i) {
            cf::EffectiveMac mac;
            mac.receiver = i;
            mac.K = K;
            mac.h.resize(K);
            mac.P.assign(K, P);
            mac.source.resize(K);
            mac.h[0] = H.at(i, i) / sigma_z;
            mac.source[0] = i;
            int k = 1;
            for (int j = 0; j < K; ++j) {
                if (j == i) continue;
                mac.h[k] = H.at(j, i) / sigma_z;
                mac.source[k] = j;
                ++k;
            }
            cf::CoefficientSet cs = cf::best_coefficients_serial(mac, cfg.radius);
            const std::vector<long long>& a0 = cs.A[cs.order[0]];
            cf::CompRate cr = cf::computation_rate(mac, a0);
            beta[i] = cr.beta;
            for (int kk = 0; kk < K; ++kk) a_user[i][mac.source[kk]] = a0[kk];
        }

        long long e = 0;
        std::vector<double> t(K), d(K), x(K);
        for (int blk = 0; blk < cfg.blocks; ++blk) {
            for (int u = 0; u < K; ++u) {
                int idx = std::min(int(rng.u01() * cfg.q), cfg.q - 1);
                t[u] = reps[idx];
                d[u] = (rng.u01() - 0.5) * gc;
                x[u] = mod_lattice(t[u] + d[u], gc);
            }
            for (int i = 0; i < K; ++i) {
                double y = sigma_z * rng.gauss();
                for (int u = 0; u < K; ++u) y += H.at(u, i) * cP * x[u];
                double r = beta[i] * y / (sigma_z * cP);
                double v_true = 0;
                for (int u = 0; u < K; ++u) {
                    r -= double(a_user[i][u]) * d[u];
                    v_true += double(a_user[i][u]) * t[u];
                }
                double vhat = mod_lattice(quantize(r, gf), gc);
                if (vhat != mod_lattice(v_true, gc)) ++e;
            }
        }
        errs[trial] = e;
    }

    ToyResult out;
    out.decodes = (long long)cfg.trials * cfg.blocks * K;
    for (long long e : errs) out.errors += e;
    out.error_rate = double(out.errors) / double(out.decodes);
    return out;
}

} // namespace icsec::lattice
