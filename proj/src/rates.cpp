#include "icsec/rates.hpp"
#include "icsec/cf.hpp"
#include "icsec/parallel.hpp"
#include "icsec/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icsec::rates {

using channel::ChannelMatrix;
using channel::partner;
using power::PowerProfile;

double penalty_m1(int l, const ChannelMatrix& H, const PowerProfile& prof) {
    const int K = H.K;
    if (prof.M != 1) throw std::invalid_argument("single-component penalty on multi-beam profile");
    if (l < 0 || l >= K) throw std::invalid_argument("user out of range");
    const int j = partner(K, l);
    const double Pl = prof.msg_power(l);
    const double Pj = prof.jam_power(j);
    if (Pj <= 0) throw std::domain_error("penalty undefined without jamming");
    double pen = 0;
    for (int i = 0; i < K; ++i) {
        if (i == l) continue;
        double hl = H.at(l, i), hj = H.at(j, i);
        double num = hl * hl * Pl + hj * hj * Pj;
        double den = hj * hj * Pj;
        pen = std::max(pen, std::log2(num / den));
    }
    return pen;
}

double penalty_aligned(int l, const ChannelMatrix& H, const PowerProfile& prof,
                       const align::PhiMapping& map) {
    const int K = H.K;
    if (l < 0 || l >= K) throw std::invalid_argument("user out of range");
    if (prof.M != map.M) throw std::invalid_argument("profile/mapping beam count mismatch");
    const int j = partner(K, l);
    const int mstar = power::densest_component(prof, j);
    double pen = 0;
    for (int i = 0; i < K; ++i) {
        if (i == l) continue;
        align::AlignedSet S = align::aligned_set(l, i, map);
        if (S.pairs.empty()) throw std::domain_error("no aligned beams; increase T");
        double hl = H.at(l, i), hj = H.at(j, i);
        double den = hj * hj * prof.b(j, mstar) * prof.P;
        if (den <= 0) throw std::domain_error("penalty undefined without jamming");
        double num = 0;
        for (auto [m, mp] : S.pairs) {
            num += hl * hl * prof.a(l, int(m - 1)) * prof.P +
                   hj * hj * prof.b(j, int(mp - 1)) * prof.P;
        }
        pen = std::max(pen, std::log2(num / den));
    }
    return pen;
}

SecureRateReport secure_rate_report(const ChannelMatrix& H, const PowerProfile& prof,
                                    long long radius, const align::PhiMapping* map,
                                    bool enforce_cap) {
    SecureRateReport rep;
    rep.P = prof.P;
    rep.K = H.K;
    rep.dummy = H.dummy;
    if (prof.M != 1 && map == nullptr)
        throw std::invalid_argument("multi-beam profile needs its mapping");
    if (enforce_cap) {
        rep.violations = power::validate_profile(prof, H);
        rep.feasible = rep.violations.empty();
        if (!rep.feasible) return rep;
    }
    for (int u = 0; u < H.K; ++u) {
        UserRate row;
        row.user = u;
        if (u != H.dummy) {
            row.r_comb = cf::own_message_rate(u, H, prof, radius, false);
            row.penalty = (prof.M == 1) ? penalty_m1(u, H, prof)
                                        : penalty_aligned(u, H, prof, *map);
            row.r_secure = std::max(0.0, row.r_comb - row.penalty);
            rep.sum_comb += row.r_comb;
            rep.sum_secure += row.r_secure;
        }
        rep.users.push_back(row);
    }
    rep.ssdf = rep.sum_secure / (0.5 * std::log2(1.0 + prof.P));
    return rep;
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope needs >= 2 points");
    double mx = 0, my = 0;
    for (size_t k = 0; k < x.size(); ++k) { mx += x[k]; my += y[k]; }
    mx /= double(x.size());
    my /= double(x.size());
    double sxx = 0, sxy = 0;
    for (size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
    }
    return sxy / sxx;
}

namespace {

SweepPoint sweep_point(const ChannelMatrix& H, const PowerProfile& ref, double P,
                       long long radius) {
    PowerProfile prof = power::with_power(ref, P);
    SweepPoint pt;
    pt.P = P;
    for (int u = 0; u < H.K; ++u) {
        if (u == H.dummy) continue;
        double rc = cf::own_message_rate(u, H, prof, radius, false);
        double pen = penalty_m1(u, H, prof);
        pt.sum_rate += std::max(0.0, rc - pen);
        pt.penalty_check += pen;
    }
    pt.ssdf = pt.sum_rate / (0.5 * std::log2(1.0 + P));
    return pt;
}

} // namespace

SweepCurve sweep_channel(const ChannelMatrix& H, const std::vector<double>& grid,
                         double jam_share, long long radius, bool enforce_cap) {
    if (grid.empty()) throw std::invalid_argument("empty power grid");
    double Pref = *std::max_element(grid.begin(), grid.end());
    PowerProfile ref = power::fixed_fraction_profile(H, Pref, 1, jam_share, enforce_cap);
    SweepCurve cv;
    cv.seed = H.seed;
    cv.points.resize(grid.size());
    for (size_t g = 0; g < grid.size(); ++g)
        cv.points[g] = sweep_point(H, ref, grid[g], radius);
    std::vector<double> x(grid.size()), y(grid.size());
    for (size_t g = 0; g < grid.size(); ++g) {
        x[g] = 0.5 * std::log2(1.0 + cv.points[g].P);
        y[g] = cv.points[g].sum_rate;
    }
    cv.slope = ls_slope(x, y);
    return cv;
}

SweepResult dof_sweep(int K, const channel::GainSpec& spec, const std::vector<double>& grid,
                      int nseeds, uint64_t master_seed, double jam_share, long long radius,
                      bool include_uncapped) {
    if (nseeds < 1) throw std::invalid_argument("need at least one seed");
    SweepResult res;
    res.grid = grid;

    std::vector<ChannelMatrix> chans;
    chans.reserve(nseeds);
    for (int s = 0; s < nseeds; ++s) {
        ChannelMatrix H = channel::sample_channel(K, spec, child_seed(master_seed, uint64_t(s)));
        if (K % 2) H = channel::pad_dummy_user(H, spec, child_seed(H.seed, 1));
        chans.push_back(std::move(H));
    }

    const int G = int(grid.size());
    auto run = [&](bool cap, std::vector<SweepCurve>& curves) {
        curves.assign(nseeds, {});
        std::vector<PowerProfile> refs(nseeds);
        double Pref = *std::max_element(grid.begin(), grid.end());
        for (int s = 0; s < nseeds; ++s) {
            refs[s] = power::fixed_fraction_profile(chans[s], Pref, 1, jam_share, cap);
            curves[s].seed = chans[s].seed;
            curves[s].points.resize(G);
        }
#pragma omp parallel for schedule(dynamic) collapse(2) num_threads(thread_cap())
        for (int s = 0; s < nseeds; ++s)
            for (int g = 0; g < G; ++g)
                curves[s].points[g] = sweep_point(chans[s], refs[s], grid[g], radius);
        for (int s = 0; s < nseeds; ++s) {
            std::vector<double> x(G), y(G);
            for (int g = 0; g < G; ++g) {
                x[g] = 0.5 * std::log2(1.0 + grid[g]);
                y[g] = curves[s].points[g].sum_rate;
            }
            curves[s].slope = ls_slope(x, y);
        }
    };

    run(true, res.curves);
    double acc = 0, stop = 0;
    size_t gtop = size_t(std::max_element(grid.begin(), grid.end()) - grid.begin());
    for (const auto& cv : res.curves) {
        acc += cv.slope;
        stop += cv.points[gtop].ssdf;
    }
    res.mean_slope = acc / nseeds;
    res.ssdf_top_mean = stop / nseeds;

    if (include_uncapped) {
        res.with_uncapped = true;
        std::vector<SweepCurve> un;
        run(false, un);
        double ua = 0;
        for (const auto& cv : un) {
            res.uncapped_slopes.push_back(cv.slope);
            ua += cv.slope;
        }
        res.uncapped_mean_slope = ua / nseeds;
        res.uncapped_below_capped = res.uncapped_mean_slope < res.mean_slope;
    }
    return res;
}

} // namespace icsec::rates
