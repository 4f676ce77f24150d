#include "icsec/cf.hpp"
#include "icsec/parallel.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace icsec::cf {
namespace {

Eigen::VectorXd to_vec(const std::vector<long long>& a) {
    Eigen::VectorXd v(a.size());
    for (size_t k = 0; k < a.size(); ++k) v[long(k)] = double(a[k]);
    return v;
}

// Residual of a against an orthonormal basis; dependence threshold is relative.
bool independent(const Eigen::VectorXd& a, const std::vector<Eigen::VectorXd>& Q) {
    Eigen::VectorXd r = a;
    for (const auto& q : Q) r -= q.dot(r) * q;
    return r.norm() > 1e-8 * a.norm();
}

// MMSE solve with the side-info columns fixed for a whole greedy step: the
// (r+1)x(r+1) system matrix is factored once, each candidate costs O(K*r).
struct StepSolver {
    const EffectiveMac& mac;
    Eigen::MatrixXd DB;          // K x (r+1), D*B with B = [h, decoded...]
    Eigen::LDLT<Eigen::MatrixXd> ldlt;

    StepSolver(const EffectiveMac& m, const std::vector<std::vector<long long>>& decoded)
        : mac(m) {
        const int K = m.K;
        const int r = int(decoded.size());
        Eigen::MatrixXd B(K, r + 1);
        for (int k = 0; k < K; ++k) B(k, 0) = m.h[k];
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < K; ++k) B(k, j + 1) = double(decoded[j][k]);
        DB = B;
        for (int k = 0; k < K; ++k) DB.row(k) *= m.P[k];
        Eigen::MatrixXd G = B.transpose() * DB;
        G(0, 0) += 1.0;          // unit channel noise enters through beta only
        ldlt.compute(G);
    }

    CompRate eval(const Eigen::VectorXd& a) const {
        double aDa = 0;
        for (int k = 0; k < mac.K; ++k) aDa += mac.P[k] * a[k] * a[k];
        Eigen::VectorXd t = DB.transpose() * a;
        CompRate out;
        if (t.squaredNorm() == 0.0) {
            out.sigma2 = aDa;
            out.beta = 0.0;
        } else {
            Eigen::VectorXd w = ldlt.solve(t);
            out.sigma2 = aDa - t.dot(w);
            out.beta = w[0];
        }
        double num = 0;
        for (int k = 0; k < mac.K; ++k)
            if (a[k] != 0.0) num = std::max(num, mac.P[k]);
        if (num <= 0.0) {
            out.rate = 0.0;
            return out;
        }
        // integer candidates independent of integer side info keep sigma2 well
        // above roundoff; the floor only catches exact-zero cancellation
        double floor2 = 1e-14 * aDa + 1e-300;
        if (out.sigma2 < floor2) out.sigma2 = floor2;
        out.rate = std::max(0.0, 0.5 * std::log2(num / out.sigma2));
        return out;
    }
};

long long checked_total(int K, long long radius) {
    if (radius < 1) throw std::invalid_argument("radius must be >= 1");
    long long W = 2 * radius + 1;
    __int128 t = 1;
    for (int k = 0; k < K; ++k) {
        t *= W;
        if (t > (__int128(1) << 62)) throw std::invalid_argument("radius too large to enumerate");
    }
    return (long long)t;
}

// n-th candidate in lexicographic order over [-radius, radius]^K.
void unrank(long long n, int K, long long radius, long long W,
            std::vector<long long>& a) {
    for (int k = K - 1; k >= 0; --k) {
        a[k] = n % W - radius;
        n /= W;
    }
}

bool canonical_nonzero(const std::vector<long long>& a) {
    for (long long v : a) {
        if (v > 0) return true;
        if (v < 0) return false;
    }
    return false; // all zero
}

struct Best {
    double rate = -1.0;
    long long n = -1;
    CompRate cr;
    std::vector<long long> a;
};

void scan_range(const StepSolver& solver, const std::vector<Eigen::VectorXd>& Q,
                long long lo, long long hi, long long radius, long long W, Best& best) {
    const int K = solver.mac.K;
    std::vector<long long> a(K);
    Eigen::VectorXd av(K);
    for (long long n = lo; n < hi; ++n) {
        unrank(n, K, radius, W, a);
        if (!canonical_nonzero(a)) continue;
        for (int k = 0; k < K; ++k) av[k] = double(a[k]);
        if (!independent(av, Q)) continue;
        CompRate cr = solver.eval(av);
        if (cr.rate > best.rate) {
            best.rate = cr.rate;
            best.n = n;
            best.cr = cr;
            best.a = a;
        }
    }
}

CoefficientSet best_coefficients_impl(const EffectiveMac& mac, long long radius, bool parallel) {
    const int K = mac.K;
    if (K < 1) throw std::invalid_argument("empty mac");
    const long long total = checked_total(K, radius);
    const long long W = 2 * radius + 1;

    std::vector<std::vector<long long>> selected;
    std::vector<Eigen::VectorXd> Q;
    std::vector<double> sig, rat;

    for (int step = 0; step < K; ++step) {
        StepSolver solver(mac, selected);
        Best best;
        if (!parallel || total < 1024) {
            scan_range(solver, Q, 0, total, radius, W, best);
        } else {
            const int nt = thread_cap();
            const long long chunk = (total + nt - 1) / nt;
            std::vector<Best> local(nt);
#pragma omp parallel for schedule(static, 1) num_threads(nt)
            for (int t = 0; t < nt; ++t) {
                long long lo = t * chunk;
                long long hi = std::min(total, lo + chunk);
                if (lo < hi) scan_range(solver, Q, lo, hi, radius, W, local[t]);
            }
            // chunks merged in index order reproduce the serial first-wins rule
            for (const Best& b : local)
                if (b.n >= 0 && b.rate > best.rate) best = b;
        }
        if (best.n < 0)
            throw std::runtime_error("no independent combination within radius");
        selected.push_back(best.a);
        sig.push_back(best.cr.sigma2);
        rat.push_back(best.cr.rate);
        Eigen::VectorXd r = to_vec(best.a);
        for (const auto& q : Q) r -= q.dot(r) * q;
        Q.push_back(r / r.norm());
    }

    // presentation: rates nonincreasing, ties by sigma then decode step
    std::vector<int> idx(K);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) {
        if (rat[x] != rat[y]) return rat[x] > rat[y];
        if (sig[x] != sig[y]) return sig[x] < sig[y];
        return x < y;
    });

    CoefficientSet cs;
    cs.A.resize(K);
    cs.order.resize(K);
    cs.sigma.resize(K);
    cs.rate.resize(K);
    for (int row = 0; row < K; ++row) {
        cs.A[row] = selected[idx[row]];
        cs.sigma[row] = sig[idx[row]];
        cs.rate[row] = rat[idx[row]];
        cs.order[idx[row]] = row;
    }
    return cs;
}

} // namespace

EffectiveMac build_effective_mac(int receiver, const channel::ChannelMatrix& H,
                                 const power::PowerProfile& prof, bool enforce_cap) {
    const int K = H.K;
    if (receiver < 0 || receiver >= K) throw std::invalid_argument("receiver out of range");
    if (prof.K != K) throw std::invalid_argument("profile/channel size mismatch");
    if (enforce_cap) {
        auto viol = power::validate_profile(prof, H);
        if (!viol.empty()) throw std::domain_error("inadmissible power profile: " + viol[0].what);
    }

    const int i = receiver;
    const int pi = channel::partner(K, i);
    double hj = H.at(pi, i);
    double c2 = 1.0 + hj * hj * prof.jam_power(pi);
    double c = std::sqrt(c2);

    EffectiveMac mac;
    mac.receiver = i;
    mac.K = K;
    mac.h.resize(K);
    mac.P.resize(K);
    mac.source.resize(K);
    mac.h[0] = H.at(i, i) / c;
    mac.P[0] = prof.msg_power(i);
    mac.source[0] = i;
    int k = 1;
    for (int l = 0; l < K; ++l) {
        if (l == i) continue;
        int pl = channel::partner(K, l);
        double hl = H.at(l, i);
        double hp = H.at(pl, i);
        mac.h[k] = 1.0 / c;
        mac.P[k] = hl * hl * prof.msg_power(l) + hp * hp * prof.jam_power(pl);
        mac.source[k] = l;
        ++k;
    }
    return mac;
}

CompRate computation_rate(const EffectiveMac& mac, const std::vector<long long>& a,
                          const std::vector<std::vector<long long>>& decoded) {
    const int K = mac.K;
    if (int(a.size()) != K) throw std::invalid_argument("coefficient length mismatch");
    for (const auto& d : decoded) {
        if (int(d.size()) != K) throw std::invalid_argument("side-info length mismatch");
        bool dz = true;
        for (long long v : d) dz = dz && v == 0;
        if (dz) throw std::invalid_argument("side-info row is zero");
    }
    bool nz = false;
    for (long long v : a) nz = nz || v != 0;
    if (!nz) throw std::invalid_argument("zero coefficient vector");

    std::vector<Eigen::VectorXd> Q;
    for (const auto& d : decoded) {
        Eigen::VectorXd r = to_vec(d);
        for (const auto& q : Q) r -= q.dot(r) * q;
        if (r.norm() > 1e-12) Q.push_back(r / r.norm());
    }
    Eigen::VectorXd av = to_vec(a);
    if (!independent(av, Q)) throw std::invalid_argument("coefficient vector already decodable");

    StepSolver solver(mac, decoded);
    return solver.eval(av);
}

long long auto_radius(const EffectiveMac& mac) {
    double h2 = 0, Pmax = 0;
    for (int k = 0; k < mac.K; ++k) {
        h2 += mac.h[k] * mac.h[k];
        Pmax = std::max(Pmax, mac.P[k]);
    }
    return (long long)std::ceil(std::sqrt(1.0 + h2 * Pmax));
}

CoefficientSet best_coefficients(const EffectiveMac& mac, long long radius) {
    return best_coefficients_impl(mac, radius, true);
}

CoefficientSet best_coefficients_serial(const EffectiveMac& mac, long long radius) {
    return best_coefficients_impl(mac, radius, false);
}

std::vector<double> combination_rates(const EffectiveMac& mac, const CoefficientSet& cs) {
    std::vector<double> out(cs.A.size());
    for (size_t r = 0; r < cs.A.size(); ++r) {
        double num = 0;
        for (int k = 0; k < mac.K; ++k)
            if (cs.A[r][k] != 0) num = std::max(num, mac.P[k]);
        double s2 = cs.sigma[r];
        out[r] = (num > 0 && s2 > 0) ? std::max(0.0, 0.5 * std::log2(num / s2)) : 0.0;
    }
    return out;
}

double own_message_rate(int receiver, const channel::ChannelMatrix& H,
                        const power::PowerProfile& prof, long long radius,
                        bool enforce_cap) {
    EffectiveMac mac = build_effective_mac(receiver, H, prof, enforce_cap);
    CoefficientSet cs = best_coefficients(mac, radius);
    double P0 = mac.P[0];
    double s2 = cs.sigma.back();
    if (P0 <= 0 || s2 <= 0) return 0.0;
    return std::max(0.0, 0.5 * std::log2(P0 / s2));
}

} // namespace icsec::cf
