#include "CLI11.hpp"
#include "json.hpp"

#include "icsec/alignment.hpp"
#include "icsec/cf.hpp"
#include "icsec/channel.hpp"
#include "icsec/lattice.hpp"
#include "icsec/power.hpp"
#include "icsec/rates.hpp"
#include "icsec/report.hpp"
#include "icsec/rng.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::ordered_json;
namespace rp = icsec::report;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// defaults <- config file <- explicit flags, unknown keys rejected
void merge_config_file(ordered_json& cfg, const std::string& path) {
    if (path.empty()) return;
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open config file " + path);
    ordered_json file;
    try {
        f >> file;
    } catch (const std::exception& e) {
        throw UsageError(std::string("config parse error: ") + e.what());
    }
    if (!file.is_object()) throw UsageError("config must be a JSON object");
    for (auto it = file.begin(); it != file.end(); ++it) {
        if (!cfg.contains(it.key())) throw UsageError("unknown config key: " + it.key());
        const auto& cur = cfg[it.key()];
        const auto& in = it.value();
        // numbers are stored in the default's width so a value from the file
        // and the same value from a flag serialize identically
        if (cur.is_number_float() && in.is_number()) {
            cfg[it.key()] = in.get<double>();
        } else if (cur.is_number_integer() && in.is_number_integer()) {
            cfg[it.key()] = in;
        } else if (cur.is_string() && in.is_string()) {
            cfg[it.key()] = in;
        } else if (cur.is_boolean() && in.is_boolean()) {
            cfg[it.key()] = in;
        } else if (cur.is_array() && in.is_array()) {
            ordered_json a = ordered_json::array();
            for (const auto& e : in)
                a.push_back(e.is_number() ? ordered_json(e.get<double>()) : e);
            cfg[it.key()] = a;
        } else {
            throw UsageError("config key has wrong type: " + it.key());
        }
    }
}

std::vector<double> parse_grid(const ordered_json& arr) {
    std::vector<double> g;
    for (const auto& e : arr) {
        if (!e.is_number()) throw UsageError("grid entries must be numbers");
        g.push_back(e.get<double>());
        if (!(g.back() > 0)) throw UsageError("grid entries must be positive");
    }
    if (g.empty()) throw UsageError("grid must be nonempty");
    return g;
}

ordered_json grid_json(const std::string& csv) {
    ordered_json a = ordered_json::array();
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            size_t pos = 0;
            double v = std::stod(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            a.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("bad grid entry: " + tok);
        }
    }
    return a;
}

void emit(const std::string& out, const std::string& content) {
    if (out == "-" || out.empty()) {
        std::fwrite(content.data(), 1, content.size(), stdout);
    } else {
        rp::atomic_write(out, content);
    }
}

icsec::channel::ChannelMatrix make_channel(int K, const std::string& spec_text, uint64_t seed) {
    auto spec = icsec::channel::GainSpec::parse(spec_text);
    auto H = icsec::channel::sample_channel(K, spec, seed);
    if (K % 2) H = icsec::channel::pad_dummy_user(H, spec, icsec::child_seed(seed, 1));
    return H;
}

int cmd_rates(const ordered_json& cfg) {
    int K = cfg["K"].get<int>();
    uint64_t seed = cfg["seed"].get<uint64_t>();
    double P = cfg["P"].get<double>();
    double js = cfg["jam_share"].get<double>();
    int T = cfg["T"].get<int>();
    long long radius = cfg["radius"].get<long long>();
    bool nocap = cfg["no_jam_cap"].get<bool>();
    if (!(P > 0)) throw UsageError("P must be positive");

    auto H = make_channel(K, cfg["spec"].get<std::string>(), seed);
    std::unique_ptr<icsec::align::PhiMapping> map;
    int M = 1;
    if (T >= 2) {
        map = std::make_unique<icsec::align::PhiMapping>(H.K, T);
        M = int(map->M);
    }
    auto prof = nocap ? icsec::power::fixed_fraction_profile(H, P, M, js, false)
                      : icsec::power::uniform_profile(H, P, M, js);
    auto rep = icsec::rates::secure_rate_report(H, prof, radius, map.get());
    if (!rep.feasible) {
        std::string msg = "infeasible power profile:";
        for (const auto& v : rep.violations)
            msg += "\n  user " + std::to_string(v.user + 1) + ": " + v.what +
                   " (slack " + rp::fmt(v.slack) + ")";
        throw InfeasibleError(msg);
    }

    std::string body = rp::csv_header(cfg, seed, "user,R_comb,penalty,R_secure");
    for (const auto& u : rep.users) {
        body += std::to_string(u.user + 1) + "," + rp::fmt(u.r_comb) + "," +
                rp::fmt(u.penalty) + "," + rp::fmt(u.r_secure) + "\n";
    }
    emit(cfg["out"].get<std::string>(), body);
    return 0;
}

int cmd_sweep(const ordered_json& cfg) {
    int K = cfg["K"].get<int>();
    int nseeds = cfg["seeds"].get<int>();
    uint64_t seed = cfg["seed"].get<uint64_t>();
    double js = cfg["jam_share"].get<double>();
    long long radius = cfg["radius"].get<long long>();
    bool nocap = cfg["no_jam_cap"].get<bool>();
    auto grid = parse_grid(cfg["grid"]);
    auto spec = icsec::channel::GainSpec::parse(cfg["spec"].get<std::string>());

    auto res = icsec::rates::dof_sweep(K, spec, grid, nseeds, seed, js, radius, nocap);

    std::string body = rp::csv_header(cfg, seed, "P,sum_rate,ssdf,penalty_check");
    const int G = int(grid.size());
    for (int g = 0; g < G; ++g) {
        double sr = 0, sd = 0, pc = 0;
        for (const auto& cv : res.curves) {
            sr += cv.points[g].sum_rate;
            sd += cv.points[g].ssdf;
            pc += cv.points[g].penalty_check;
        }
        sr /= nseeds;
        sd /= nseeds;
        pc /= nseeds;
        body += rp::fmt(grid[g]) + "," + rp::fmt(sr) + "," + rp::fmt(sd) + "," + rp::fmt(pc) + "\n";
    }
    emit(cfg["out"].get<std::string>(), body);

    std::string jpath = cfg["json_out"].get<std::string>();
    if (!jpath.empty()) {
        ordered_json j;
        j["version"] = rp::kVersion;
        ordered_json cecho = cfg;
        cecho.erase("out");
        cecho.erase("json_out");
        j["config"] = cecho;
        j["seed"] = seed;
        j["grid"] = cfg["grid"];
        j["mean_slope"] = res.mean_slope;
        j["ssdf_top_mean"] = res.ssdf_top_mean;
        ordered_json per = ordered_json::array();
        for (const auto& cv : res.curves) {
            ordered_json e;
            e["seed"] = cv.seed;
            e["slope"] = cv.slope;
            per.push_back(e);
        }
        j["per_seed"] = per;
        if (res.with_uncapped) {
            ordered_json u;
            u["slopes"] = res.uncapped_slopes;
            u["mean_slope"] = res.uncapped_mean_slope;
            u["uncapped_below_capped"] = res.uncapped_below_capped;
            j["uncapped"] = u;
        }
        rp::atomic_write(jpath, rp::round_numbers(j).dump(2) + "\n");
    }
    return 0;
}

int cmd_align(const ordered_json& cfg) {
    int K = cfg["K"].get<int>();
    int T = cfg["T"].get<int>();
    icsec::align::PhiMapping map(K, T);
    long long S = 0;
    if (T >= 2) S = (long long)icsec::align::aligned_set(0, 1, map).pairs.size();
    double frac = double(S) / double(map.M);
    std::string body = rp::csv_header(cfg, 0, "K,T,M,|S|,fraction");
    body += std::to_string(K) + "," + std::to_string(T) + "," + std::to_string(map.M) + "," +
            std::to_string(S) + "," + rp::fmt(frac) + "\n";
    emit(cfg["out"].get<std::string>(), body);
    return 0;
}

int cmd_toy(const ordered_json& cfg) {
    icsec::lattice::ToyConfig tc;
    tc.K = cfg["K"].get<int>();
    tc.blocks = cfg["blocks"].get<int>();
    tc.trials = cfg["trials"].get<int>();
    tc.snr_db = cfg["snr_db"].get<double>();
    tc.q = cfg["q"].get<int>();
    tc.radius = cfg["radius"].get<long long>();
    tc.spec = icsec::channel::GainSpec::parse(cfg["spec"].get<std::string>());
    tc.seed = cfg["seed"].get<uint64_t>();
    auto res = icsec::lattice::toy_end_to_end(tc);
    double se = std::sqrt(res.error_rate * (1 - res.error_rate) / double(res.decodes));
    std::string body = rp::csv_header(cfg, tc.seed, "check,statistic,value,bound,stderr");
    body += "toy_e2e,error_rate," + rp::fmt(res.error_rate) + ",," + rp::fmt(se) + "\n";
    emit(cfg["out"].get<std::string>(), body);
    return 0;
}

int cmd_check(const ordered_json& cfg) {
    int qmin = cfg["q_min"].get<int>();
    int qmax = cfg["q_max"].get<int>();
    long long ns = cfg["entropy_samples"].get<long long>();
    uint64_t seed = cfg["seed"].get<uint64_t>();
    if (qmin < 2 || qmax < qmin) throw UsageError("need 2 <= q_min <= q_max");

    double tv = 0, mi = 0, sub_tv = 1e300;
    bool exact = true;
    for (int q = qmin; q <= qmax; ++q) {
        auto c = icsec::lattice::crypto_lemma_check(q);
        tv = std::max(tv, c.tv_max);
        mi = std::max(mi, std::abs(c.mutual_info));
        exact = exact && c.exact;
        sub_tv = std::min(sub_tv, icsec::lattice::crypto_lemma_check_subset(q).tv_max);
    }
    auto e1 = icsec::lattice::quantization_entropy_check(1, 1, {1}, {1}, ns, seed);
    auto e4 = icsec::lattice::quantization_entropy_check(
        1, 1, {0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25}, ns, icsec::child_seed(seed, 2));

    // the first greedy selection maximizes over the candidate box, so a larger
    // radius scans a superset and its rate can only improve; the worst drop
    // across instances must be exactly <= 0
    double rad_drop = -1e300;
    auto spec = icsec::channel::GainSpec::parse("uniform(0.5,1.5)");
    for (int s = 0; s < 10; ++s) {
        auto H = icsec::channel::sample_channel(4, spec, icsec::child_seed(seed + 77, uint64_t(s)));
        auto prof = icsec::power::uniform_profile(H, 100.0, 1, 0.3);
        for (int u = 0; u < 4; ++u) {
            auto mac = icsec::cf::build_effective_mac(u, H, prof);
            auto c3 = icsec::cf::best_coefficients(mac, 3);
            auto c6 = icsec::cf::best_coefficients(mac, 6);
            double first3 = c3.rate[size_t(c3.order[0])];
            double first6 = c6.rate[size_t(c6.order[0])];
            rad_drop = std::max(rad_drop, first3 - first6);
        }
    }

    std::string body = rp::csv_header(cfg, seed, "check,statistic,value,bound,stderr");
    body += "crypto,tv_max," + rp::fmt(tv) + ",0,\n";
    body += "crypto,mutual_info_max," + rp::fmt(mi) + ",0,\n";
    body += "crypto,exact," + std::string(exact ? "1" : "0") + ",1,\n";
    body += "crypto_subset,tv_min," + rp::fmt(sub_tv) + ",0,\n";
    body += "entropy_m1,entropy," + rp::fmt(e1.entropy) + "," + rp::fmt(e1.bound) + "," +
            rp::fmt(e1.se) + "\n";
    body += "entropy_m4,entropy," + rp::fmt(e4.entropy) + "," + rp::fmt(e4.bound) + "," +
            rp::fmt(e4.se) + "\n";
    body += "radius,first_rate_drop_3_to_6," + rp::fmt(rad_drop) + ",0,\n";
    emit(cfg["out"].get<std::string>(), body);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"K-user interference channel secure rate engine"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("icsec ") + rp::kVersion);

    struct Sub {
        CLI::App* cmd = nullptr;
        ordered_json cfg;
        std::string config_path;
        std::map<std::string, CLI::Option*> opts;
    };
    std::map<std::string, Sub> subs;

    // flag storage: every key has a flag; explicit flags override file values
    std::map<std::string, std::string> s_vals;
    std::map<std::string, long long> i_vals;
    std::map<std::string, double> d_vals;
    std::map<std::string, bool> b_vals;

    auto add = [&](Sub& S, const std::string& key, ordered_json dflt, const std::string& help) {
        S.cfg[key] = dflt;
        std::string flag = "--" + key;
        std::string id = S.cmd->get_name() + "." + key;
        if (dflt.is_string()) {
            s_vals[id] = dflt.get<std::string>();
            S.opts[key] = S.cmd->add_option(flag, s_vals[id], help);
        } else if (dflt.is_boolean()) {
            b_vals[id] = dflt.get<bool>();
            S.opts[key] = S.cmd->add_flag(flag, b_vals[id], help);
        } else if (dflt.is_number_integer() || dflt.is_number_unsigned()) {
            i_vals[id] = dflt.get<long long>();
            S.opts[key] = S.cmd->add_option(flag, i_vals[id], help);
        } else {
            d_vals[id] = dflt.get<double>();
            S.opts[key] = S.cmd->add_option(flag, d_vals[id], help);
        }
    };

    auto make_sub = [&](const std::string& name, const std::string& help) -> Sub& {
        Sub& S = subs[name];
        S.cmd = app.add_subcommand(name, help);
        S.cmd->add_option("--config", S.config_path, "JSON config file");
        return S;
    };

    {
        Sub& S = make_sub("rates", "per-user secure rates for one channel");
        add(S, "K", 4, "number of users");
        add(S, "spec", "bands(1.2,1.8,0.0018,0.0022)", "gain distribution");
        add(S, "seed", 1, "channel seed");
        add(S, "P", 100.0, "per-user power budget");
        add(S, "jam_share", 0.3, "jamming share of the budget");
        add(S, "T", 0, "beams per gain (0 or 1: single beam)");
        add(S, "radius", 3, "coefficient search radius");
        add(S, "no_jam_cap", false, "ignore the jamming power bound");
        add(S, "out", "-", "output CSV path, - for stdout");
    }
    {
        Sub& S = make_sub("sweep", "sum secure rate across a power grid");
        add(S, "K", 4, "number of users");
        add(S, "spec", "bands(1.2,1.8,0.0018,0.0022)", "gain distribution");
        add(S, "seeds", 10, "number of channels");
        add(S, "seed", 1, "master seed");
        add(S, "jam_share", 0.3, "jamming share of the budget");
        add(S, "radius", 4, "coefficient search radius");
        add(S, "no_jam_cap", false, "ignore the jamming power bound");
        add(S, "out", "-", "output CSV path, - for stdout");
        add(S, "json_out", "", "optional JSON summary path");
        // grid is an array key; on the command line it is comma-separated
        S.cfg["grid"] = ordered_json::array({1e2, 1e3, 1e4, 1e5, 1e6});
        std::string id = "sweep.grid";
        s_vals[id] = "";
        S.opts["grid"] = S.cmd->add_option("--grid", s_vals[id], "comma-separated powers");
    }
    {
        Sub& S = make_sub("align", "beam counts and aligned fraction");
        add(S, "K", 4, "number of users (even)");
        add(S, "T", 2, "beams per gain");
        add(S, "out", "-", "output CSV path, - for stdout");
    }
    {
        Sub& S = make_sub("toy", "scalar lattice transceiver error rate");
        add(S, "K", 4, "number of users");
        add(S, "blocks", 32, "blocks per trial");
        add(S, "trials", 1000, "independent trials");
        add(S, "snr_db", 40.0, "signal-to-noise ratio in dB");
        add(S, "q", 4, "coarse/fine lattice ratio");
        add(S, "radius", 4, "coefficient search radius");
        add(S, "spec", "bands(2,4,0.05,0.15)", "gain distribution");
        add(S, "seed", 1, "master seed");
        add(S, "out", "-", "output CSV path, - for stdout");
    }
    {
        Sub& S = make_sub("check", "built-in consistency checks");
        add(S, "q_min", 2, "smallest coset count");
        add(S, "q_max", 64, "largest coset count");
        add(S, "entropy_samples", 1000000, "Monte Carlo samples");
        add(S, "seed", 1, "sampling seed");
        add(S, "out", "-", "output CSV path, - for stdout");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (auto& [name, S] : subs) {
            if (!S.cmd->parsed()) continue;
            merge_config_file(S.cfg, S.config_path);
            for (auto& [key, opt] : S.opts) {
                if (opt->count() == 0) continue;
                std::string id = name + "." + key;
                if (name == "sweep" && key == "grid") {
                    S.cfg[key] = grid_json(s_vals[id]);
                } else if (S.cfg[key].is_string()) {
                    S.cfg[key] = s_vals[id];
                } else if (S.cfg[key].is_boolean()) {
                    S.cfg[key] = b_vals[id];
                } else if (S.cfg[key].is_number_float()) {
                    S.cfg[key] = d_vals[id];
                } else {
                    S.cfg[key] = i_vals[id];
                }
            }
            if (name == "rates") return cmd_rates(S.cfg);
            if (name == "sweep") return cmd_sweep(S.cfg);
            if (name == "align") return cmd_align(S.cfg);
            if (name == "toy") return cmd_toy(S.cfg);
            if (name == "check") return cmd_check(S.cfg);
        }
    } catch (const InfeasibleError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 3;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
