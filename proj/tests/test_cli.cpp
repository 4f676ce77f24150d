#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string bin() {
    const char* b = std::getenv("ICSEC_BIN");
    REQUIRE(b != nullptr);
    return std::string("\"") + b + "\"";
}

int run(const std::string& args) {
    std::string cmd = bin() + " " + args;
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string l;
    while (std::getline(ss, l)) out.push_back(l);
    return out;
}

struct TmpDir {
    std::filesystem::path p = "cli_tmp";
    TmpDir() { std::filesystem::create_directories(p); }
    std::string operator()(const std::string& name) const { return (p / name).string(); }
};

} // namespace

TEST_CASE("alignment counts through the tool") {
    TmpDir tmp;
    REQUIRE(run("align --K 4 --T 2 --out " + tmp("a.csv")) == 0);
    auto ls = lines(slurp(tmp("a.csv")));
    REQUIRE(ls.size() == 5);
    CHECK(ls[0] == "# icsec 1.0.0");
    CHECK(ls[1].rfind("# config ", 0) == 0);
    CHECK(ls[2] == "# seed 0");
    CHECK(ls[3] == "K,T,M,|S|,fraction");
    CHECK(ls[4] == "4,2,64,16,0.25");
}

TEST_CASE("per-user rates rerun byte-identically") {
    TmpDir tmp;
    REQUIRE(run("rates --K 4 --seed 7 --P 300 --out " + tmp("r1.csv")) == 0);
    REQUIRE(run("rates --K 4 --seed 7 --P 300 --out " + tmp("r2.csv")) == 0);
    auto a = slurp(tmp("r1.csv"));
    CHECK(a == slurp(tmp("r2.csv")));
    auto ls = lines(a);
    REQUIRE(ls.size() == 8); // 3 header lines, schema, 4 users
    CHECK(ls[3] == "user,R_comb,penalty,R_secure");
    CHECK(ls[4].rfind("1,", 0) == 0);
    // a different seed must change the rows
    REQUIRE(run("rates --K 4 --seed 8 --P 300 --out " + tmp("r3.csv")) == 0);
    CHECK(a != slurp(tmp("r3.csv")));
}

TEST_CASE("odd user counts get a padded row with zero rate") {
    TmpDir tmp;
    REQUIRE(run("rates --K 5 --seed 3 --P 100 --out " + tmp("r5.csv")) == 0);
    auto ls = lines(slurp(tmp("r5.csv")));
    REQUIRE(ls.size() == 10); // 6 users after padding
    CHECK(ls.back() == "6,0,0,0");
}

TEST_CASE("usage failures exit with 2") {
    TmpDir tmp;
    CHECK(run("rates --K 2 --out " + tmp("x.csv") + " 2>" + tmp("e1.txt")) == 2);
    auto err = slurp(tmp("e1.txt"));
    CHECK(err.find("K must be >= 3") != std::string::npos);
    CHECK(run("rates --spec 'cauchy(0,1)' 2>/dev/null") == 2);
    CHECK(run("nosuchcommand 2>/dev/null") == 2);
}

TEST_CASE("unknown or ill-typed config keys exit with 2") {
    TmpDir tmp;
    {
        std::ofstream f(tmp("bad.json"));
        f << "{\"K\": 4, \"bogus\": 1}\n";
    }
    CHECK(run("rates --config " + tmp("bad.json") + " 2>" + tmp("e2.txt")) == 2);
    CHECK(slurp(tmp("e2.txt")).find("unknown config key: bogus") != std::string::npos);
    {
        std::ofstream f(tmp("badtype.json"));
        f << "{\"K\": \"four\"}\n";
    }
    CHECK(run("rates --config " + tmp("badtype.json") + " 2>/dev/null") == 2);
}

TEST_CASE("config file values apply and explicit flags win") {
    TmpDir tmp;
    {
        std::ofstream f(tmp("cfg.json"));
        f << "{\"K\": 4, \"seed\": 7, \"P\": 300}\n";
    }
    REQUIRE(run("rates --config " + tmp("cfg.json") + " --out " + tmp("c1.csv")) == 0);
    REQUIRE(run("rates --K 4 --seed 7 --P 300 --out " + tmp("c2.csv")) == 0);
    // same effective config, identical bytes
    CHECK(slurp(tmp("c1.csv")) == slurp(tmp("c2.csv")));
    REQUIRE(run("rates --config " + tmp("cfg.json") + " --seed 9 --out " + tmp("c3.csv")) == 0);
    CHECK(slurp(tmp("c3.csv")) != slurp(tmp("c1.csv")));
}

TEST_CASE("an overdriven uncapped profile reports infeasible with exit 3") {
    TmpDir tmp;
    int rc = run("rates --spec 'uniform(2,3)' --P 1000 --jam_share 0.4 --no_jam_cap 2>" +
                 tmp("e3.txt"));
    CHECK(rc == 3);
    CHECK(slurp(tmp("e3.txt")).find("infeasible") != std::string::npos);
}

TEST_CASE("sweeps rerun byte-identically, json summary included") {
    TmpDir tmp;
    std::string args = "sweep --K 4 --seeds 2 --seed 5 --grid 100,1000 --radius 2 --out ";
    REQUIRE(run(args + tmp("s1.csv") + " --json_out " + tmp("s1.json")) == 0);
    REQUIRE(run(args + tmp("s2.csv") + " --json_out " + tmp("s2.json")) == 0);
    CHECK(slurp(tmp("s1.csv")) == slurp(tmp("s2.csv")));
    auto j1 = slurp(tmp("s1.json"));
    CHECK(j1 == slurp(tmp("s2.json")));
    CHECK(j1.find("\"mean_slope\"") != std::string::npos);
    CHECK(j1.find("\"per_seed\"") != std::string::npos);
    CHECK(j1.find("\"uncapped\"") == std::string::npos);
    auto ls = lines(slurp(tmp("s1.csv")));
    REQUIRE(ls.size() == 6);
    CHECK(ls[3] == "P,sum_rate,ssdf,penalty_check");
}

TEST_CASE("uncapped sweeps record both slopes and their order") {
    TmpDir tmp;
    std::string args = "sweep --K 4 --seeds 2 --seed 5 --grid 100,1000 --radius 2 --no_jam_cap";
    REQUIRE(run(args + " --out " + tmp("u.csv") + " --json_out " + tmp("u.json")) == 0);
    auto j = slurp(tmp("u.json"));
    CHECK(j.find("\"uncapped\"") != std::string::npos);
    CHECK(j.find("\"uncapped_below_capped\"") != std::string::npos);
}

TEST_CASE("toy transceiver row is deterministic") {
    TmpDir tmp;
    std::string args = "toy --trials 5 --blocks 4 --seed 2 --out ";
    REQUIRE(run(args + tmp("t1.csv")) == 0);
    REQUIRE(run(args + tmp("t2.csv")) == 0);
    auto a = slurp(tmp("t1.csv"));
    CHECK(a == slurp(tmp("t2.csv")));
    auto ls = lines(a);
    REQUIRE(ls.size() == 5);
    CHECK(ls[3] == "check,statistic,value,bound,stderr");
    CHECK(ls[4].rfind("toy_e2e,error_rate,", 0) == 0);
}

TEST_CASE("self checks pass their own bounds and rerun identically") {
    TmpDir tmp;
    std::string args = "check --q_max 8 --entropy_samples 20000 --out ";
    REQUIRE(run(args + tmp("k1.csv")) == 0);
    REQUIRE(run(args + tmp("k2.csv")) == 0);
    auto a = slurp(tmp("k1.csv"));
    CHECK(a == slurp(tmp("k2.csv")));
    auto ls = lines(a);
    REQUIRE(ls.size() >= 10);
    bool saw_crypto = false;
    for (auto& l : ls)
        if (l.rfind("crypto,tv_max,0,", 0) == 0) saw_crypto = true;
    CHECK(saw_crypto);
}
