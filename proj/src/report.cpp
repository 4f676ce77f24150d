#include "icsec/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace icsec::report {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round_sig(double v) {
    if (!std::isfinite(v) || v == 0.0) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

nlohmann::ordered_json round_numbers(const nlohmann::ordered_json& j) {
    using J = nlohmann::ordered_json;
    if (j.is_number_float()) return J(round_sig(j.get<double>()));
    if (j.is_object()) {
        J out = J::object();
        for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = round_numbers(it.value());
        return out;
    }
    if (j.is_array()) {
        J out = J::array();
        for (const auto& e : j) out.push_back(round_numbers(e));
        return out;
    }
    return j;
}

void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp);
        f.write(content.data(), std::streamsize(content.size()));
        if (!f) throw std::runtime_error("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

std::string csv_header(const nlohmann::ordered_json& config, uint64_t seed,
                       const std::string& schema) {
    // Output destinations are delivery details, not semantic config: the same
    // run written to two paths must produce identical bytes.
    nlohmann::ordered_json cfg = config;
    cfg.erase("out");
    cfg.erase("json_out");
    std::string out;
    out += "# icsec ";
    out += kVersion;
    out += "\n# config ";
    out += round_numbers(cfg).dump();
    out += "\n# seed ";
    out += std::to_string(seed);
    out += "\n";
    out += schema;
    out += "\n";
    return out;
}

} // namespace icsec::report
