#pragma once
#include <string>
#include "json.hpp"

namespace icsec::report {

inline constexpr const char* kVersion = "1.0.0";

// %.12g, the one float format used in every artifact
std::string fmt(double v);

// value that %.12g would print, so serialized numbers re-parse to themselves
double round_sig(double v);

// deep copy with every float rounded to 12 significant digits
nlohmann::ordered_json round_numbers(const nlohmann::ordered_json& j);

// tmp file in the target directory, then rename
void atomic_write(const std::string& path, const std::string& content);

// "# icsec <version>\n# config <one-line json>\n# seed <n>\n<schema>\n"
std::string csv_header(const nlohmann::ordered_json& config, uint64_t seed,
                       const std::string& schema);

} // namespace icsec::report
