#pragma once

#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lancaster/experiments.hpp"

namespace lancaster {

// Flat "key = value" file. Arrays are bracketed, comma-separated and may span
// lines; commas inside parentheses belong to the element, so
// "[BVT(5,0.2), GARCH(2,1)]" has two elements. '#' starts a comment.
struct ConfigValue {
    std::string scalar;
    std::vector<std::string> items;
    bool is_array = false;
    std::size_t line = 0;
};

using ConfigMap = std::map<std::string, ConfigValue, std::less<>>;

ConfigMap parse_config_text(std::istream& in);  // ParseError

// Keys: kind, distributions, methods, n, replications, alpha, level, seed,
// permutations, bootstrap, threads, mode (single|averaged), truth_file,
// partial_file, full_scale. Preset names (table1, table2, table3, all) may
// stand for the whole distribution or method list.
StudyConfig study_config_from_map(const ConfigMap& map);
StudyConfig load_study_config(const std::string& path);
StudyConfig parse_study_config(std::string_view text);

}  // namespace lancaster
