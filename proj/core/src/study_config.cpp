#include "lancaster/study_config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "lancaster/error.hpp"
#include "lancaster/report_io.hpp"

namespace lancaster {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

std::string unquote(std::string s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_items(std::string_view body, std::size_t line) {
    std::vector<std::string> items;
    std::string current;
    int depth = 0;
    bool quoted = false;
    auto flush = [&] {
        auto t = trim(current);
        if (!t.empty()) items.push_back(unquote(t));
        current.clear();
    };
    for (const char c : body) {
        if (c == '"') quoted = !quoted;
        if (!quoted) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if (depth < 0) throw ParseError("unbalanced parentheses", line);
            if (c == ',' && depth == 0) {
                flush();
                continue;
            }
        }
        current += c;
    }
    if (depth != 0 || quoted) throw ParseError("unbalanced parentheses or quotes", line);
    flush();
    return items;
}

const ConfigValue* get(const ConfigMap& map, std::string_view key) {
    const auto it = map.find(key);
    return it == map.end() ? nullptr : &it->second;
}

std::string scalar(const ConfigValue& v, std::string_view key) {
    if (v.is_array) throw ParseError("'" + std::string(key) + "' must be a scalar", v.line);
    return v.scalar;
}

template <class T>
T number(const ConfigValue& v, std::string_view key) {
    const std::string s = scalar(v, key);
    T out{};
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
        throw ParseError("'" + std::string(key) + "' expects a number, got '" + s + "'", v.line);
    }
    return out;
}

std::vector<std::string> list(const ConfigValue& v) {
    if (v.is_array) return v.items;
    return {v.scalar};
}

}  // namespace

ConfigMap parse_config_text(std::istream& in) {
    ConfigMap map;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string text = trim(strip_comment(raw));
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
        const std::string key = trim(std::string_view(text).substr(0, eq));
        std::string value = trim(std::string_view(text).substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line);
        if (map.contains(key)) throw ParseError("duplicate key '" + key + "'", line);
        ConfigValue v;
        v.line = line;
        if (!value.empty() && value.front() == '[') {
            std::string body = value.substr(1);
            while (body.find(']') == std::string::npos) {
                if (!std::getline(in, raw)) throw ParseError("unterminated array for '" + key + "'", v.line);
                ++line;
                body += ' ' + trim(strip_comment(raw));
            }
            const auto close = body.rfind(']');
            if (!trim(std::string_view(body).substr(close + 1)).empty()) {
                throw ParseError("unexpected text after ']'", line);
            }
            v.is_array = true;
            v.items = split_items(std::string_view(body).substr(0, close), v.line);
        } else {
            if (value.empty()) throw ParseError("missing value for '" + key + "'", line);
            v.scalar = unquote(value);
        }
        map.emplace(key, std::move(v));
    }
    return map;
}

StudyConfig study_config_from_map(const ConfigMap& map) {
    static const std::vector<std::string_view> known = {
        "kind",      "distributions", "methods", "n",          "replications", "alpha",
        "level",     "seed",          "permutations", "bootstrap", "threads",   "mode",
        "truth_file", "partial_file", "full_scale"};
    for (const auto& [key, value] : map) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ParseError("unknown key '" + key + "'", value.line);
        }
    }
    auto require = [&](std::string_view key) -> const ConfigValue& {
        const auto* v = get(map, key);
        if (!v) throw ConfigError("study config is missing '" + std::string(key) + "'");
        return *v;
    };

    StudyConfig c;
    const auto& kind = require("kind");
    try {
        c.kind = parse_study_kind(scalar(kind, "kind"));
    } catch (const ConfigError& e) {
        throw ParseError(e.what(), kind.line);
    }
    c.seed = number<std::uint64_t>(require("seed"), "seed");

    if (const auto* v = get(map, "full_scale")) {
        const auto s = scalar(*v, "full_scale");
        if (s == "true") {
            apply_full_scale(c);
        } else if (s != "false") {
            throw ParseError("'full_scale' expects true or false", v->line);
        }
    }

    for (const auto& item : list(require("distributions"))) {
        if (item == "table1" || item == "table2" || item == "table3") {
            for (auto& d : preset_distributions(item)) c.distributions.push_back(d);
        } else {
            c.distributions.push_back(parse_distribution(item));
        }
    }
    for (const auto& item : list(require("methods"))) {
        if (item == "all" || item == "table") {
            for (auto& m : preset_methods(c.kind, item)) c.methods.push_back(m);
        } else {
            c.methods.push_back(item);
        }
    }

    if (const auto* v = get(map, "n")) c.n = number<std::size_t>(*v, "n");
    if (const auto* v = get(map, "replications")) c.replications = number<std::size_t>(*v, "replications");
    if (get(map, "alpha") && get(map, "level")) throw ConfigError("give either alpha or level, not both");
    if (const auto* v = get(map, "alpha")) c.alpha = parse_double(scalar(*v, "alpha"));
    if (const auto* v = get(map, "level")) c.alpha = 1.0 - parse_double(scalar(*v, "level"));
    if (const auto* v = get(map, "permutations")) c.permutations = number<std::size_t>(*v, "permutations");
    if (const auto* v = get(map, "bootstrap")) c.bootstrap = number<std::size_t>(*v, "bootstrap");
    if (const auto* v = get(map, "threads")) c.threads = number<std::size_t>(*v, "threads");
    if (const auto* v = get(map, "mode")) {
        const auto s = scalar(*v, "mode");
        if (s == "single") {
            c.single_sample = true;
        } else if (s != "averaged") {
            throw ParseError("'mode' expects single or averaged", v->line);
        }
    }
    if (const auto* v = get(map, "truth_file")) c.truth_file = scalar(*v, "truth_file");
    if (const auto* v = get(map, "partial_file")) c.partial_file = scalar(*v, "partial_file");
    c.validate();
    return c;
}

StudyConfig load_study_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open study config '" + path + "'");
    return study_config_from_map(parse_config_text(in));
}

StudyConfig parse_study_config(std::string_view text) {
    std::istringstream in{std::string(text)};
    return study_config_from_map(parse_config_text(in));
}

}  // namespace lancaster
