#include "lancaster/report_io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lancaster/error.hpp"

namespace lancaster {

namespace {

using json = nlohmann::json;

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::optional<double> parse_opt(const std::string& s, std::size_t line) {
    if (s.empty()) return std::nullopt;
    try {
        return parse_double(s);
    } catch (const ParseError& e) {
        throw ParseError(e.what(), line);
    }
}

std::size_t parse_size(std::string_view s, std::size_t line) {
    std::size_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
        throw ParseError("expected a non-negative integer, got '" + std::string(s) + "'", line);
    }
    return v;
}

bool parse_bool(std::string_view s, std::size_t line) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ParseError("expected true or false, got '" + std::string(s) + "'", line);
}

constexpr std::array<std::string_view, 9> kCellColumns = {
    "distribution", "method",      "available",  "replications",    "failures",
    "value",        "std_error",   "mean_length", "length_std_error"};

std::string metadata_line(const StudyReport& r) {
    std::ostringstream out;
    out << "# kind=" << study_kind_id(r.kind) << ",n=" << r.n << ",replications=" << r.replications
        << ",alpha=" << format_double(r.alpha) << ",seed=" << r.seed
        << ",permutations=" << r.permutations << ",bootstrap=" << r.bootstrap
        << ",single_sample=" << (r.single_sample ? "true" : "false")
        << ",elapsed_seconds=" << format_double(r.elapsed_seconds);
    return out.str();
}

void apply_metadata(std::string_view text, StudyReport& r, std::size_t line) {
    for (const auto& item : split_csv_line(text, line)) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError("malformed metadata entry '" + item + "'", line);
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == "kind") {
            try {
                r.kind = parse_study_kind(value);
            } catch (const ConfigError& e) {
                throw ParseError(e.what(), line);
            }
        } else if (key == "n") {
            r.n = parse_size(value, line);
        } else if (key == "replications") {
            r.replications = parse_size(value, line);
        } else if (key == "alpha") {
            r.alpha = *parse_opt(value, line);
        } else if (key == "seed") {
            std::uint64_t s = 0;
            const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
            if (ec != std::errc{} || end != value.data() + value.size()) {
                throw ParseError("invalid seed '" + value + "'", line);
            }
            r.seed = s;
        } else if (key == "permutations") {
            r.permutations = parse_size(value, line);
        } else if (key == "bootstrap") {
            r.bootstrap = parse_size(value, line);
        } else if (key == "single_sample") {
            r.single_sample = parse_bool(value, line);
        } else if (key == "elapsed_seconds") {
            r.elapsed_seconds = *parse_opt(value, line);
        } else {
            throw ParseError("unknown metadata key '" + key + "'", line);
        }
    }
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> json_opt(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), end};
}

std::string format_fixed(double v, int decimals) {
    if (!std::isfinite(v)) return format_double(v);
    std::array<char, 64> buf{};
    const auto [end, ec] =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, decimals);
    std::string s(buf.data(), end);
    // "-0.000" reads as a sign where there is none.
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

double parse_double(std::string_view text) {
    std::string_view t = text;
    while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.remove_prefix(1);
    while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.remove_suffix(1);
    if (t == "nan" || t == "NaN") return std::numeric_limits<double>::quiet_NaN();
    if (t == "inf") return std::numeric_limits<double>::infinity();
    if (t == "-inf") return -std::numeric_limits<double>::infinity();
    if (!t.empty() && t.front() == '+') t.remove_prefix(1);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || end != t.data() + t.size()) {
        throw ParseError("not a number: '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", line_no);
    out.push_back(std::move(field));
    return out;
}

std::string csv_field(std::string_view text) {
    if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
    std::string out = "\"";
    for (const char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string cell_csv_header() {
    std::string out;
    for (const auto c : kCellColumns) {
        if (!out.empty()) out += ',';
        out += c;
    }
    return out;
}

std::string cell_to_csv(const StudyCell& c) {
    std::ostringstream out;
    out << csv_field(c.distribution) << ',' << csv_field(c.method) << ','
        << (c.available ? "true" : "false") << ',' << c.replications << ',' << c.failures << ','
        << opt(c.value) << ',' << opt(c.std_error) << ',' << opt(c.mean_length) << ','
        << opt(c.length_std_error);
    return out.str();
}

StudyCell cell_from_csv(const std::vector<std::string>& f, std::size_t line) {
    if (f.size() != kCellColumns.size()) {
        throw ParseError("expected " + std::to_string(kCellColumns.size()) + " fields, got " +
                             std::to_string(f.size()),
                         line);
    }
    StudyCell c;
    c.distribution = f[0];
    c.method = f[1];
    c.available = parse_bool(f[2], line);
    c.replications = parse_size(f[3], line);
    c.failures = parse_size(f[4], line);
    c.value = parse_opt(f[5], line);
    c.std_error = parse_opt(f[6], line);
    c.mean_length = parse_opt(f[7], line);
    c.length_std_error = parse_opt(f[8], line);
    return c;
}

void write_report_csv(std::ostream& out, const StudyReport& report) {
    out << metadata_line(report) << '\n' << cell_csv_header() << '\n';
    for (const auto& c : report.cells) out << cell_to_csv(c) << '\n';
}

StudyReport read_report_csv(std::istream& in) {
    StudyReport report;
    std::string text;
    std::size_t line = 0;
    bool have_meta = false, have_header = false;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.empty()) continue;
        if (text.front() == '#') {
            if (have_meta) throw ParseError("duplicate metadata line", line);
            std::string_view body(text);
            body.remove_prefix(1);
            while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
            apply_metadata(body, report, line);
            have_meta = true;
            continue;
        }
        if (!have_header) {
            if (text != cell_csv_header()) throw ParseError("unexpected report header", line);
            have_header = true;
            continue;
        }
        report.cells.push_back(cell_from_csv(split_csv_line(text, line), line));
    }
    if (!have_meta) throw ParseError("report is missing its metadata line", line);
    if (!have_header) throw ParseError("report is missing its header", line);
    return report;
}

void write_report_csv(const std::string& path, const StudyReport& report) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    write_report_csv(out, report);
}

StudyReport read_report_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    return read_report_csv(in);
}

std::string report_to_json(const StudyReport& r, int indent) {
    json cells = json::array();
    for (const auto& c : r.cells) {
        cells.push_back({{"distribution", c.distribution},
                         {"method", c.method},
                         {"available", c.available},
                         {"replications", c.replications},
                         {"failures", c.failures},
                         {"value", opt_json(c.value)},
                         {"std_error", opt_json(c.std_error)},
                         {"mean_length", opt_json(c.mean_length)},
                         {"length_std_error", opt_json(c.length_std_error)}});
    }
    const json j = {{"kind", study_kind_id(r.kind)},
                    {"n", r.n},
                    {"replications", r.replications},
                    {"alpha", r.alpha},
                    {"seed", r.seed},
                    {"permutations", r.permutations},
                    {"bootstrap", r.bootstrap},
                    {"single_sample", r.single_sample},
                    {"elapsed_seconds", r.elapsed_seconds},
                    {"cells", cells}};
    return j.dump(indent);
}

StudyReport report_from_json(std::string_view text) {
    try {
        const json j = json::parse(text);
        StudyReport r;
        r.kind = parse_study_kind(j.at("kind").get<std::string>());
        r.n = j.at("n").get<std::size_t>();
        r.replications = j.at("replications").get<std::size_t>();
        r.alpha = j.at("alpha").get<double>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.permutations = j.at("permutations").get<std::size_t>();
        r.bootstrap = j.at("bootstrap").get<std::size_t>();
        r.single_sample = j.at("single_sample").get<bool>();
        r.elapsed_seconds = j.value("elapsed_seconds", 0.0);
        for (const auto& c : j.at("cells")) {
            StudyCell cell;
            cell.distribution = c.at("distribution").get<std::string>();
            cell.method = c.at("method").get<std::string>();
            cell.available = c.at("available").get<bool>();
            cell.replications = c.at("replications").get<std::size_t>();
            cell.failures = c.at("failures").get<std::size_t>();
            cell.value = json_opt(c, "value");
            cell.std_error = json_opt(c, "std_error");
            cell.mean_length = json_opt(c, "mean_length");
            cell.length_std_error = json_opt(c, "length_std_error");
            r.cells.push_back(std::move(cell));
        }
        return r;
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid report JSON: ") + e.what());
    } catch (const ConfigError& e) {
        throw ParseError(e.what());
    }
}

std::string format_report_table(const StudyReport& report, bool with_lengths) {
    std::vector<std::string> dists, methods;
    auto remember = [](std::vector<std::string>& v, const std::string& s) {
        if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
    };
    for (const auto& c : report.cells) {
        remember(dists, c.distribution);
        remember(methods, c.method);
    }
    std::size_t first = std::string_view("distribution").size();
    for (const auto& d : dists) first = std::max(first, d.size());

    auto block = [&](bool lengths) {
        std::ostringstream out;
        out << std::left << std::setw(static_cast<int>(first)) << "distribution";
        for (const auto& m : methods) out << "  " << std::right << std::setw(static_cast<int>(std::max<std::size_t>(m.size(), 6))) << m;
        out << '\n';
        for (const auto& d : dists) {
            out << std::left << std::setw(static_cast<int>(first)) << d;
            for (const auto& m : methods) {
                const StudyCell* c = report.find(d, m);
                std::string text = "-";
                if (c && c->available) {
                    const auto& v = lengths ? c->mean_length : c->value;
                    text = v ? format_fixed(*v, 3) : "n/a";
                }
                out << "  " << std::right
                    << std::setw(static_cast<int>(std::max<std::size_t>(m.size(), 6))) << text;
            }
            out << '\n';
        }
        return out.str();
    };

    std::string out = block(false);
    if (with_lengths && report.kind == StudyKind::Coverage) out += "\nmean length\n" + block(true);
    return out;
}

}  // namespace lancaster
