#include "lancaster/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lancaster/estimators.hpp"
#include "lancaster/experiments.hpp"
#include "lancaster/inference.hpp"
#include "lancaster/report_io.hpp"
#include "lancaster/samplers.hpp"
#include "lancaster/study_config.hpp"
#include "lancaster/truth.hpp"

namespace lancaster::cli {

namespace {

using json = nlohmann::json;

bool is_number(std::string_view s) {
    try {
        parse_double(s);
        return true;
    } catch (const ParseError&) {
        return false;
    }
}

std::size_t select_column(std::string_view selector, const std::vector<std::string>& header,
                           std::size_t width, std::size_t fallback) {
    if (selector.empty()) return fallback;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == selector) return i;
    }
    std::size_t index = 0;
    const auto [end, ec] = std::from_chars(selector.data(), selector.data() + selector.size(), index);
    if (ec == std::errc{} && end == selector.data() + selector.size()) {
        if (index >= width) {
            throw UsageError("column index " + std::string(selector) + " out of range (file has " +
                             std::to_string(width) + " columns)");
        }
        return index;
    }
    throw UsageError("no column named '" + std::string(selector) + "'");
}

std::string trim_field(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

void print_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct InputOptions {
    std::string path;
    std::string x_column;
    std::string y_column;
    std::string dist;
    std::size_t n = 0;
    std::optional<std::uint64_t> seed;

    void add_to(CLI::App* app, bool allow_dist) {
        app->add_option("input", path, "CSV file with the paired observations");
        app->add_option("-x,--x-column", x_column, "x column: name or 0-based index (default 0)");
        app->add_option("-y,--y-column", y_column, "y column: name or 0-based index (default 1)");
        if (allow_dist) {
            app->add_option("--dist", dist, "draw the sample from a named distribution instead");
            app->add_option("-n,--n", n, "sample size for --dist");
        }
    }

    Sample load(std::uint64_t dist_seed) const {
        if (!dist.empty()) {
            if (!path.empty()) throw UsageError("give either an input file or --dist, not both");
            if (n == 0) throw UsageError("--dist needs --n");
            return sample(parse_distribution(dist), n, dist_seed);
        }
        if (path.empty()) throw UsageError("missing input file");
        return read_xy_csv(path, x_column, y_column);
    }
};

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed, std::string_view command) {
    if (!seed) throw UsageError(std::string(command) + " needs --seed");
    return *seed;
}

}  // namespace

Sample read_xy_csv(std::istream& in, std::string_view x_column, std::string_view y_column) {
    std::string text;
    std::size_t line = 0;
    std::vector<std::string> header;
    std::size_t width = 0;
    std::size_t xi = 0, yi = 1;
    bool first = true;
    std::vector<double> xs, ys;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (trim_field(text).empty()) continue;
        auto fields = split_csv_line(text, line);
        for (auto& f : fields) f = trim_field(f);
        if (first) {
            first = false;
            width = fields.size();
            if (width < 2) throw UsageError("input needs at least two columns");
            const bool numeric = std::all_of(fields.begin(), fields.end(), is_number);
            if (!numeric) header = fields;
            xi = select_column(x_column, header, width, 0);
            yi = select_column(y_column, header, width, 1);
            if (!numeric) continue;
        }
        if (fields.size() != width) {
            throw ParseError("expected " + std::to_string(width) + " fields, got " +
                                 std::to_string(fields.size()),
                             line);
        }
        try {
            const double x = parse_double(fields[xi]);
            const double y = parse_double(fields[yi]);
            if (!std::isfinite(x) || !std::isfinite(y)) throw ParseError("non-finite value");
            xs.push_back(x);
            ys.push_back(y);
        } catch (const ParseError& e) {
            throw ParseError(std::string("non-numeric cell: ") + e.what(), line);
        }
    }
    if (first) throw UsageError("input is empty");
    if (xs.size() < 2) throw DomainError("input needs at least two observations");
    return Sample(std::move(xs), std::move(ys));
}

Sample read_xy_csv(const std::string& path, std::string_view x_column, std::string_view y_column) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    return read_xy_csv(in, x_column, y_column);
}

void write_sample_csv(std::ostream& out, const Sample& s) {
    out << "x,y\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << format_double(s.xs()[i]) << ',' << format_double(s.ys()[i]) << '\n';
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lancaster correlation: estimation, independence tests, confidence intervals "
                 "and simulation studies"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "lancaster 0.1.0");

    // estimate
    InputOptions est_in;
    std::vector<std::string> est_coefs;
    std::string est_format = "table";
    std::string est_dump;
    std::optional<std::uint64_t> est_seed;
    auto* estimate = app.add_subcommand("estimate", "Evaluate correlation coefficients");
    est_in.add_to(estimate, true);
    estimate->add_option("-c,--coef", est_coefs, "coefficient id (repeatable; default all)");
    estimate->add_option("-f,--format", est_format, "table, csv or json")
        ->check(CLI::IsMember({"table", "csv", "json"}));
    estimate->add_option("--seed", est_seed, "seed for --dist and for xi tie-breaking");
    estimate->add_option("--dump-sample", est_dump, "write the (x, y) sample to this CSV file");

    // test
    InputOptions test_in;
    std::string test_method = "rank_asymptotic";
    std::size_t test_perms = kDefaultPermutations;
    std::size_t test_threads = 1;
    auto* test = app.add_subcommand("test", "Test for independence");
    test_in.add_to(test, true);
    test->add_option("-m,--method", test_method, "test method id");
    test->add_option("-B,--permutations", test_perms, "number of random permutations");
    test->add_option("--seed", test_in.seed, "random seed (required)");
    test->add_option("--threads", test_threads, "worker threads (0 = all cores)");

    // ci
    InputOptions ci_in;
    std::string ci_method = "boot_rank";
    double ci_level = 0.95;
    std::size_t ci_boot = kDefaultBootstrap;
    std::size_t ci_threads = 1;
    auto* ci = app.add_subcommand("ci", "Confidence interval for the Lancaster correlation");
    ci_in.add_to(ci, true);
    ci->add_option("-m,--method", ci_method, "interval method id");
    ci->add_option("-l,--level", ci_level, "confidence level in (0, 1)");
    ci->add_option("-B,--bootstrap", ci_boot, "bootstrap resamples");
    ci->add_option("--seed", ci_in.seed, "random seed (required)");
    ci->add_option("--threads", ci_threads, "worker threads (0 = all cores)");

    // study
    std::string study_path, study_csv, study_json;
    bool study_full = false, study_quiet = false;
    std::optional<std::size_t> study_threads;
    auto* study = app.add_subcommand("study", "Run a Monte Carlo study from a config file");
    study->add_option("config", study_path, "study config file")->required();
    study->add_option("--csv", study_csv, "write the report as CSV");
    study->add_option("--json", study_json, "write the report as JSON");
    study->add_flag("--full-scale", study_full, "10^4 replications, 1000 permutations/resamples");
    study->add_option("--threads", study_threads, "override the config's thread count");
    study->add_flag("-q,--quiet", study_quiet, "do not print the table");

    // truth
    std::string truth_out;
    std::size_t truth_n = kTruthSampleSize;
    std::uint64_t truth_seed = kTruthSeed;
    std::vector<std::string> truth_dists;
    auto* truth = app.add_subcommand("truth", "Generate Monte Carlo population values");
    truth->add_option("-o,--out", truth_out, "output CSV (default: the data directory file)");
    truth->add_option("-n,--n", truth_n, "sample size per distribution");
    truth->add_option("--seed", truth_seed, "random seed");
    truth->add_option("--dist", truth_dists, "distribution (repeatable; default the shipped set)");

    // sample
    std::string sample_dist;
    std::size_t sample_n = 0;
    std::optional<std::uint64_t> sample_seed;
    auto* sample_cmd = app.add_subcommand("sample", "Draw a sample and print it as CSV");
    sample_cmd->add_option("--dist", sample_dist, "distribution")->required();
    sample_cmd->add_option("-n,--n", sample_n, "sample size")->required();
    sample_cmd->add_option("--seed", sample_seed, "random seed (required)");

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            out << app.help();
            return kExitOk;
        } catch (const CLI::CallForAllHelp& e) {
            out << app.help("", CLI::AppFormatMode::All);
            return kExitOk;
        } catch (const CLI::CallForVersion& e) {
            out << e.what() << '\n';
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            err << "error: " << e.what() << '\n';
            return kExitUsage;
        }

        if (estimate->parsed()) {
            const std::uint64_t seed = est_seed.value_or(0);
            if (!est_in.dist.empty() && !est_seed) throw UsageError("--dist needs --seed");
            const Sample s = est_in.load(seed);
            if (!est_dump.empty()) {
                std::ofstream dump(est_dump);
                if (!dump) throw UsageError("cannot write '" + est_dump + "'");
                write_sample_csv(dump, s);
            }
            std::vector<Coefficient> coefs;
            if (est_coefs.empty()) {
                coefs.assign(all_coefficients().begin(), all_coefficients().end());
            } else {
                for (const auto& id : est_coefs) coefs.push_back(parse_coefficient(id));
            }
            struct Row {
                std::string id;
                std::optional<CoefficientValue> v;
                std::string note;
            };
            std::vector<Row> rows;
            for (const auto c : coefs) {
                Row row{std::string(coefficient_id(c)), std::nullopt, ""};
                try {
                    row.v = evaluate_coefficient(c, s, seed);
                } catch (const DomainError& e) {
                    row.note = e.what();
                }
                rows.push_back(std::move(row));
            }
            if (est_format == "json") {
                json arr = json::array();
                for (const auto& r : rows) {
                    json j = {{"coefficient", r.id}};
                    if (r.v) {
                        j["value"] = number_or_null(r.v->value);
                        j["rho1"] = number_or_null(r.v->rho1);
                        j["rho2"] = number_or_null(r.v->rho2);
                        j["ties"] = r.v->ties;
                    } else {
                        j["value"] = nullptr;
                        j["error"] = r.note;
                    }
                    arr.push_back(j);
                }
                print_json(out, {{"n", s.size()}, {"estimates", arr}});
            } else if (est_format == "csv") {
                out << "coefficient,value,rho1,rho2,ties\n";
                for (const auto& r : rows) {
                    out << r.id << ',';
                    if (r.v) {
                        out << format_double(r.v->value) << ',' << format_double(r.v->rho1) << ','
                            << format_double(r.v->rho2) << ',' << (r.v->ties ? "true" : "false");
                    } else {
                        out << ",,,";
                    }
                    out << '\n';
                }
            } else {
                out << "n = " << s.size() << '\n';
                out << std::left << std::setw(18) << "coefficient" << std::right << std::setw(9)
                    << "value" << std::setw(9) << "rho1" << std::setw(9) << "rho2" << "  ties\n";
                for (const auto& r : rows) {
                    out << std::left << std::setw(18) << r.id << std::right;
                    if (r.v) {
                        out << std::setw(9) << format_fixed(r.v->value, 3) << std::setw(9)
                            << format_fixed(r.v->rho1, 3) << std::setw(9)
                            << format_fixed(r.v->rho2, 3) << "  " << (r.v->ties ? "yes" : "no");
                    } else {
                        out << std::setw(9) << "-" << "  (" << r.note << ")";
                    }
                    out << '\n';
                }
                for (const auto& r : rows) {
                    if (r.v && r.v->ties) {
                        out << "warning: ties present; ranks use the largest tied position\n";
                        break;
                    }
                }
            }
            return kExitOk;
        }

        if (test->parsed()) {
            const std::uint64_t seed = require_seed(test_in.seed, "test");
            const TestMethod method = parse_test_method(test_method);
            const Sample s = test_in.load(seed);
            const auto r = run_test(s, method, test_perms, seed, test_threads);
            json j = {{"method", test_method_id(r.method)},
                      {"statistic", number_or_null(r.statistic)},
                      {"p_value", number_or_null(r.p_value)},
                      {"n", s.size()},
                      {"seed", seed}};
            if (r.n_permutations) j["permutations"] = *r.n_permutations;
            print_json(out, j);
            return kExitOk;
        }

        if (ci->parsed()) {
            const std::uint64_t seed = require_seed(ci_in.seed, "ci");
            const CiMethod method = parse_ci_method(ci_method);
            if (!(ci_level > 0.0 && ci_level < 1.0)) {
                throw DomainError("confidence level must lie in (0, 1)");
            }
            const Sample s = ci_in.load(seed);
            const auto r = confidence_interval(s, method, ci_level, ci_boot, seed, ci_threads);
            json j = {{"method", ci_method_id(r.method)},
                      {"lower", r.lower},
                      {"upper", r.upper},
                      {"level", r.level},
                      {"estimate", r.estimate},
                      {"lower_truncated", r.lower_truncated},
                      {"upper_truncated", r.upper_truncated},
                      {"cov", {{"s11", r.cov.s11}, {"s12", r.cov.s12}, {"s22", r.cov.s22}}},
                      {"n", s.size()},
                      {"seed", seed}};
            if (method != CiMethod::PlugIn && method != CiMethod::PlugInConservative) {
                j["bootstrap"] = ci_boot;
            }
            print_json(out, j);
            return kExitOk;
        }

        if (study->parsed()) {
            StudyConfig config = load_study_config(study_path);
            if (study_full) {
                apply_full_scale(config);
            }
            if (study_threads) config.threads = *study_threads;
            const StudyReport report = run_study(config);
            if (!study_csv.empty()) write_report_csv(study_csv, report);
            if (!study_json.empty()) {
                std::ofstream f(study_json);
                if (!f) throw UsageError("cannot write '" + study_json + "'");
                f << report_to_json(report) << '\n';
            }
            if (!study_quiet) {
                out << study_kind_id(report.kind) << " study, n = " << report.n
                    << ", replications = " << report.replications << ", seed = " << report.seed
                    << '\n'
                    << format_report_table(report, true);
            }
            return kExitOk;
        }

        if (truth->parsed()) {
            std::vector<DistributionSpec> dists;
            if (truth_dists.empty()) {
                dists = default_truth_distributions();
            } else {
                for (const auto& d : truth_dists) dists.push_back(parse_distribution(d));
            }
            const std::string path = truth_out.empty() ? default_truth_path() : truth_out;
            TruthTable table;
            for (const auto& d : dists) {
                const auto v = monte_carlo_truth(d, truth_n, truth_seed);
                table.set(d, v);
                out << distribution_name(d) << ": rank " << (v.rank ? format_fixed(*v.rank, 4) : "-")
                    << ", linear " << (v.linear ? format_fixed(*v.linear, 4) : "-") << '\n';
            }
            table.save(path);
            out << "wrote " << path << '\n';
            return kExitOk;
        }

        if (sample_cmd->parsed()) {
            const std::uint64_t seed = require_seed(sample_seed, "sample");
            write_sample_csv(out, sample(parse_distribution(sample_dist), sample_n, seed));
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}

}  // namespace lancaster::cli
