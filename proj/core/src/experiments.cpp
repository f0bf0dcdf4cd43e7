#include "lancaster/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <utility>

#include "lancaster/error.hpp"
#include "lancaster/estimators.hpp"
#include "lancaster/inference.hpp"
#include "lancaster/parallel.hpp"
#include "lancaster/report_io.hpp"
#include "lancaster/rng.hpp"

namespace lancaster {

std::string_view study_kind_id(StudyKind k) noexcept {
    switch (k) {
        case StudyKind::Estimate: return "estimate";
        case StudyKind::Power: return "power";
        case StudyKind::Coverage: return "coverage";
    }
    return "unknown";
}

StudyKind parse_study_kind(std::string_view id) {
    for (const auto k : {StudyKind::Estimate, StudyKind::Power, StudyKind::Coverage}) {
        if (study_kind_id(k) == id) return k;
    }
    throw ConfigError("unknown study kind '" + std::string(id) +
                      "'; valid ids: estimate, power, coverage");
}

void StudyConfig::validate() const {
    if (distributions.empty()) throw ConfigError("study needs at least one distribution");
    if (methods.empty()) throw ConfigError("study needs at least one method");
    if (replications < 1) throw ConfigError("replications must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (permutations < 1) throw ConfigError("permutations must be >= 1");
    if (bootstrap < 2) throw ConfigError("bootstrap must be >= 2");
    const std::size_t min_n = kind == StudyKind::Coverage ? 12 : 3;
    if (n < min_n) throw ConfigError("n must be >= " + std::to_string(min_n) + " for this study");
    for (const auto& d : distributions) d.validate();
    for (const auto& m : methods) {
        switch (kind) {
            case StudyKind::Estimate: parse_coefficient(m); break;
            case StudyKind::Power: parse_test_method(m); break;
            case StudyKind::Coverage: parse_ci_method(m); break;
        }
    }
}

void apply_full_scale(StudyConfig& config) {
    config.replications = 10000;
    config.permutations = 1000;
    config.bootstrap = 1000;
}

const StudyCell* StudyReport::find(std::string_view distribution, std::string_view method) const {
    for (const auto& c : cells) {
        if (c.distribution == distribution && c.method == method) return &c;
    }
    return nullptr;
}

bool StudyReport::same_content(const StudyReport& o) const {
    return kind == o.kind && n == o.n && replications == o.replications && alpha == o.alpha &&
           seed == o.seed && permutations == o.permutations && bootstrap == o.bootstrap &&
           single_sample == o.single_sample && cells == o.cells;
}

bool coefficient_available(const DistributionSpec& spec, std::string_view id) {
    switch (parse_coefficient(id)) {
        case Coefficient::Pearson: return has_finite_moments(spec, 2);
        case Coefficient::LancasterLinear: return has_finite_moments(spec, 4);
        case Coefficient::DistanceCorrelation: return has_finite_moments(spec, 1);
        default: return true;
    }
}

bool interval_available(const DistributionSpec& spec, std::string_view id) {
    if (ci_estimator(parse_ci_method(id)) == Estimator::Rank) return true;
    return has_finite_moments(spec, 8);
}

std::vector<DistributionSpec> preset_distributions(std::string_view name) {
    std::vector<const char*> names;
    if (name == "table1") {
        names = {"NM1", "NM2", "BVT5(0)", "BVC", "UnifDisc", "GARCH(2,1)"};
    } else if (name == "table2" || name == "table3") {
        names = {"BVN(0)",    "BVN(0.5)",  "BVN(0.95)", "MN1",       "MN2",      "MN3",
                 "MN",        "BVT5(0)",   "BVT2(0)",   "BVT1(0)",   "BVT5(0.2)", "BVT2(0.2)",
                 "BVT1(0.2)", "UnifDisc",  "UnifRhomb", "UnifTriangle"};
        if (name == "table2") names.push_back("GARCH(2,1)");
        for (const char* r : {"RegLin1", "RegLin2", "RegQuad1", "RegQuad2", "RegTrig1", "RegTrig2"}) {
            names.push_back(r);
        }
    } else {
        throw ConfigError("unknown distribution preset '" + std::string(name) +
                          "'; valid presets: table1, table2, table3");
    }
    std::vector<DistributionSpec> out;
    for (const char* n : names) out.push_back(parse_distribution(n));
    return out;
}

std::vector<std::string> preset_methods(StudyKind kind, std::string_view name) {
    std::vector<std::string> out;
    if (name == "all") {
        switch (kind) {
            case StudyKind::Estimate:
                for (auto c : all_coefficients()) out.emplace_back(coefficient_id(c));
                break;
            case StudyKind::Power:
                for (auto m : all_test_methods()) out.emplace_back(test_method_id(m));
                break;
            case StudyKind::Coverage:
                for (auto m : all_ci_methods()) out.emplace_back(ci_method_id(m));
                break;
        }
        return out;
    }
    if (name == "table1" || name == "table2" || name == "table3" || name == "table") {
        switch (kind) {
            case StudyKind::Estimate:
                return {"pearson", "spearman", "lancaster_linear", "lancaster_rank", "dcor", "xi"};
            case StudyKind::Power:
                return {"pearson_permutation", "spearman_permutation", "linear_permutation",
                        "rank_asymptotic",     "rank_permutation",     "dcor_permutation",
                        "xi_permutation"};
            case StudyKind::Coverage: return preset_methods(kind, "all");
        }
    }
    throw ConfigError("unknown method preset '" + std::string(name) + "'; valid presets: all, table");
}

std::uint64_t replication_seed(std::uint64_t seed, std::string_view dist, std::size_t rep) {
    return Rng::stream(seed, {hash_key(dist), rep}).next();
}

std::uint64_t method_seed(std::uint64_t seed, std::string_view dist, std::size_t rep,
                          std::string_view method) {
    return Rng::stream(seed, {hash_key(dist), rep, hash_key(method)}).next();
}

namespace {

struct Observation {
    double value = 0.0;
    double length = 0.0;
    bool ok = false;
};

using CellKey = std::pair<std::string, std::string>;

StudyReport report_header(const StudyConfig& c) {
    StudyReport r;
    r.kind = c.kind;
    r.n = c.n;
    r.replications = c.single_sample && c.kind == StudyKind::Estimate ? 1 : c.replications;
    r.alpha = c.alpha;
    r.seed = c.seed;
    r.permutations = c.permutations;
    r.bootstrap = c.bootstrap;
    r.single_sample = c.single_sample && c.kind == StudyKind::Estimate;
    return r;
}

StudyCell aggregate(const std::string& dist, const std::string& method, StudyKind kind,
                    bool single, std::span<const Observation> obs) {
    StudyCell cell;
    cell.distribution = dist;
    cell.method = method;
    double sum = 0.0, sum_len = 0.0;
    for (const auto& o : obs) {
        if (!o.ok) {
            ++cell.failures;
            continue;
        }
        ++cell.replications;
        sum += o.value;
        sum_len += o.length;
    }
    const auto b = static_cast<double>(cell.replications);
    if (cell.replications == 0) return cell;
    const double mean = sum / b;
    cell.value = mean;
    if (kind == StudyKind::Estimate) {
        if (!single && cell.replications > 1) {
            double ss = 0.0;
            for (const auto& o : obs) {
                if (o.ok) ss += (o.value - mean) * (o.value - mean);
            }
            cell.std_error = std::sqrt(ss / (b - 1.0) / b);
        }
        return cell;
    }
    cell.std_error = std::sqrt(mean * (1.0 - mean) / b);
    if (kind == StudyKind::Coverage) {
        const double mean_len = sum_len / b;
        cell.mean_length = mean_len;
        double ss = 0.0;
        for (const auto& o : obs) {
            if (o.ok) ss += (o.length - mean_len) * (o.length - mean_len);
        }
        cell.length_std_error = cell.replications > 1 ? std::sqrt(ss / (b - 1.0) / b) : 0.0;
    }
    return cell;
}

StudyReport run_impl(const StudyConfig& config, const TruthTable* truth,
                     const std::map<CellKey, StudyCell>& done, const CellSink& sink) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    StudyReport report = report_header(config);
    const bool single = report.single_sample;
    const std::size_t reps = report.replications;
    const std::size_t m = config.methods.size();

    std::vector<TestMethod> tests;
    std::vector<CiMethod> intervals;
    std::vector<Coefficient> coefficients;
    for (const auto& id : config.methods) {
        if (config.kind == StudyKind::Power) tests.push_back(parse_test_method(id));
        if (config.kind == StudyKind::Coverage) intervals.push_back(parse_ci_method(id));
        if (config.kind == StudyKind::Estimate) coefficients.push_back(parse_coefficient(id));
    }

    for (const auto& spec : config.distributions) {
        const std::string dist = distribution_name(spec);
        std::vector<bool> available(m, true), todo(m, false);
        std::vector<double> target(m, 0.0);
        std::optional<TruthValue> tv;
        if (config.kind == StudyKind::Coverage) tv = truth ? truth->find(spec) : std::nullopt;
        for (std::size_t j = 0; j < m; ++j) {
            const auto& id = config.methods[j];
            if (config.kind == StudyKind::Estimate) available[j] = coefficient_available(spec, id);
            if (config.kind == StudyKind::Coverage) {
                available[j] = interval_available(spec, id);
                if (available[j]) {
                    const bool rank = ci_estimator(intervals[j]) == Estimator::Rank;
                    const auto v = tv ? (rank ? tv->rank : tv->linear) : std::nullopt;
                    if (!v) {
                        throw ConfigError("no true " + std::string(rank ? "rank" : "linear") +
                                          " value for " + dist +
                                          "; generate one with `lancaster truth`");
                    }
                    target[j] = *v;
                }
            }
            todo[j] = available[j] && !done.contains({dist, id});
        }

        std::vector<Observation> obs;
        if (std::find(todo.begin(), todo.end(), true) != todo.end()) {
            obs.assign(reps * m, Observation{});
            parallel_for(
                reps,
                [&](std::size_t r) {
                    const std::uint64_t sseed =
                        single ? Rng::stream(config.seed, {hash_key(dist)}).next()
                               : replication_seed(config.seed, dist, r);
                    std::optional<Sample> s;
                    try {
                        s = sample(spec, config.n, sseed);
                    } catch (const DomainError&) {
                        return;
                    }
                    for (std::size_t j = 0; j < m; ++j) {
                        if (!todo[j]) continue;
                        const auto& id = config.methods[j];
                        const std::uint64_t mseed = method_seed(config.seed, dist, r, id);
                        Observation& o = obs[r * m + j];
                        try {
                            switch (config.kind) {
                                case StudyKind::Estimate:
                                    o.value = evaluate_coefficient(coefficients[j], *s, mseed).value;
                                    break;
                                case StudyKind::Power: {
                                    const auto res = run_test(*s, tests[j], config.permutations,
                                                              mseed, 1);
                                    o.value = res.p_value <= config.alpha ? 1.0 : 0.0;
                                    break;
                                }
                                case StudyKind::Coverage: {
                                    const auto ci =
                                        confidence_interval(*s, intervals[j], 1.0 - config.alpha,
                                                            config.bootstrap, mseed, 1);
                                    o.value = ci.contains(target[j]) ? 1.0 : 0.0;
                                    o.length = ci.length();
                                    break;
                                }
                            }
                            o.ok = std::isfinite(o.value);
                        } catch (const DomainError&) {
                            o.ok = false;
                        }
                    }
                },
                config.threads);
        }

        std::vector<StudyCell> fresh;
        for (std::size_t j = 0; j < m; ++j) {
            const auto& id = config.methods[j];
            if (const auto it = done.find({dist, id}); it != done.end()) {
                report.cells.push_back(it->second);
                continue;
            }
            StudyCell cell;
            if (!available[j]) {
                cell.distribution = dist;
                cell.method = id;
                cell.available = false;
            } else {
                std::vector<Observation> column(reps);
                for (std::size_t r = 0; r < reps; ++r) column[r] = obs[r * m + j];
                cell = aggregate(dist, id, config.kind, single, column);
            }
            report.cells.push_back(cell);
            fresh.push_back(cell);
        }
        if (sink && !fresh.empty()) sink(fresh);
    }
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

bool same_header(const StudyReport& a, const StudyReport& b) {
    StudyReport x = a, y = b;
    x.cells.clear();
    y.cells.clear();
    return x.same_content(y);
}

}  // namespace

StudyReport run_estimate_table(const StudyConfig& config, const CellSink& sink) {
    if (config.kind != StudyKind::Estimate) throw ConfigError("config kind must be estimate");
    return run_impl(config, nullptr, {}, sink);
}

StudyReport run_power_study(const StudyConfig& config, const CellSink& sink) {
    if (config.kind != StudyKind::Power) throw ConfigError("config kind must be power");
    return run_impl(config, nullptr, {}, sink);
}

StudyReport run_coverage_study(const StudyConfig& config, const TruthTable& truth,
                               const CellSink& sink) {
    if (config.kind != StudyKind::Coverage) throw ConfigError("config kind must be coverage");
    return run_impl(config, &truth, {}, sink);
}

StudyReport run_study(const StudyConfig& config) {
    config.validate();
    TruthTable truth;
    if (config.kind == StudyKind::Coverage) {
        truth = TruthTable::load(config.truth_file.empty() ? default_truth_path()
                                                           : config.truth_file);
    }
    std::map<CellKey, StudyCell> done;
    CellSink sink;
    std::ofstream partial;
    if (!config.partial_file.empty()) {
        const StudyReport header = report_header(config);
        if (std::filesystem::exists(config.partial_file) &&
            std::filesystem::file_size(config.partial_file) > 0) {
            const StudyReport previous = read_report_csv(config.partial_file);
            if (!same_header(previous, header)) {
                throw ConfigError("partial file '" + config.partial_file +
                                  "' belongs to a different study configuration");
            }
            for (const auto& c : previous.cells) done[{c.distribution, c.method}] = c;
            partial.open(config.partial_file, std::ios::app);
        } else {
            partial.open(config.partial_file);
            write_report_csv(partial, header);
        }
        if (!partial) throw ConfigError("cannot write partial file '" + config.partial_file + "'");
        partial.flush();
        sink = [&partial](const std::vector<StudyCell>& cells) {
            for (const auto& c : cells) partial << cell_to_csv(c) << '\n';
            partial.flush();
        };
    }
    return run_impl(config, &truth, done, sink);
}

}  // namespace lancaster
