#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lancaster/samplers.hpp"
#include "lancaster/truth.hpp"

namespace lancaster {

enum class StudyKind { Estimate, Power, Coverage };

std::string_view study_kind_id(StudyKind k) noexcept;
StudyKind parse_study_kind(std::string_view id);

struct StudyConfig {
    StudyKind kind = StudyKind::Power;
    std::vector<DistributionSpec> distributions;
    // Coefficient ids (estimate), test ids (power) or interval ids (coverage).
    std::vector<std::string> methods;
    std::size_t n = 100;
    std::size_t replications = 2000;
    double alpha = 0.05;  // test level; intervals use level 1 - alpha
    std::uint64_t seed = 0;
    std::size_t permutations = 500;
    std::size_t bootstrap = 300;
    std::size_t threads = 0;
    bool single_sample = false;  // estimate: one draw per distribution, no averaging
    std::string truth_file;      // coverage; empty -> default_truth_path()
    std::string partial_file;    // cells already present are reused, new ones appended

    void validate() const;  // ConfigError
};

// Full-scale settings: 10^4 replications, 1000 permutations, 1000 resamples.
void apply_full_scale(StudyConfig& config);

struct StudyCell {
    std::string distribution;
    std::string method;
    bool available = true;
    std::size_t replications = 0;  // replications that produced a value
    std::size_t failures = 0;      // replications rejected with a domain error
    // estimate: mean coefficient; power: rejection rate; coverage: coverage rate
    std::optional<double> value;
    // estimate: sd / sqrt(B); rates: sqrt(p (1 - p) / B)
    std::optional<double> std_error;
    std::optional<double> mean_length;  // coverage only
    std::optional<double> length_std_error;

    bool operator==(const StudyCell&) const = default;
};

struct StudyReport {
    StudyKind kind = StudyKind::Power;
    std::size_t n = 0;
    std::size_t replications = 0;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::size_t permutations = 0;
    std::size_t bootstrap = 0;
    bool single_sample = false;
    std::vector<StudyCell> cells;  // distribution-major, in config order
    double elapsed_seconds = 0.0;  // not part of the reproducible content

    const StudyCell* find(std::string_view distribution, std::string_view method) const;
    bool same_content(const StudyReport& other) const;  // ignores elapsed_seconds
};

// Called after each finished distribution with its cells.
using CellSink = std::function<void(const std::vector<StudyCell>&)>;

StudyReport run_estimate_table(const StudyConfig& config, const CellSink& sink = {});
StudyReport run_power_study(const StudyConfig& config, const CellSink& sink = {});
StudyReport run_coverage_study(const StudyConfig& config, const TruthTable& truth,
                               const CellSink& sink = {});
// Dispatches on config.kind, loads truth values and handles config.partial_file.
StudyReport run_study(const StudyConfig& config);

// Availability rules for "-" cells.
bool coefficient_available(const DistributionSpec& spec, std::string_view coefficient_id);
bool interval_available(const DistributionSpec& spec, std::string_view ci_method_id);

// Preset lists usable in study configs.
std::vector<DistributionSpec> preset_distributions(std::string_view name);  // table1/2/3
std::vector<std::string> preset_methods(StudyKind kind, std::string_view name);  // all/table

// Seeds derived for replication `rep` of distribution `dist`.
std::uint64_t replication_seed(std::uint64_t seed, std::string_view dist, std::size_t rep);
std::uint64_t method_seed(std::uint64_t seed, std::string_view dist, std::size_t rep,
                          std::string_view method);

}  // namespace lancaster
