#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lancaster/samplers.hpp"

namespace lancaster {

// Population values of the rank and the linear Lancaster correlation.
// A missing entry means the quantity is undefined for the distribution.
struct TruthValue {
    std::optional<double> rank;
    std::optional<double> linear;
    std::string source;  // "analytic" or "monte-carlo n=<n> seed=<seed>"

    bool operator==(const TruthValue&) const = default;
};

// Closed forms where known; either component may be missing, in which case
// the stored Monte Carlo value is used.
std::optional<TruthValue> analytic_truth(const DistributionSpec& spec);

// Evaluates both estimators on one sample of size n.
TruthValue monte_carlo_truth(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

// Distributions whose values are shipped in the data file.
std::vector<DistributionSpec> default_truth_distributions();

inline constexpr std::size_t kTruthSampleSize = 10'000'000;
inline constexpr std::uint64_t kTruthSeed = 20240101;

class TruthTable {
public:
    TruthTable() = default;

    // CSV with header distribution,rho_rank,rho_linear,source. Empty cells
    // mean "undefined". Throws ParseError on malformed content.
    static TruthTable load(const std::string& path);
    void save(const std::string& path) const;

    void set(const DistributionSpec& spec, TruthValue value);
    // Closed-form components win over stored ones.
    std::optional<TruthValue> find(const DistributionSpec& spec) const;
    const std::map<std::string, TruthValue>& entries() const noexcept { return entries_; }

private:
    std::map<std::string, TruthValue> entries_;
};

// Resolution order: $LANCASTER_DATA_DIR, the source tree's data directory,
// the installed data directory.
std::string default_truth_path();

}  // namespace lancaster
