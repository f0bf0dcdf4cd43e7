#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "lancaster/sample.hpp"

namespace lancaster {

// Rank of each element as #{j : v_j <= v_i}; tied values share the largest rank.
using RankVector = std::vector<std::size_t>;

RankVector ranks(std::span<const double> values);

// Ranks 1..n from a stable ordering: ties are broken by position, so the
// result is always a permutation of 1..n.
RankVector ranks_by_position(std::span<const double> values);

bool has_ties(std::span<const double> values);

/// Van der Waerden scores a(j) = Phi^{-1}(j / (n + 1)) and their squares
/// b(j) = a(j)^2, j = 1..n, with means and (1/n) variances. Entries are
/// indexed by rank - 1.
struct ScoreSet {
    std::vector<double> a;
    std::vector<double> b;
    double a_bar = 0.0;
    double b_bar = 0.0;
    double s_a2 = 0.0;
    double s_b2 = 0.0;
};

ScoreSet vdw_scores(std::size_t n);

// Per-thread cache of vdw_scores(n); studies reuse one n across replications.
std::shared_ptr<const ScoreSet> cached_vdw_scores(std::size_t n);

enum class Component { First, Second };

struct LancasterEstimate {
    double rho1 = 0.0;
    double rho2 = 0.0;
    double value = 0.0;  // max(|rho1|, |rho2|)
    Component winner = Component::First;
    bool ties = false;   // ties present in either margin (rank version only)
};

// Builds an estimate from its components; |rho1| == |rho2| reports First.
LancasterEstimate make_estimate(double rho1, double rho2, bool ties = false);

// Rank-based Lancaster correlation from normal scores of the ranks.
// Throws SampleTooSmallError for n < 3.
LancasterEstimate lancaster_rank(const Sample& sample);

// Same estimator from precomputed rank vectors (1-based).
LancasterEstimate lancaster_rank_from_ranks(std::span<const std::size_t> x_ranks,
                                            std::span<const std::size_t> y_ranks,
                                            const ScoreSet& scores, bool ties = false);

// Moment-based Lancaster correlation: Pearson correlation of the data and of
// the squares of the empirically standardized data.
LancasterEstimate lancaster_linear(const Sample& sample);

double pearson(const Sample& sample);
double spearman(const Sample& sample);

// Energy-statistics distance correlation (V-statistic form), in [0, 1].
double distance_correlation(const Sample& sample);

// Chatterjee's xi; ties in xs are broken by a uniform shuffle seeded by `seed`.
double xi_coefficient(const Sample& sample, std::uint64_t seed = 0);

/// Empirical standardization (v - mean) / sd, with the 1/n standard deviation.
struct Standardized {
    std::vector<double> values;
    double mean = 0.0;
    double sd = 0.0;
};

// Throws DegenerateSampleError when the margin is constant.
Standardized standardize(std::span<const double> values);

enum class Coefficient { Pearson, Spearman, LancasterLinear, LancasterRank, DistanceCorrelation, Xi };

std::string_view coefficient_id(Coefficient c) noexcept;
// Throws ConfigError listing the valid ids.
Coefficient parse_coefficient(std::string_view id);
std::span<const Coefficient> all_coefficients() noexcept;

struct CoefficientValue {
    double value = 0.0;
    double rho1 = 0.0;  // components for the Lancaster coefficients, else == value
    double rho2 = 0.0;
    bool ties = false;
};

CoefficientValue evaluate_coefficient(Coefficient c, const Sample& sample, std::uint64_t seed = 0);

}  // namespace lancaster
