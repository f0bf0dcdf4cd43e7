#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include "lancaster/asymptotics.hpp"
#include "lancaster/estimators.hpp"
#include "lancaster/sample.hpp"

namespace lancaster {

// ---------------------------------------------------------------------------
// Independence tests
// ---------------------------------------------------------------------------

enum class TestMethod {
    RankAsymptotic,       // sqrt(n) rank Lancaster vs F(z) = (2 Phi(z) - 1)^2
    RankPermutation,
    LinearPermutation,
    LinearAsymptoticSym,  // moment version, vanishing third moments assumed
    LinearAsymptoticTau,  // moment version, tau estimated from the sample
    PearsonPermutation,
    SpearmanPermutation,
    DcorPermutation,
    XiPermutation,
};

std::string_view test_method_id(TestMethod m) noexcept;
TestMethod parse_test_method(std::string_view id);  // ConfigError lists valid ids
std::span<const TestMethod> all_test_methods() noexcept;
bool is_permutation_method(TestMethod m) noexcept;
// The coefficient a test is built on.
Coefficient test_coefficient(TestMethod m) noexcept;

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    TestMethod method = TestMethod::RankAsymptotic;
    std::optional<std::size_t> n_permutations;
};

inline constexpr std::size_t kDefaultPermutations = 1000;
inline constexpr std::size_t kDefaultBootstrap = 500;

/// A coefficient prepared once per sample and then evaluated on re-pairings
/// ys[perm[i]] in O(n) (O(n^2) for distance correlation). Pearson and
/// Spearman are two-sided (absolute value); the others are used as is.
class PermutationStatistic {
public:
    virtual ~PermutationStatistic() = default;
    virtual double operator()(std::span<const std::size_t> perm) const = 0;

    // `seed` only feeds the tie-breaking of xi.
    static std::unique_ptr<PermutationStatistic> prepare(Coefficient c, const Sample& sample,
                                                         std::uint64_t seed = 0);
};

TestResult test_rank_asymptotic(const Sample& sample);

enum class TauMode { AssumeSymmetric, EstimateTau };
TestResult test_linear_asymptotic(const Sample& sample, TauMode mode);

// Monte Carlo permutation test with the add-one p-value
// (1 + #{b : T_b >= T_obs}) / (B + 1). Permutation b draws from
// Rng::stream(seed, {b}), so the result does not depend on `threads`.
TestResult test_permutation(const Sample& sample, Coefficient statistic, std::size_t permutations,
                            std::uint64_t seed, std::size_t threads = 1);

// Dispatches on method; `permutations` is ignored by asymptotic tests.
TestResult run_test(const Sample& sample, TestMethod method, std::size_t permutations,
                    std::uint64_t seed, std::size_t threads = 1);

// Upper tail of max(|U|, |V|) for the standard case, 1 - (2 Phi(z) - 1)^2,
// evaluated as 4 Q (1 - Q) with Q = 1 - Phi(z).
double max_abs_standard_sf(double z) noexcept;

// ---------------------------------------------------------------------------
// Covariance bootstrap and confidence intervals
// ---------------------------------------------------------------------------

enum class Estimator { Rank, Linear };

struct BootstrapCov {
    CovMatrix2 cov;
    std::size_t used = 0;     // resamples that entered the covariance
    std::size_t skipped = 0;  // resamples abandoned after repeated degeneracy
};

// n times the sample covariance of (rho1, rho2) over B resamples drawn with
// replacement. Rank resamples are ranked with ties broken by position, so
// duplicated pairs receive adjacent ranks in both margins. Degenerate linear
// resamples are redrawn up to 10 times, then skipped.
BootstrapCov bootstrap_cov(const Sample& sample, Estimator estimator, std::size_t resamples,
                           std::uint64_t seed, std::size_t threads = 1);

enum class CiMethod {
    PlugIn,
    PlugInConservative,
    BootLinear,
    BootLinearConservative,
    BootRank,
    BootRankConservative,
};

std::string_view ci_method_id(CiMethod m) noexcept;
CiMethod parse_ci_method(std::string_view id);
std::span<const CiMethod> all_ci_methods() noexcept;
bool is_conservative(CiMethod m) noexcept;
Estimator ci_estimator(CiMethod m) noexcept;

struct ConfidenceInterval {
    double lower = 0.0;
    double upper = 1.0;
    double level = 0.95;
    CiMethod method = CiMethod::PlugIn;
    bool lower_truncated = false;  // clamped at 0
    bool upper_truncated = false;  // clamped at 1
    double estimate = 0.0;
    CovMatrix2 cov;                // after the small-variance substitution

    bool contains(double value) const noexcept { return lower <= value && value <= upper; }
    double length() const noexcept { return upper - lower; }
};

// Substitute for non-positive diagonal covariance estimates.
inline constexpr double kVarianceFloor = 1e-6;

// Interval construction from an estimate and a covariance estimate.
ConfidenceInterval interval_from_covariance(const LancasterEstimate& estimate, CovMatrix2 cov,
                                            std::size_t n, double level, CiMethod method);

ConfidenceInterval confidence_interval(const Sample& sample, CiMethod method, double level,
                                       std::size_t bootstrap_resamples, std::uint64_t seed,
                                       std::size_t threads = 1);

}  // namespace lancaster
