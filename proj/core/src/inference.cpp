#include "lancaster/inference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "lancaster/error.hpp"
#include "lancaster/parallel.hpp"
#include "lancaster/rng.hpp"
#include "lancaster/special_functions.hpp"

namespace lancaster {

namespace {

constexpr std::array<TestMethod, 9> kTestMethods = {
    TestMethod::RankAsymptotic,      TestMethod::RankPermutation,
    TestMethod::LinearPermutation,   TestMethod::LinearAsymptoticSym,
    TestMethod::LinearAsymptoticTau, TestMethod::PearsonPermutation,
    TestMethod::SpearmanPermutation, TestMethod::DcorPermutation,
    TestMethod::XiPermutation};

constexpr std::array<CiMethod, 6> kCiMethods = {
    CiMethod::PlugIn,   CiMethod::PlugInConservative, CiMethod::BootLinear,
    CiMethod::BootLinearConservative, CiMethod::BootRank, CiMethod::BootRankConservative};

template <class Enum, std::size_t N, class IdFn>
Enum parse_enum(std::string_view id, const std::array<Enum, N>& all, IdFn name, const char* what) {
    for (const auto m : all) {
        if (name(m) == id) return m;
    }
    std::string valid;
    for (const auto m : all) {
        if (!valid.empty()) valid += ", ";
        valid += name(m);
    }
    throw ConfigError("unknown " + std::string(what) + " '" + std::string(id) +
                      "'; valid ids: " + valid);
}

// ---------------------------------------------------------------------------
// Prepared permutation statistics
// ---------------------------------------------------------------------------

class CorrelationStatistic final : public PermutationStatistic {
public:
    CorrelationStatistic(std::span<const double> x, std::span<const double> y)
        : x_(standardize(x).values), y_(standardize(y).values) {}

    double operator()(std::span<const std::size_t> perm) const override {
        double s = 0.0;
        for (std::size_t i = 0; i < x_.size(); ++i) s += x_[i] * y_[perm[i]];
        return std::min(1.0, std::abs(s / static_cast<double>(x_.size())));
    }

private:
    std::vector<double> x_, y_;
};

std::vector<double> as_doubles(const RankVector& r) { return {r.begin(), r.end()}; }

class LinearLancasterStatistic final : public PermutationStatistic {
public:
    explicit LinearLancasterStatistic(const Sample& sample) {
        const auto x = standardize(sample.xs());
        const auto y = standardize(sample.ys());
        const std::size_t n = sample.size();
        x_ = x.values;
        y_ = y.values;
        x2_.resize(n);
        y2_.resize(n);
        double kx = 0.0, ky = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x2_[i] = x_[i] * x_[i];
            y2_[i] = y_[i] * y_[i];
            kx += x2_[i] * x2_[i];
            ky += y2_[i] * y2_[i];
        }
        kx = kx / static_cast<double>(n) - 1.0;
        ky = ky / static_cast<double>(n) - 1.0;
        if (!(kx > 0.0) || !(ky > 0.0)) {
            throw DegenerateKurtosisError("standardized fourth moment <= 1");
        }
        norm_ = std::sqrt(kx * ky);
    }

    double operator()(std::span<const std::size_t> perm) const override {
        double m11 = 0.0, m22 = 0.0;
        for (std::size_t i = 0; i < x_.size(); ++i) {
            const std::size_t j = perm[i];
            m11 += x_[i] * y_[j];
            m22 += x2_[i] * y2_[j];
        }
        const auto n = static_cast<double>(x_.size());
        const double r1 = std::min(1.0, std::abs(m11 / n));
        const double r2 = std::min(1.0, std::abs((m22 / n - 1.0) / norm_));
        return std::max(r1, r2);
    }

private:
    std::vector<double> x_, y_, x2_, y2_;
    double norm_ = 1.0;
};

class RankLancasterStatistic final : public PermutationStatistic {
public:
    explicit RankLancasterStatistic(const Sample& sample) {
        if (sample.size() < 3) throw SampleTooSmallError("rank Lancaster needs n >= 3");
        const auto scores = cached_vdw_scores(sample.size());
        const auto q = ranks(sample.xs());
        const auto r = ranks(sample.ys());
        const std::size_t n = sample.size();
        ax_.resize(n);
        ay_.resize(n);
        bx_.resize(n);
        by_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            ax_[i] = scores->a[q[i] - 1];
            ay_[i] = scores->a[r[i] - 1];
            bx_[i] = scores->b[q[i] - 1] - scores->b_bar;
            by_[i] = scores->b[r[i] - 1] - scores->b_bar;
        }
        norm1_ = static_cast<double>(n) * scores->s_a2;
        norm2_ = static_cast<double>(n) * scores->s_b2;
    }

    double operator()(std::span<const std::size_t> perm) const override {
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t i = 0; i < ax_.size(); ++i) {
            const std::size_t j = perm[i];
            s1 += ax_[i] * ay_[j];
            s2 += bx_[i] * by_[j];
        }
        return std::min(1.0, std::max(std::abs(s1 / norm1_), std::abs(s2 / norm2_)));
    }

private:
    std::vector<double> ax_, ay_, bx_, by_;
    double norm1_ = 1.0, norm2_ = 1.0;
};

class DcorStatistic final : public PermutationStatistic {
public:
    explicit DcorStatistic(const Sample& sample) : n_(sample.size()) {
        a_ = centered_distances(sample.xs());
        b_ = centered_distances(sample.ys());
        const auto nn = static_cast<double>(n_);
        double vx = 0.0, vy = 0.0;
        for (std::size_t k = 0; k < a_.size(); ++k) {
            vx += a_[k] * a_[k];
            vy += b_[k] * b_[k];
        }
        vx /= nn * nn;
        vy /= nn * nn;
        norm_ = std::sqrt(vx * vy);
    }

    double operator()(std::span<const std::size_t> perm) const override {
        if (!(norm_ > 0.0)) return 0.0;
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const double* arow = &a_[i * n_];
            const double* brow = &b_[perm[i] * n_];
            double row = 0.0;
            for (std::size_t j = 0; j < n_; ++j) row += arow[j] * brow[perm[j]];
            s += row;
        }
        const auto nn = static_cast<double>(n_);
        const double dcov2 = std::max(0.0, s / (nn * nn));
        return std::min(1.0, std::sqrt(dcov2 / norm_));
    }

private:
    static std::vector<double> centered_distances(std::span<const double> v) {
        const std::size_t n = v.size();
        const auto nn = static_cast<double>(n);
        std::vector<double> d(n * n);
        std::vector<double> row_mean(n, 0.0);
        double grand = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                d[i * n + j] = std::abs(v[i] - v[j]);
                row_mean[i] += d[i * n + j];
            }
        for (auto& m : row_mean) {
            grand += m;
            m /= nn;
        }
        grand /= nn * nn;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i * n + j] += grand - row_mean[i] - row_mean[j];
        return d;
    }

    std::size_t n_;
    std::vector<double> a_, b_;
    double norm_ = 0.0;
};

class XiStatistic final : public PermutationStatistic {
public:
    XiStatistic(const Sample& sample, std::uint64_t seed) {
        const auto xs = sample.xs();
        const std::size_t n = sample.size();
        Rng rng(seed);
        std::vector<std::uint64_t> jitter(n);
        for (auto& j : jitter) j = rng.next();
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::sort(order_.begin(), order_.end(), [&](std::size_t l, std::size_t r) {
            if (xs[l] != xs[r]) return xs[l] < xs[r];
            return jitter[l] < jitter[r];
        });
        y_ranks_ = as_doubles(ranks(sample.ys()));
    }

    double operator()(std::span<const std::size_t> perm) const override {
        double total = 0.0;
        for (std::size_t k = 0; k + 1 < order_.size(); ++k) {
            total += std::abs(y_ranks_[perm[order_[k + 1]]] - y_ranks_[perm[order_[k]]]);
        }
        const auto nn = static_cast<double>(order_.size());
        return 1.0 - 3.0 * total / (nn * nn - 1.0);
    }

private:
    std::vector<std::size_t> order_;
    std::vector<double> y_ranks_;
};

class SpearmanStatistic final : public PermutationStatistic {
public:
    explicit SpearmanStatistic(const Sample& sample)
        : inner_(as_doubles(ranks(sample.xs())), as_doubles(ranks(sample.ys()))) {}

    double operator()(std::span<const std::size_t> perm) const override { return inner_(perm); }

private:
    CorrelationStatistic inner_;
};

}  // namespace

std::unique_ptr<PermutationStatistic> PermutationStatistic::prepare(Coefficient c,
                                                                    const Sample& sample,
                                                                    std::uint64_t seed) {
    switch (c) {
        case Coefficient::Pearson:
            if (sample.size() < 3) throw SampleTooSmallError("Pearson needs n >= 3");
            return std::make_unique<CorrelationStatistic>(sample.xs(), sample.ys());
        case Coefficient::Spearman:
            if (sample.size() < 3) throw SampleTooSmallError("Spearman needs n >= 3");
            return std::make_unique<SpearmanStatistic>(sample);
        case Coefficient::LancasterLinear:
            if (sample.size() < 3) throw SampleTooSmallError("linear Lancaster needs n >= 3");
            return std::make_unique<LinearLancasterStatistic>(sample);
        case Coefficient::LancasterRank: return std::make_unique<RankLancasterStatistic>(sample);
        case Coefficient::DistanceCorrelation: return std::make_unique<DcorStatistic>(sample);
        case Coefficient::Xi: return std::make_unique<XiStatistic>(sample, seed);
    }
    throw ConfigError("unsupported permutation statistic");
}

// ---------------------------------------------------------------------------

std::string_view test_method_id(TestMethod m) noexcept {
    switch (m) {
        case TestMethod::RankAsymptotic: return "rank_asymptotic";
        case TestMethod::RankPermutation: return "rank_permutation";
        case TestMethod::LinearPermutation: return "linear_permutation";
        case TestMethod::LinearAsymptoticSym: return "linear_asymptotic_sym";
        case TestMethod::LinearAsymptoticTau: return "linear_asymptotic_tau";
        case TestMethod::PearsonPermutation: return "pearson_permutation";
        case TestMethod::SpearmanPermutation: return "spearman_permutation";
        case TestMethod::DcorPermutation: return "dcor_permutation";
        case TestMethod::XiPermutation: return "xi_permutation";
    }
    return "unknown";
}

TestMethod parse_test_method(std::string_view id) {
    return parse_enum(id, kTestMethods, test_method_id, "test method");
}

std::span<const TestMethod> all_test_methods() noexcept { return kTestMethods; }

bool is_permutation_method(TestMethod m) noexcept {
    switch (m) {
        case TestMethod::RankAsymptotic:
        case TestMethod::LinearAsymptoticSym:
        case TestMethod::LinearAsymptoticTau: return false;
        default: return true;
    }
}

Coefficient test_coefficient(TestMethod m) noexcept {
    switch (m) {
        case TestMethod::RankAsymptotic:
        case TestMethod::RankPermutation: return Coefficient::LancasterRank;
        case TestMethod::LinearPermutation:
        case TestMethod::LinearAsymptoticSym:
        case TestMethod::LinearAsymptoticTau: return Coefficient::LancasterLinear;
        case TestMethod::PearsonPermutation: return Coefficient::Pearson;
        case TestMethod::SpearmanPermutation: return Coefficient::Spearman;
        case TestMethod::DcorPermutation: return Coefficient::DistanceCorrelation;
        case TestMethod::XiPermutation: return Coefficient::Xi;
    }
    return Coefficient::LancasterRank;
}

double max_abs_standard_sf(double z) noexcept {
    if (z <= 0.0) return 1.0;
    const double q = normal_sf(z);
    return std::clamp(4.0 * q * (1.0 - q), 0.0, 1.0);
}

TestResult test_rank_asymptotic(const Sample& sample) {
    const auto estimate = lancaster_rank(sample);
    const double statistic = std::sqrt(static_cast<double>(sample.size())) * estimate.value;
    return {statistic, max_abs_standard_sf(statistic), TestMethod::RankAsymptotic, std::nullopt};
}

TestResult test_linear_asymptotic(const Sample& sample, TauMode mode) {
    if (sample.size() < 12) {
        throw SampleTooSmallError("asymptotic moment test needs at least 12 observations");
    }
    const auto estimate = lancaster_linear(sample);
    const double statistic = std::sqrt(static_cast<double>(sample.size())) * estimate.value;
    if (mode == TauMode::AssumeSymmetric) {
        return {statistic, max_abs_standard_sf(statistic), TestMethod::LinearAsymptoticSym,
                std::nullopt};
    }
    const double tau = sigma_star_independence(sample).s12;
    double p;
    if (tau == 0.0) {
        p = max_abs_standard_sf(statistic);
    } else {
        const LimitLaw law{LimitKind::MaxAbsPair, 1.0, 1.0, std::clamp(tau, -1.0, 1.0)};
        p = std::clamp(1.0 - max_abs_cdf(statistic, law), 0.0, 1.0);
    }
    return {statistic, p, TestMethod::LinearAsymptoticTau, std::nullopt};
}

TestResult test_permutation(const Sample& sample, Coefficient statistic, std::size_t permutations,
                            std::uint64_t seed, std::size_t threads) {
    if (permutations < 1) throw DomainError("permutation test needs at least one permutation");
    const auto stat = PermutationStatistic::prepare(statistic, sample, seed);
    const std::size_t n = sample.size();
    std::vector<std::size_t> identity(n);
    std::iota(identity.begin(), identity.end(), std::size_t{0});
    const double observed = (*stat)(identity);
    // Values equal to the observed one up to rounding count as "at least as extreme".
    const double threshold = observed - 1e-12 * std::max(1.0, std::abs(observed));

    constexpr std::size_t kChunk = 256;
    const std::size_t chunks = (permutations + kChunk - 1) / kChunk;
    std::vector<std::size_t> hits(chunks, 0);
    parallel_for(
        chunks,
        [&](std::size_t c) {
            std::vector<std::size_t> perm(n);
            const std::size_t end = std::min(permutations, (c + 1) * kChunk);
            std::size_t count = 0;
            for (std::size_t b = c * kChunk; b < end; ++b) {
                auto rng = Rng::stream(seed, {b});
                std::iota(perm.begin(), perm.end(), std::size_t{0});
                rng.shuffle(std::span<std::size_t>(perm));
                if ((*stat)(perm) >= threshold) ++count;
            }
            hits[c] = count;
        },
        threads);
    const std::size_t extreme = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
    const double p = static_cast<double>(1 + extreme) / static_cast<double>(permutations + 1);

    TestMethod method = TestMethod::RankPermutation;
    switch (statistic) {
        case Coefficient::Pearson: method = TestMethod::PearsonPermutation; break;
        case Coefficient::Spearman: method = TestMethod::SpearmanPermutation; break;
        case Coefficient::LancasterLinear: method = TestMethod::LinearPermutation; break;
        case Coefficient::LancasterRank: method = TestMethod::RankPermutation; break;
        case Coefficient::DistanceCorrelation: method = TestMethod::DcorPermutation; break;
        case Coefficient::Xi: method = TestMethod::XiPermutation; break;
    }
    return {observed, p, method, permutations};
}

TestResult run_test(const Sample& sample, TestMethod method, std::size_t permutations,
                    std::uint64_t seed, std::size_t threads) {
    switch (method) {
        case TestMethod::RankAsymptotic: return test_rank_asymptotic(sample);
        case TestMethod::LinearAsymptoticSym:
            return test_linear_asymptotic(sample, TauMode::AssumeSymmetric);
        case TestMethod::LinearAsymptoticTau:
            return test_linear_asymptotic(sample, TauMode::EstimateTau);
        default:
            return test_permutation(sample, test_coefficient(method), permutations, seed, threads);
    }
}

// ---------------------------------------------------------------------------
// Bootstrap and intervals
// ---------------------------------------------------------------------------

BootstrapCov bootstrap_cov(const Sample& sample, Estimator estimator, std::size_t resamples,
                           std::uint64_t seed, std::size_t threads) {
    if (resamples < 2) throw DomainError("bootstrap needs at least 2 resamples");
    const std::size_t n = sample.size();
    if (n < 3) throw SampleTooSmallError("bootstrap needs n >= 3");
    constexpr std::size_t kMaxRetries = 10;
    const auto xs = sample.xs();
    const auto ys = sample.ys();
    const auto scores = cached_vdw_scores(n);

    struct Draw {
        double rho1 = 0.0, rho2 = 0.0;
        bool ok = false;
    };
    std::vector<Draw> draws(resamples);
    parallel_for(
        resamples,
        [&](std::size_t b) {
            std::vector<double> bx(n), by(n);
            for (std::size_t attempt = 0; attempt <= kMaxRetries; ++attempt) {
                auto rng = attempt == 0 ? Rng::stream(seed, {b}) : Rng::stream(seed, {b, attempt});
                for (std::size_t i = 0; i < n; ++i) {
                    const auto k = static_cast<std::size_t>(rng.uniform_index(n));
                    bx[i] = xs[k];
                    by[i] = ys[k];
                }
                if (estimator == Estimator::Rank) {
                    const auto q = ranks_by_position(bx);
                    const auto r = ranks_by_position(by);
                    const auto e = lancaster_rank_from_ranks(q, r, *scores);
                    draws[b] = {e.rho1, e.rho2, true};
                    return;
                }
                try {
                    const auto e = lancaster_linear(Sample(bx, by));
                    draws[b] = {e.rho1, e.rho2, true};
                    return;
                } catch (const DomainError&) {
                    // degenerate resample: redraw
                }
            }
        },
        threads);

    double m1 = 0.0, m2 = 0.0;
    std::size_t used = 0;
    for (const auto& d : draws) {
        if (!d.ok) continue;
        m1 += d.rho1;
        m2 += d.rho2;
        ++used;
    }
    BootstrapCov out;
    out.used = used;
    out.skipped = resamples - used;
    if (used < 2) throw DomainError("bootstrap produced fewer than 2 usable resamples");
    m1 /= static_cast<double>(used);
    m2 /= static_cast<double>(used);
    double c11 = 0.0, c12 = 0.0, c22 = 0.0;
    for (const auto& d : draws) {
        if (!d.ok) continue;
        c11 += (d.rho1 - m1) * (d.rho1 - m1);
        c12 += (d.rho1 - m1) * (d.rho2 - m2);
        c22 += (d.rho2 - m2) * (d.rho2 - m2);
    }
    const double scale = static_cast<double>(n) / static_cast<double>(used - 1);
    out.cov = {c11 * scale, c12 * scale, c22 * scale};
    return out;
}

std::string_view ci_method_id(CiMethod m) noexcept {
    switch (m) {
        case CiMethod::PlugIn: return "plugin";
        case CiMethod::PlugInConservative: return "plugin_conservative";
        case CiMethod::BootLinear: return "boot_linear";
        case CiMethod::BootLinearConservative: return "boot_linear_conservative";
        case CiMethod::BootRank: return "boot_rank";
        case CiMethod::BootRankConservative: return "boot_rank_conservative";
    }
    return "unknown";
}

CiMethod parse_ci_method(std::string_view id) {
    return parse_enum(id, kCiMethods, ci_method_id, "interval method");
}

std::span<const CiMethod> all_ci_methods() noexcept { return kCiMethods; }

bool is_conservative(CiMethod m) noexcept {
    return m == CiMethod::PlugInConservative || m == CiMethod::BootLinearConservative ||
           m == CiMethod::BootRankConservative;
}

Estimator ci_estimator(CiMethod m) noexcept {
    return (m == CiMethod::BootRank || m == CiMethod::BootRankConservative) ? Estimator::Rank
                                                                            : Estimator::Linear;
}

ConfidenceInterval interval_from_covariance(const LancasterEstimate& estimate, CovMatrix2 cov,
                                            std::size_t n, double level, CiMethod method) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
    if (!std::isfinite(cov.s11) || !std::isfinite(cov.s12) || !std::isfinite(cov.s22)) {
        throw DomainError("covariance estimate is not finite");
    }
    if (cov.s11 <= 0.0) {
        cov.s11 = kVarianceFloor;
        cov.s12 = 0.0;
    }
    if (cov.s22 <= 0.0) {
        cov.s22 = kVarianceFloor;
        cov.s12 = 0.0;
    }
    const double alpha = 1.0 - level;
    const double root_n = std::sqrt(static_cast<double>(n));
    const double z = normal_quantile(1.0 - alpha / 2.0);
    const double s = std::abs(estimate.rho1) > std::abs(estimate.rho2) ? std::sqrt(cov.s11)
                                                                        : std::sqrt(cov.s22);
    const double rho = estimate.value;

    double lower = rho - z * s / root_n;
    const double upper = rho + z * s / root_n;
    if (is_conservative(method)) {
        const double s1 = std::sqrt(cov.s11);
        const double s2 = std::sqrt(cov.s22);
        const double tau = std::clamp(cov.s12 / (s1 * s2), -1.0 + 1e-12, 1.0 - 1e-12);
        const LimitKind kind =
            estimate.rho1 * estimate.rho2 >= 0.0 ? LimitKind::MaxPair : LimitKind::MaxNegPair;
        const double q = limit_quantile(1.0 - alpha / 2.0, LimitLaw{kind, s1, s2, tau});
        lower = rho - q / root_n;
    }

    ConfidenceInterval ci;
    ci.level = level;
    ci.method = method;
    ci.estimate = rho;
    ci.cov = cov;
    ci.lower_truncated = lower < 0.0;
    ci.upper_truncated = upper > 1.0;
    ci.lower = std::max(lower, 0.0);
    ci.upper = std::min(upper, 1.0);
    return ci;
}

ConfidenceInterval confidence_interval(const Sample& sample, CiMethod method, double level,
                                       std::size_t bootstrap_resamples, std::uint64_t seed,
                                       std::size_t threads) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("confidence level must lie in (0, 1)");
    const Estimator estimator = ci_estimator(method);
    const LancasterEstimate estimate =
        estimator == Estimator::Rank ? lancaster_rank(sample) : lancaster_linear(sample);
    CovMatrix2 cov;
    if (method == CiMethod::PlugIn || method == CiMethod::PlugInConservative) {
        cov = sigma_star(sample);
    } else {
        cov = bootstrap_cov(sample, estimator, bootstrap_resamples, seed, threads).cov;
    }
    return interval_from_covariance(estimate, cov, sample.size(), level, method);
}

}  // namespace lancaster
