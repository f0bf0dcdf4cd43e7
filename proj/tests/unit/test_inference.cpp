#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "lancaster/error.hpp"
#include "lancaster/inference.hpp"
#include "lancaster/rng.hpp"
#include "lancaster/samplers.hpp"
#include "oracles.hpp"

using namespace lancaster;

namespace {

Sample bvn(double rho, std::size_t n, std::uint64_t seed) {
    return sample(DistributionSpec::bvn(rho), n, seed);
}

}  // namespace

TEST(Permutation, PValueRange) {
    const auto s = bvn(0.0, 40, 1);
    for (auto c : all_coefficients()) {
        const auto r = test_permutation(s, c, 99, 3);
        EXPECT_GE(r.p_value, 1.0 / 100);
        EXPECT_LE(r.p_value, 1.0);
        EXPECT_NEAR(r.p_value * 100, std::round(r.p_value * 100), 1e-9);
        EXPECT_EQ(r.n_permutations, 99u);
    }
}

TEST(Permutation, ThreadInvariant) {
    const auto s = bvn(0.2, 60, 2);
    for (auto c : all_coefficients()) {
        const auto a = test_permutation(s, c, 700, 9, 1);
        const auto b = test_permutation(s, c, 700, 9, 4);
        EXPECT_EQ(a.p_value, b.p_value);
        EXPECT_EQ(a.statistic, b.statistic);
    }
}

TEST(Permutation, IdenticalMarginsReject) {
    const auto base = bvn(0.0, 50, 4);
    std::vector<double> x(base.xs().begin(), base.xs().end());
    const Sample s(x, x);
    for (auto m : all_test_methods()) {
        const auto r = run_test(s, m, 2000, 5);
        EXPECT_LT(r.p_value, 0.001) << test_method_id(m);
    }
}

TEST(Permutation, StatisticMatchesOracle) {
    const auto s = bvn(0.4, 30, 6);
    std::vector<double> x(s.xs().begin(), s.xs().end()), y(s.ys().begin(), s.ys().end());
    std::vector<std::size_t> id(30);
    for (std::size_t i = 0; i < 30; ++i) id[i] = i;
    EXPECT_NEAR((*PermutationStatistic::prepare(Coefficient::LancasterRank, s))(id),
                oracle::lancaster_rank(x, y).value(), 1e-12);
    EXPECT_NEAR((*PermutationStatistic::prepare(Coefficient::LancasterLinear, s))(id),
                oracle::lancaster_linear(x, y).value(), 1e-12);
    EXPECT_NEAR((*PermutationStatistic::prepare(Coefficient::DistanceCorrelation, s))(id),
                oracle::dcor(x, y), 1e-10);
    EXPECT_NEAR((*PermutationStatistic::prepare(Coefficient::Pearson, s))(id),
                std::abs(oracle::pearson(x, y)), 1e-12);
}

TEST(Permutation, SmallSampleMatchesExhaustive) {
    const Sample s({0.3, -1.2, 0.8, 2.1, -0.4, 1.5}, {0.1, -0.9, 1.7, 1.1, 0.2, 0.9});
    std::vector<double> x(s.xs().begin(), s.xs().end()), y(s.ys().begin(), s.ys().end());
    const double exact = oracle::exhaustive_p_value(6, [&](const std::vector<std::size_t>& p) {
        std::vector<double> yp;
        for (auto i : p) yp.push_back(y[i]);
        return std::abs(oracle::pearson(x, yp));
    });
    EXPECT_NEAR(test_permutation(s, Coefficient::Pearson, 50000, 1).p_value, exact, 0.01);
}

TEST(RankAsymptotic, ClosedFormPValue) {
    const auto s = bvn(0.1, 80, 7);
    const auto r = test_rank_asymptotic(s);
    const double z = std::sqrt(80.0) * lancaster_rank(s).value;
    const double f = 2 * oracle::phi(z) - 1;
    EXPECT_NEAR(r.p_value, 1 - f * f, 1e-12);
    EXPECT_NEAR(max_abs_standard_sf(1.3), 1 - std::pow(2 * oracle::phi(1.3) - 1, 2), 1e-15);
    EXPECT_NEAR(max_abs_standard_sf(9.0), 4 * oracle::phi(-9.0), 1e-30);
}

TEST(RankAsymptotic, UniformUnderNull) {
    std::vector<double> p;
    for (std::uint64_t seed = 0; seed < 500; ++seed) p.push_back(test_rank_asymptotic(bvn(0.0, 200, 1000 + seed)).p_value);
    const double d = oracle::ks_statistic(p, [](double u) { return std::clamp(u, 0.0, 1.0); });
    EXPECT_LT(d, oracle::ks_critical(500, 0.01));
}

TEST(LinearAsymptotic, SymmetricMatchesTauModeForSymmetricMoments) {
    const auto s = bvn(0.0, 300, 8);
    const auto a = test_linear_asymptotic(s, TauMode::AssumeSymmetric);
    const auto b = test_linear_asymptotic(s, TauMode::EstimateTau);
    EXPECT_EQ(a.statistic, b.statistic);
    EXPECT_NEAR(a.p_value, b.p_value, 0.02);
}

TEST(Registry, RoundTrips) {
    for (auto m : all_test_methods()) EXPECT_EQ(parse_test_method(test_method_id(m)), m);
    for (auto m : all_ci_methods()) EXPECT_EQ(parse_ci_method(ci_method_id(m)), m);
    EXPECT_THROW(parse_test_method("nope"), ConfigError);
    EXPECT_THROW(parse_ci_method("nope"), ConfigError);
}

TEST(Interval, VarianceFloor) {
    const auto est = make_estimate(0.5, 0.1);
    const auto ci = interval_from_covariance(est, CovMatrix2{-1.0, 0.0, 0.3}, 100, 0.95, CiMethod::PlugIn);
    EXPECT_EQ(ci.cov.s11, kVarianceFloor);
    EXPECT_EQ(ci.cov.s22, 0.3);
    EXPECT_NEAR(ci.lower, 0.5 - oracle::phi_inv(0.975) * 1e-3 / 10, 1e-12);
}

TEST(Interval, UsesWinningComponentScale) {
    const auto est = make_estimate(0.2, -0.6);
    const auto ci = interval_from_covariance(est, CovMatrix2{1.0, 0.1, 4.0}, 100, 0.9, CiMethod::BootLinear);
    const double half = oracle::phi_inv(0.95) * 2.0 / 10.0;
    EXPECT_NEAR(ci.lower, 0.6 - half, 1e-12);
    EXPECT_NEAR(ci.upper, 0.6 + half, 1e-12);
}

TEST(Interval, Truncation) {
    const auto lo = interval_from_covariance(make_estimate(0.02, 0.01), CovMatrix2{1, 0, 1}, 50, 0.95,
                                             CiMethod::PlugIn);
    EXPECT_EQ(lo.lower, 0.0);
    EXPECT_TRUE(lo.lower_truncated);
    const auto hi = interval_from_covariance(make_estimate(0.99, 0.1), CovMatrix2{1, 0, 1}, 50, 0.95,
                                             CiMethod::PlugIn);
    EXPECT_EQ(hi.upper, 1.0);
    EXPECT_TRUE(hi.upper_truncated);
}

TEST(Interval, ConservativeLowerIsLower) {
    for (double r2 : {-0.35, 0.35}) {
        const auto est = make_estimate(0.4, r2);
        const CovMatrix2 cov{0.8, 0.2, 1.1};
        const auto a = interval_from_covariance(est, cov, 100, 0.95, CiMethod::BootLinear);
        const auto c = interval_from_covariance(est, cov, 100, 0.95, CiMethod::BootLinearConservative);
        EXPECT_LE(c.lower, a.lower);
        EXPECT_EQ(c.upper, a.upper);
    }
}

TEST(Interval, LevelDomain) {
    const auto s = bvn(0.3, 50, 1);
    EXPECT_THROW(confidence_interval(s, CiMethod::PlugIn, 1.0, 10, 1), DomainError);
    EXPECT_THROW(confidence_interval(s, CiMethod::PlugIn, 0.0, 10, 1), DomainError);
}

TEST(Bootstrap, DeterministicAndThreadInvariant) {
    const auto s = bvn(0.5, 80, 3);
    for (auto e : {Estimator::Rank, Estimator::Linear}) {
        const auto a = bootstrap_cov(s, e, 200, 17, 1);
        const auto b = bootstrap_cov(s, e, 200, 17, 3);
        EXPECT_EQ(a.cov.s11, b.cov.s11);
        EXPECT_EQ(a.cov.s12, b.cov.s12);
        EXPECT_EQ(a.cov.s22, b.cov.s22);
        EXPECT_EQ(a.used, 200u);
    }
}

TEST(Bootstrap, CloseToClosedFormUnderNormality) {
    const auto s = bvn(0.5, 2000, 4);
    const auto b = bootstrap_cov(s, Estimator::Linear, 500, 5);
    const double q = std::pow(0.75, 2);
    EXPECT_NEAR(b.cov.s11, q, 0.15 * q);
    EXPECT_NEAR(b.cov.s22, q * (3 * 0.0625 + 2.5 + 1), 0.2 * q * 3.6875);
}

TEST(ConfidenceInterval, PlugInUsesSigmaStar) {
    const auto s = bvn(0.6, 300, 9);
    const auto ci = confidence_interval(s, CiMethod::PlugIn, 0.95, 0, 1);
    const auto sig = sigma_star(s);
    EXPECT_NEAR(ci.cov.s11, sig.s11, 1e-12);
    EXPECT_NEAR(ci.estimate, lancaster_linear(s).value, 1e-15);
    EXPECT_TRUE(ci.contains(ci.estimate));
}
