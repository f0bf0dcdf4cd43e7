#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "lancaster/error.hpp"
#include "lancaster/estimators.hpp"
#include "lancaster/samplers.hpp"
#include "oracles.hpp"

using namespace lancaster;

namespace {

std::vector<double> vec(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

TEST(Samplers, NormalMixturePearson) {
    EXPECT_NEAR(pearson(sample(parse_distribution("NM1"), 1000000, 1)), 0.0, 0.005);
    EXPECT_NEAR(pearson(sample(parse_distribution("NM2"), 1000000, 2)), 1.0 / 6.0, 0.005);
}

TEST(Samplers, NormalMixtureMargins) {
    const auto s = sample(parse_distribution("NM3"), 10000, 3);
    EXPECT_LT(oracle::ks_statistic(vec(s.xs()), oracle::phi), oracle::ks_critical(10000, 0.01));
    EXPECT_LT(oracle::ks_statistic(vec(s.ys()), oracle::phi), oracle::ks_critical(10000, 0.01));
}

TEST(Samplers, BivariateTSpearman) {
    EXPECT_NEAR(spearman(sample(DistributionSpec::bvt(5, 0.2), 1000000, 4)), 0.186, 0.005);
}

TEST(Samplers, UnifDiscArea) {
    const auto s = sample(parse_distribution("UnifDisc"), 100000, 5);
    for (double r : {0.3, 0.7}) {
        std::size_t in = 0;
        for (std::size_t i = 0; i < s.size(); ++i) in += s.xs()[i] * s.xs()[i] + s.ys()[i] * s.ys()[i] <= r * r;
        EXPECT_NEAR(double(in) / s.size(), r * r, 0.01);
    }
}

TEST(Samplers, SupportOfUniformShapes) {
    const auto rh = sample(parse_distribution("UnifRhomb"), 5000, 6);
    const auto tr = sample(parse_distribution("UnifTriangle"), 5000, 7);
    for (std::size_t i = 0; i < 5000; ++i) {
        EXPECT_LE(std::abs(rh.xs()[i]) + std::abs(rh.ys()[i]), 1.0);
        EXPECT_GE(tr.xs()[i], 0.0);
        EXPECT_GE(tr.ys()[i], 0.0);
        EXPECT_LE(tr.xs()[i] + tr.ys()[i], 1.0);
    }
}

TEST(Samplers, RegQuadStructure) {
    const auto s = sample(parse_distribution("RegQuad1"), 20000, 8);
    double resid = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_LE(std::abs(s.xs()[i]), 1.0);
        const double e = s.ys()[i] - s.xs()[i] * s.xs()[i];
        resid += e * e;
    }
    EXPECT_NEAR(std::sqrt(resid / s.size()), 0.15, 0.005);
    EXPECT_NEAR(pearson(s), 0.0, 0.03);
}

TEST(Samplers, GarchVolatilityClustering) {
    const auto s = sample(parse_distribution("GARCH(2,1)"), 20000, 9);
    // Pairs are consecutive returns.
    for (std::size_t i = 1; i < 100; ++i) EXPECT_EQ(s.ys()[i], s.xs()[i - 1]);
    EXPECT_NEAR(spearman(s), 0.0, 0.04);
    std::vector<double> ax, ay;
    for (std::size_t i = 0; i < s.size(); ++i) {
        ax.push_back(std::abs(s.xs()[i]));
        ay.push_back(std::abs(s.ys()[i]));
    }
    EXPECT_GT(spearman(Sample(ax, ay)), 0.2);
}

TEST(Samplers, Reproducible) {
    for (const char* d : {"BVN(0.3)", "NM1", "MN", "BVT2(0.2)", "BVC", "UnifDisc", "GARCH", "RegTrig2"}) {
        const auto spec = parse_distribution(d);
        const auto a = sample(spec, 200, 42), b = sample(spec, 200, 42), c = sample(spec, 200, 43);
        EXPECT_EQ(vec(a.xs()), vec(b.xs())) << d;
        EXPECT_EQ(vec(a.ys()), vec(b.ys())) << d;
        EXPECT_NE(vec(a.xs()), vec(c.xs())) << d;
    }
}

TEST(Samplers, NameRoundTrip) {
    for (const char* d : {"BVN(0)", "BVN(-0.5)", "NM1", "NM2", "NM3", "NM(0.7)", "MN", "BVT5(0)", "BVT1(0.2)",
                          "BVT(3.5,0.1)", "UnifDisc", "UnifRhomb", "UnifTriangle", "GARCH(2,1)", "RegLin1",
                          "RegLin2", "RegQuad1", "RegQuad2", "RegTrig1", "RegTrig2", "RegLin(0.7)"}) {
        const auto spec = parse_distribution(d);
        const auto again = parse_distribution(distribution_name(spec));
        EXPECT_EQ(distribution_name(again), distribution_name(spec)) << d;
        EXPECT_EQ(again.kind, spec.kind);
    }
    EXPECT_EQ(distribution_name(parse_distribution("mn1")), "NM1");
    EXPECT_EQ(distribution_name(parse_distribution("BVC")), "BVT1(0)");
    EXPECT_EQ(distribution_name(parse_distribution("unifdrhomb")), "UnifRhomb");
    EXPECT_EQ(distribution_name(parse_distribution("bvn(0.5)")), "BVN(0.5)");
}

TEST(Samplers, InvalidSpecs) {
    for (const char* d : {"", "BVN", "BVN(1)", "BVN(x)", "NM(0)", "NM(1.5)", "BVT(0,0.2)", "RegLin(-1)",
                          "GARCH(0.1,0.6,0.3,0.2)", "Foo(1)", "BVN(0.1"}) {
        EXPECT_THROW(parse_distribution(d), ConfigError) << d;
    }
}

TEST(Samplers, FiniteMoments) {
    EXPECT_TRUE(has_finite_moments(DistributionSpec::bvt(5, 0), 4));
    EXPECT_FALSE(has_finite_moments(DistributionSpec::bvt(5, 0), 8));
    EXPECT_FALSE(has_finite_moments(DistributionSpec::bvt(1, 0), 1));
    EXPECT_TRUE(has_finite_moments(DistributionSpec::bvn(0.2), 8));
}
