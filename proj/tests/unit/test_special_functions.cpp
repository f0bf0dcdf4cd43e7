#include <cmath>
#include <limits>

#include <boost/math/distributions/skew_normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/owens_t.hpp>
#include <gtest/gtest.h>

#include "lancaster/error.hpp"
#include "lancaster/special_functions.hpp"
#include "oracles.hpp"

using namespace lancaster;

TEST(NormalCdf, MatchesBoost) {
    for (double z = -38.0; z <= 9.0; z += 0.125) {
        const double expect = oracle::phi(z);
        EXPECT_NEAR(normal_cdf(z), expect, 1e-15 + 1e-13 * expect) << z;
        const double upper = oracle::phi(-z);
        EXPECT_NEAR(normal_sf(z), upper, 1e-15 + 1e-13 * upper) << z;
    }
}

TEST(NormalCdf, Infinities) {
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_EQ(normal_cdf(inf), 1.0);
    EXPECT_EQ(normal_cdf(-inf), 0.0);
    EXPECT_EQ(normal_sf(inf), 0.0);
}

TEST(NormalPdf, Value) {
    EXPECT_NEAR(normal_pdf(0.0), kInvSqrt2Pi, 1e-16);
    EXPECT_NEAR(normal_pdf(1.5), kInvSqrt2Pi * std::exp(-1.125), 1e-16);
}

TEST(NormalQuantile, MatchesBoost) {
    for (double p : {1e-300, 1e-100, 1e-20, 1e-8, 1e-3, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.97575, 0.999,
                     1 - 1e-10}) {
        const double expect = oracle::phi_inv(p);
        EXPECT_NEAR(normal_quantile(p), expect, 1e-13 * std::max(1.0, std::abs(expect))) << p;
    }
}

TEST(NormalQuantile, RoundTrip) {
    for (int j = 1; j < 1000; ++j) {
        const double p = j / 1000.0;
        EXPECT_NEAR(normal_cdf(normal_quantile(p)), p, 1e-15);
    }
}

TEST(NormalQuantile, DomainErrors) {
    EXPECT_THROW(normal_quantile(0.0), DomainError);
    EXPECT_THROW(normal_quantile(1.0), DomainError);
    EXPECT_THROW(normal_quantile(-0.5), DomainError);
    EXPECT_THROW(normal_quantile(std::nan("")), DomainError);
}

TEST(OwensT, MatchesBoost) {
    for (double h : {-5.0, -1.3, 0.0, 0.2, 0.7, 1.6, 3.0, 8.0})
        for (double a : {-50.0, -2.0, -0.99, -0.1, 0.0, 0.3, 0.999, 1.0, 1.7, 12.0, 1e4}) {
            EXPECT_NEAR(owens_t(h, a), boost::math::owens_t(h, a), 1e-15) << h << " " << a;
        }
}

TEST(OwensT, Identities) {
    // T(h, 1) = Phi(h)(1 - Phi(h)) / 2 and T(0, a) = atan(a) / (2 pi).
    for (double h : {0.0, 0.5, 2.0}) {
        EXPECT_NEAR(owens_t(h, 1.0), 0.5 * normal_cdf(h) * normal_sf(h), 1e-15);
    }
    EXPECT_NEAR(owens_t(0.0, 3.0), std::atan(3.0) / (2 * std::numbers::pi), 1e-15);
}

TEST(SkewNormal, MatchesBoost) {
    for (double scale : {0.5, 1.0, 2.3})
        for (double shape : {-4.0, -0.5, 0.0, 1.0, 7.0}) {
            boost::math::skew_normal_distribution<double> d(0.0, scale, shape);
            for (double z = -6.0; z <= 6.0; z += 0.37) {
                const SkewNormalParams p{scale, shape};
                EXPECT_NEAR(skew_normal_pdf(z, p), boost::math::pdf(d, z), 1e-14);
                EXPECT_NEAR(skew_normal_cdf(z, p), boost::math::cdf(d, z), 1e-13);
            }
        }
}

TEST(SkewNormal, InvalidParameters) {
    EXPECT_THROW(skew_normal_cdf(0.0, {0.0, 1.0}), DomainError);
    EXPECT_THROW(skew_normal_pdf(0.0, {-1.0, 1.0}), DomainError);
    EXPECT_THROW(skew_normal_cdf(0.0, {1.0, std::nan("")}), DomainError);
}

TEST(SpecExamples, NormalValues) {
    EXPECT_NEAR(normal_pdf(1.0), 0.24197072451914337, 1e-17);
    EXPECT_EQ(normal_pdf(-1.0), normal_pdf(1.0));
    EXPECT_EQ(normal_cdf(0.0), 0.5);
    EXPECT_NEAR(normal_cdf(1.959964), 0.975, 1e-7);
    EXPECT_EQ(normal_quantile(0.5), 0.0);
    EXPECT_NEAR(normal_quantile(0.975), 1.959964, 1e-6);
    EXPECT_NEAR(normal_quantile(0.25), -0.6744898, 1e-7);
}

TEST(SpecExamples, SkewNormalValues) {
    EXPECT_NEAR(skew_normal_pdf(0.0, {1.0, 0.0}), 0.3989422804, 1e-10);
    EXPECT_NEAR(skew_normal_pdf(1.0, {1.0, 1.0}), 2 * oracle::phi(1.0) * 0.24197072451914337, 1e-15);
    EXPECT_EQ(skew_normal_cdf(std::numeric_limits<double>::infinity(), {1.3, 2.0}), 1.0);
    EXPECT_NEAR(skew_normal_cdf(0.0, {1.0, 0.0}), 0.5, 1e-16);
    using boost::math::quadrature::gauss_kronrod;
    for (double shape : {-3.0, 1.0, 5.0}) {
        const SkewNormalParams p{1.7, shape};
        const double mass = gauss_kronrod<double, 61>::integrate(
            [&](double z) { return skew_normal_pdf(z, p); }, -30.0, 30.0, 15, 1e-12);
        EXPECT_NEAR(mass, 1.0, 1e-8);
        const double upto1 = gauss_kronrod<double, 61>::integrate(
            [&](double z) { return skew_normal_pdf(z, p); }, -30.0, 1.0, 15, 1e-12);
        EXPECT_NEAR(skew_normal_cdf(1.0, p), upto1, 1e-8);
    }
}
