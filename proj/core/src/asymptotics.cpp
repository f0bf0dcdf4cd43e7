#include "lancaster/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lancaster/error.hpp"
#include "lancaster/estimators.hpp"
#include "lancaster/numerics.hpp"
#include "lancaster/special_functions.hpp"

namespace lancaster {

namespace {

constexpr double kTauClamp = 1.0 - 1e-12;

double double_factorial_odd(std::size_t m) {
    // (m - 1)!! for even m, the m-th moment of N(0, 1); zero for odd m.
    if (m % 2 == 1) return 0.0;
    double r = 1.0;
    for (std::size_t k = m; k > 1; k -= 2) r *= static_cast<double>(k - 1);
    return r;
}

double binomial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// Checked and clamped tau.
double effective_tau(const LimitLaw& law) {
    law.validate();
    if (std::abs(law.tau) >= 1.0) {
        throw SingularCorrelationError("limit law with |tau| = 1 has no density");
    }
    const double tau = law.kind == LimitKind::MaxNegPair ? -law.tau : law.tau;
    return std::clamp(tau, -kTauClamp, kTauClamp);
}

struct PairShapes {
    SkewNormalParams first;   // component on sigma1
    SkewNormalParams second;  // component on sigma2
};

// Skew-normal components of max(U, V); flip_tau selects the shapes
// (sigma_i / sigma_j + tau) / sqrt(1 - tau^2) used for the reflected terms of
// max(|U|, |V|).
PairShapes pair_shapes(double s1, double s2, double tau, bool flip_tau) {
    const double root = std::sqrt(1.0 - tau * tau);
    const double t = flip_tau ? -tau : tau;
    return {{s1, (s1 / s2 - t) / root}, {s2, (s2 / s1 - t) / root}};
}

void require_pair_kind(const LimitLaw& law) {
    if (law.kind != LimitKind::MaxPair && law.kind != LimitKind::MaxNegPair) {
        throw DomainError("max_pair functions need a MaxPair or MaxNegPair law");
    }
}

void require_abs(double z, const LimitLaw& law) {
    if (law.kind != LimitKind::MaxAbsPair) {
        throw DomainError("max_abs functions need a MaxAbsPair law");
    }
    if (z < 0.0 || std::isnan(z)) throw DomainError("max(|U|,|V|) is supported on z >= 0");
}

}  // namespace

MomentSet::MomentSet() { e_[0][0] = 1.0; }

MomentSet MomentSet::from_sample(const Sample& sample) {
    const auto x = standardize(sample.xs());
    const auto y = standardize(sample.ys());
    MomentSet m;
    for (auto& row : m.e_) row.fill(0.0);
    const std::size_t n = sample.size();
    std::array<double, kMaxOrder + 1> xp{}, yp{};
    for (std::size_t i = 0; i < n; ++i) {
        xp[0] = yp[0] = 1.0;
        for (std::size_t k = 1; k <= kMaxOrder; ++k) {
            xp[k] = xp[k - 1] * x.values[i];
            yp[k] = yp[k - 1] * y.values[i];
        }
        for (std::size_t k = 0; k <= kMaxOrder; ++k)
            for (std::size_t l = 0; k + l <= 2 * kMaxOrder && l <= kMaxOrder; ++l)
                m.e_[k][l] += xp[k] * yp[l];
    }
    const auto nn = static_cast<double>(n);
    for (auto& row : m.e_)
        for (auto& v : row) v /= nn;
    return m;
}

MomentSet MomentSet::bivariate_normal(double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("bivariate normal needs rho in [-1, 1]");
    // Y = rho X + sqrt(1 - rho^2) W with X, W independent N(0, 1).
    const double s = std::sqrt(1.0 - rho * rho);
    MomentSet m;
    for (std::size_t k = 0; k <= kMaxOrder; ++k)
        for (std::size_t l = 0; l <= kMaxOrder; ++l) {
            double sum = 0.0;
            for (std::size_t j = 0; j <= l; ++j) {
                const double mx = double_factorial_odd(k + j);
                const double mw = double_factorial_odd(l - j);
                if (mx == 0.0 || mw == 0.0) continue;
                sum += binomial(l, j) * std::pow(rho, static_cast<double>(j)) *
                       std::pow(s, static_cast<double>(l - j)) * mx * mw;
            }
            m.e_[k][l] = sum;
        }
    return m;
}

MomentCov moment_cov_matrix(const MomentSet& e) {
    MomentCov c;
    for (std::size_t p = 0; p < 12; ++p) {
        const auto [kp, lp] = kMomentIndex[p];
        for (std::size_t q = 0; q < 12; ++q) {
            const auto [kq, lq] = kMomentIndex[q];
            c(p, q) = e(kp + kq, lp + lq) - e(kp, lp) * e(kq, lq);
        }
    }
    return c;
}

MomentCov moment_cov_matrix(const Sample& sample) {
    if (sample.size() < 12) {
        throw SampleTooSmallError("moment covariance needs at least 12 observations");
    }
    return moment_cov_matrix(MomentSet::from_sample(sample));
}

JacobianA matrix_A(const MomentSet& e) {
    JacobianA a;
    a(0, 2) = 1.0;
    a(1, 3) = 1.0;
    a(2, 4) = 1.0;

    a(3, 0) = -4.0 * e(3, 0);
    a(3, 2) = -2.0 * e(4, 0);
    a(3, 9) = 1.0;

    a(4, 1) = -4.0 * e(0, 3);
    a(4, 3) = -2.0 * e(0, 4);
    a(4, 10) = 1.0;

    a(5, 0) = -2.0 * e(1, 2);
    a(5, 1) = -2.0 * e(2, 1);
    a(5, 2) = -e(2, 2);
    a(5, 3) = -e(2, 2);
    a(5, 11) = 1.0;
    return a;
}

JacobianB matrix_B(const MomentSet& e, double rho1, double rho2) {
    const double kx = e(4, 0) - 1.0;
    const double ky = e(0, 4) - 1.0;
    if (!(kx > 0.0) || !(ky > 0.0)) {
        throw DegenerateKurtosisError("e40 and e04 must exceed 1");
    }
    JacobianB b;
    b(0, 0) = -rho1 / 2.0;
    b(0, 1) = -rho1 / 2.0;
    b(0, 2) = 1.0;
    b(1, 3) = -rho2 / (2.0 * kx);
    b(1, 4) = -rho2 / (2.0 * ky);
    b(1, 5) = 1.0 / std::sqrt(kx * ky);
    return b;
}

std::pair<double, double> linear_components(const MomentSet& e) {
    const double kx = e(4, 0) - 1.0;
    const double ky = e(0, 4) - 1.0;
    if (!(kx > 0.0) || !(ky > 0.0)) {
        throw DegenerateKurtosisError("e40 and e04 must exceed 1");
    }
    return {e(1, 1), (e(2, 2) - 1.0) / std::sqrt(kx * ky)};
}

CovMatrix2 sigma_star(const MomentSet& e) {
    const auto [rho1, rho2] = linear_components(e);
    const auto m = matrix_B(e, rho1, rho2) * matrix_A(e);
    const auto s = m * moment_cov_matrix(e) * m.transposed();
    return {s(0, 0), 0.5 * (s(0, 1) + s(1, 0)), s(1, 1)};
}

CovMatrix2 sigma_star(const Sample& sample) {
    if (sample.size() < 12) {
        throw SampleTooSmallError("plug-in covariance needs at least 12 observations");
    }
    return sigma_star(MomentSet::from_sample(sample));
}

CovMatrix2 sigma_star_independence(const MomentSet& e) {
    const double kx = e(4, 0) - 1.0;
    const double ky = e(0, 4) - 1.0;
    if (!(kx > 0.0) || !(ky > 0.0)) {
        throw DegenerateKurtosisError("e40 and e04 must exceed 1");
    }
    const double tau = e(3, 0) * e(0, 3) / std::sqrt(kx * ky);
    return {1.0, tau, 1.0};
}

CovMatrix2 sigma_star_independence(const Sample& sample) {
    return sigma_star_independence(MomentSet::from_sample(sample));
}

void LimitLaw::validate() const {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0) || !std::isfinite(sigma1) || !std::isfinite(sigma2)) {
        throw DomainError("limit law scales must be finite and positive");
    }
    if (!(tau >= -1.0 && tau <= 1.0)) throw DomainError("limit law tau must lie in [-1, 1]");
}

double max_pair_cdf(double z, const LimitLaw& law) {
    require_pair_kind(law);
    const double tau = effective_tau(law);
    const auto sh = pair_shapes(law.sigma1, law.sigma2, tau, false);
    return 0.5 * skew_normal_cdf(z, sh.first) + 0.5 * skew_normal_cdf(z, sh.second);
}

double max_pair_pdf(double z, const LimitLaw& law) {
    require_pair_kind(law);
    const double tau = effective_tau(law);
    const auto sh = pair_shapes(law.sigma1, law.sigma2, tau, false);
    return 0.5 * skew_normal_pdf(z, sh.first) + 0.5 * skew_normal_pdf(z, sh.second);
}

double max_pair_cdf_integral(double z, const LimitLaw& law) {
    require_pair_kind(law);
    const double tau = effective_tau(law);
    const double s1 = law.sigma1, s2 = law.sigma2;
    const double cond_sd = s2 * std::sqrt(1.0 - tau * tau);
    auto integrand = [&](double t) {
        return normal_pdf(t / s1) / s1 * normal_cdf((z - tau * s2 * t / s1) / cond_sd);
    };
    const double lower = -12.0 * s1;
    if (z <= lower) return 0.0;
    return std::clamp(numerics::integrate(integrand, lower, z, 1e-13, 1e-12).value, 0.0, 1.0);
}

double max_abs_cdf(double z, const LimitLaw& law) {
    require_abs(z, law);
    const double tau = effective_tau(law);
    if (z == 0.0) return 0.0;
    if (std::isinf(z)) return 1.0;
    const auto plus = pair_shapes(law.sigma1, law.sigma2, tau, false);
    const auto minus = pair_shapes(law.sigma1, law.sigma2, tau, true);
    // int_0^z [g(t; a) - g(-t; b)] dt = G(z; a) - G(0; a) + G(-z; b) - G(0; b)
    auto piece = [z](const SkewNormalParams& a, const SkewNormalParams& b) {
        return skew_normal_cdf(z, a) - skew_normal_cdf(0.0, a) + skew_normal_cdf(-z, b) -
               skew_normal_cdf(0.0, b);
    };
    const double value = piece(plus.first, minus.first) + piece(plus.second, minus.second);
    return std::clamp(value, 0.0, 1.0);
}

double max_abs_pdf(double z, const LimitLaw& law) {
    require_abs(z, law);
    const double tau = effective_tau(law);
    const auto plus = pair_shapes(law.sigma1, law.sigma2, tau, false);
    const auto minus = pair_shapes(law.sigma1, law.sigma2, tau, true);
    return skew_normal_pdf(z, plus.first) - skew_normal_pdf(-z, minus.first) +
           skew_normal_pdf(z, plus.second) - skew_normal_pdf(-z, minus.second);
}

double max_abs_cdf_integral(double z, const LimitLaw& law) {
    require_abs(z, law);
    const double tau = effective_tau(law);
    const double s1 = law.sigma1, s2 = law.sigma2;
    const double cond_sd = s2 * std::sqrt(1.0 - tau * tau);
    auto integrand = [&](double t) {
        const double shift = tau * s2 * t / s1;
        return normal_pdf(t / s1) / s1 *
               (normal_cdf((z - shift) / cond_sd) - normal_cdf((-z - shift) / cond_sd));
    };
    const double upper = std::min(z, 12.0 * s1);
    return std::clamp(2.0 * numerics::integrate(integrand, 0.0, upper, 1e-13, 1e-12).value, 0.0,
                      1.0);
}

double limit_cdf(double z, const LimitLaw& law) {
    switch (law.kind) {
        case LimitKind::Normal1: law.validate(); return normal_cdf(z / law.sigma1);
        case LimitKind::Normal2: law.validate(); return normal_cdf(z / law.sigma2);
        case LimitKind::MaxPair:
        case LimitKind::MaxNegPair: return max_pair_cdf(z, law);
        case LimitKind::MaxAbsPair: return z <= 0.0 ? 0.0 : max_abs_cdf(z, law);
    }
    return 0.0;
}

double limit_pdf(double z, const LimitLaw& law) {
    switch (law.kind) {
        case LimitKind::Normal1: law.validate(); return normal_pdf(z / law.sigma1) / law.sigma1;
        case LimitKind::Normal2: law.validate(); return normal_pdf(z / law.sigma2) / law.sigma2;
        case LimitKind::MaxPair:
        case LimitKind::MaxNegPair: return max_pair_pdf(z, law);
        case LimitKind::MaxAbsPair: return z < 0.0 ? 0.0 : max_abs_pdf(z, law);
    }
    return 0.0;
}

double limit_quantile(double p, const LimitLaw& law) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("limit_quantile: p must lie in (0, 1)");
    law.validate();
    switch (law.kind) {
        case LimitKind::Normal1: return law.sigma1 * normal_quantile(p);
        case LimitKind::Normal2: return law.sigma2 * normal_quantile(p);
        default: break;
    }
    const double span = 10.0 * std::max(law.sigma1, law.sigma2);
    const double lo = law.kind == LimitKind::MaxAbsPair ? 0.0 : -span;
    auto cdf = [&](double z) { return limit_cdf(z, law); };
    return numerics::bisect_increasing(cdf, p, lo, span, 1e-12 * span);
}

}  // namespace lancaster
