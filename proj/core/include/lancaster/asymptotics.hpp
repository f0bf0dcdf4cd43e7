#pragma once

#include <array>
#include <cstddef>
#include <utility>

#include "lancaster/matrix.hpp"
#include "lancaster/sample.hpp"

namespace lancaster {

/// Standardized mixed moments e_kl = E[X^k Y^l] of (X - EX)/sd(X), (Y - EY)/sd(Y),
/// for 0 <= k, l <= 8.
class MomentSet {
public:
    static constexpr std::size_t kMaxOrder = 8;

    MomentSet();

    // Empirical moments of the empirically standardized sample (1/n moments).
    static MomentSet from_sample(const Sample& sample);
    // Exact moments of a standard bivariate normal with correlation rho.
    static MomentSet bivariate_normal(double rho);

    double operator()(std::size_t k, std::size_t l) const noexcept { return e_[k][l]; }
    double& operator()(std::size_t k, std::size_t l) noexcept { return e_[k][l]; }

    double rho() const noexcept { return e_[1][1]; }

private:
    std::array<std::array<double, kMaxOrder + 1>, kMaxOrder + 1> e_{};
};

// Monomials X^k Y^l indexing rows/columns of the moment covariance, in the
// order 10, 01, 20, 02, 11, 30, 03, 21, 12, 40, 04, 22.
inline constexpr std::array<std::pair<std::size_t, std::size_t>, 12> kMomentIndex = {{
    {1, 0}, {0, 1}, {2, 0}, {0, 2}, {1, 1}, {3, 0}, {0, 3}, {2, 1}, {1, 2}, {4, 0}, {0, 4}, {2, 2}}};

using MomentCov = Matrix<12, 12>;
using JacobianA = Matrix<6, 12>;
using JacobianB = Matrix<2, 6>;

/// Symmetric 2x2 covariance of sqrt(n) (rho1_hat, rho2_hat).
struct CovMatrix2 {
    double s11 = 0.0;
    double s12 = 0.0;
    double s22 = 0.0;
};

// c_{kl,sr} = e_{k+s,l+r} - e_kl e_sr.
MomentCov moment_cov_matrix(const MomentSet& moments);
// Plug-in version on the empirically standardized sample; needs n >= 12.
MomentCov moment_cov_matrix(const Sample& sample);

// Jacobian of (m_10, ..., m_22) -> (s_x^2, s_y^2, s_xy, m40, m04, m22) of the
// standardized moments, at the standardized moment point.
JacobianA matrix_A(const MomentSet& moments);
// Jacobian of (s_x^2, s_y^2, s_xy, m40, m04, m22) -> (rho1, rho2).
// Throws DegenerateKurtosisError when e40 <= 1 or e04 <= 1.
JacobianB matrix_B(const MomentSet& moments, double rho1, double rho2);

// Population component correlations (rho1, rho2) implied by the moments.
std::pair<double, double> linear_components(const MomentSet& moments);

// Asymptotic covariance M Sigma_m M^T with M = B A of the moment-based
// component correlations.
CovMatrix2 sigma_star(const MomentSet& moments);
CovMatrix2 sigma_star(const Sample& sample);

// Independence case [[1, tau], [tau, 1]] with
// tau = e30 e03 / sqrt((e40 - 1)(e04 - 1)).
CovMatrix2 sigma_star_independence(const MomentSet& moments);
CovMatrix2 sigma_star_independence(const Sample& sample);

/// Limit laws of sqrt(n) (max(|rho1_hat|, |rho2_hat|) - max(|rho1|, |rho2|)),
/// with (U, V) ~ N(0, [[s1^2, tau s1 s2], [tau s1 s2, s2^2]]).
enum class LimitKind {
    Normal1,     // U
    Normal2,     // V
    MaxPair,     // max(U, V)
    MaxNegPair,  // max(-U, V)
    MaxAbsPair,  // max(|U|, |V|)
};

struct LimitLaw {
    LimitKind kind = LimitKind::MaxAbsPair;
    double sigma1 = 1.0;
    double sigma2 = 1.0;
    double tau = 0.0;

    // Throws DomainError for non-positive scales or |tau| > 1.
    void validate() const;
};

double max_pair_cdf(double z, const LimitLaw& law);
double max_pair_pdf(double z, const LimitLaw& law);
// Conditional-normal integral representation, evaluated by quadrature.
double max_pair_cdf_integral(double z, const LimitLaw& law);

// z < 0 throws DomainError.
double max_abs_cdf(double z, const LimitLaw& law);
double max_abs_pdf(double z, const LimitLaw& law);
double max_abs_cdf_integral(double z, const LimitLaw& law);

// Dispatch on law.kind.
double limit_cdf(double z, const LimitLaw& law);
double limit_pdf(double z, const LimitLaw& law);
double limit_quantile(double p, const LimitLaw& law);

}  // namespace lancaster
