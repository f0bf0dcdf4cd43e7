#pragma once

// Scalar special functions: standard normal pdf/cdf/quantile, Owen's T and
// the skew-normal SN(0, sigma, alpha) density and distribution function.
//
// All functions are pure and thread-safe.

namespace lancaster {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double normal_pdf(double z) noexcept;

// Phi(z); accepts +-infinity.
double normal_cdf(double z) noexcept;

// Upper tail 1 - Phi(z) without cancellation.
double normal_sf(double z) noexcept;

// Phi^{-1}(p) for p in (0, 1); throws DomainError otherwise.
double normal_quantile(double p);

// Owen's T function T(h, a) = 1/(2 pi) int_0^a exp(-h^2 (1 + x^2) / 2) / (1 + x^2) dx.
double owens_t(double h, double a) noexcept;

struct SkewNormalParams {
    double scale = 1.0;  // sigma > 0
    double shape = 0.0;  // alpha

    // Throws DomainError unless scale > 0 and both fields are finite.
    void validate() const;
};

// g(z; sigma, alpha) = (2 / sigma) phi(z / sigma) Phi(alpha z / sigma).
double skew_normal_pdf(double z, const SkewNormalParams& params);

// G(z; sigma, alpha) = Phi(z / sigma) - 2 T(z / sigma, alpha).
double skew_normal_cdf(double z, const SkewNormalParams& params);

}  // namespace lancaster
