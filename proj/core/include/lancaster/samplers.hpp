#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "lancaster/sample.hpp"

namespace lancaster {

enum class DistributionKind {
    BivariateNormal,  // rho
    NormalMixture,    // p f(rho = -1/2) + (1 - p) f(rho = 1/2), standard normal margins
    FourNormalMixture,
    BivariateT,       // nu, rho
    UnifDisc,
    UnifRhomb,
    UnifTriangle,
    Garch21,
    RegLin,           // sigma
    RegQuad,
    RegTrig,
};

// r_t = sigma_t e_t,
// sigma_t^2 = omega + alpha1 r_{t-1}^2 + alpha2 r_{t-2}^2 + beta sigma_{t-1}^2.
// The defaults read the parameter pair (0.01, 0.6) as (omega, alpha1).
// GARCH(w,a1,a2,b) in parse_distribution selects other values.
struct GarchParams {
    double omega = 0.01;
    double alpha1 = 0.6;
    double alpha2 = 0.0;
    double beta = 0.2;
    std::size_t burn_in = 1000;
};

struct DistributionSpec {
    DistributionKind kind = DistributionKind::BivariateNormal;
    double rho = 0.0;
    double p = 0.5;
    double nu = 5.0;
    double sigma = 0.3;
    GarchParams garch;

    void validate() const;  // ConfigError

    static DistributionSpec bvn(double rho);
    static DistributionSpec normal_mixture(double p);
    static DistributionSpec bvt(double nu, double rho);
    static DistributionSpec regression(DistributionKind kind, double sigma);
    static DistributionSpec of(DistributionKind kind);
};

// Accepted forms (case-insensitive):
//   BVN(r)  NM(p)  NM1 NM2 NM3  MN1 MN2 MN3  MN  BVT(nu,r)  BVT5(r)  BVT5  BVC
//   UnifDisc  UnifRhomb  UnifTriangle  GARCH  GARCH(2,1)
//   RegLin(s) RegQuad(s) RegTrig(s)  RegLin1 RegLin2 RegQuad1 RegQuad2 RegTrig1 RegTrig2
DistributionSpec parse_distribution(std::string_view text);

// Canonical name; parse_distribution(distribution_name(s)) reproduces s
// (GARCH parameters aside).
std::string distribution_name(const DistributionSpec& spec);

// Whether E|X|^k and E|Y|^k are finite.
bool has_finite_moments(const DistributionSpec& spec, int order) noexcept;

Sample sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace lancaster
