#include "lancaster/samplers.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "lancaster/error.hpp"
#include "lancaster/rng.hpp"

namespace lancaster {

namespace {

std::string fmt(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), end};
}

std::string lower(std::string_view s) {
    std::string out;
    for (const char c : s) {
        if (c == ' ' || c == '\t') continue;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

double to_number(std::string_view s, std::string_view context) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) {
        throw ConfigError("invalid number '" + std::string(s) + "' in distribution '" +
                          std::string(context) + "'");
    }
    return v;
}

struct Preset {
    std::string_view name;
    DistributionSpec spec;
};

const std::vector<Preset>& presets() {
    static const std::vector<Preset> table = {
        {"nm1", DistributionSpec::normal_mixture(0.5)},
        {"nm2", DistributionSpec::normal_mixture(1.0 / 3.0)},
        {"nm3", DistributionSpec::normal_mixture(0.25)},
        {"mn1", DistributionSpec::normal_mixture(0.5)},
        {"mn2", DistributionSpec::normal_mixture(1.0 / 3.0)},
        {"mn3", DistributionSpec::normal_mixture(0.25)},
        {"mn", DistributionSpec::of(DistributionKind::FourNormalMixture)},
        {"nm", DistributionSpec::of(DistributionKind::FourNormalMixture)},
        {"bvc", DistributionSpec::bvt(1.0, 0.0)},
        {"unifdisc", DistributionSpec::of(DistributionKind::UnifDisc)},
        {"unif-disc", DistributionSpec::of(DistributionKind::UnifDisc)},
        {"unifrhomb", DistributionSpec::of(DistributionKind::UnifRhomb)},
        {"unifdrhomb", DistributionSpec::of(DistributionKind::UnifRhomb)},
        {"uniftriangle", DistributionSpec::of(DistributionKind::UnifTriangle)},
        {"garch", DistributionSpec::of(DistributionKind::Garch21)},
        {"garch(2,1)", DistributionSpec::of(DistributionKind::Garch21)},
        {"reglin1", DistributionSpec::regression(DistributionKind::RegLin, 0.3)},
        {"reglin2", DistributionSpec::regression(DistributionKind::RegLin, 0.45)},
        {"regquad1", DistributionSpec::regression(DistributionKind::RegQuad, 0.15)},
        {"regquad2", DistributionSpec::regression(DistributionKind::RegQuad, 0.3)},
        {"regtrig1", DistributionSpec::regression(DistributionKind::RegTrig, 0.15)},
        {"regtrig2", DistributionSpec::regression(DistributionKind::RegTrig, 0.3)},
    };
    return table;
}

std::pair<double, double> standard_pair(Rng& rng, double rho) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    return {z1, rho * z1 + std::sqrt(1.0 - rho * rho) * z2};
}

template <class Accept>
std::pair<double, double> rejection(Rng& rng, double x_lo, double x_hi, double y_lo, double y_hi,
                                    Accept accept) {
    for (;;) {
        const double x = rng.uniform(x_lo, x_hi);
        const double y = rng.uniform(y_lo, y_hi);
        if (accept(x, y)) return {x, y};
    }
}

}  // namespace

DistributionSpec DistributionSpec::bvn(double rho) {
    DistributionSpec s;
    s.kind = DistributionKind::BivariateNormal;
    s.rho = rho;
    return s;
}

DistributionSpec DistributionSpec::normal_mixture(double p) {
    DistributionSpec s;
    s.kind = DistributionKind::NormalMixture;
    s.p = p;
    return s;
}

DistributionSpec DistributionSpec::bvt(double nu, double rho) {
    DistributionSpec s;
    s.kind = DistributionKind::BivariateT;
    s.nu = nu;
    s.rho = rho;
    return s;
}

DistributionSpec DistributionSpec::regression(DistributionKind kind, double sigma) {
    DistributionSpec s;
    s.kind = kind;
    s.sigma = sigma;
    return s;
}

DistributionSpec DistributionSpec::of(DistributionKind kind) {
    DistributionSpec s;
    s.kind = kind;
    return s;
}

void DistributionSpec::validate() const {
    switch (kind) {
        case DistributionKind::BivariateNormal:
            if (!(rho > -1.0 && rho < 1.0)) throw ConfigError("BVN needs rho in (-1, 1)");
            break;
        case DistributionKind::NormalMixture:
            if (!(p > 0.0 && p < 1.0)) throw ConfigError("NM needs p in (0, 1)");
            break;
        case DistributionKind::BivariateT:
            if (!(rho > -1.0 && rho < 1.0)) throw ConfigError("BVT needs rho in (-1, 1)");
            if (!(nu > 0.0) || !std::isfinite(nu)) throw ConfigError("BVT needs nu > 0");
            break;
        case DistributionKind::RegLin:
        case DistributionKind::RegQuad:
        case DistributionKind::RegTrig:
            if (!(sigma > 0.0) || !std::isfinite(sigma)) {
                throw ConfigError("regression noise sigma must be > 0");
            }
            break;
        case DistributionKind::Garch21:
            if (!(garch.omega > 0.0) || garch.alpha1 < 0.0 || garch.alpha2 < 0.0 ||
                garch.beta < 0.0 || !(garch.alpha1 + garch.alpha2 + garch.beta < 1.0)) {
                throw ConfigError("GARCH parameters must be non-negative and stationary");
            }
            break;
        default: break;
    }
}

DistributionSpec parse_distribution(std::string_view text) {
    const std::string s = lower(text);
    for (const auto& preset : presets()) {
        if (preset.name == s) return preset.spec;
    }
    const auto open = s.find('(');
    if (open == std::string::npos && s.starts_with("bvt") && s.size() > 3) {
        auto spec = DistributionSpec::bvt(to_number(std::string_view(s).substr(3), text), 0.0);
        spec.validate();
        return spec;
    }
    if (open == std::string::npos || s.back() != ')') {
        throw ConfigError("unknown distribution '" + std::string(text) + "'");
    }
    const std::string head = s.substr(0, open);
    const std::string body = s.substr(open + 1, s.size() - open - 2);
    std::vector<double> args;
    std::size_t start = 0;
    while (start <= body.size()) {
        const auto comma = body.find(',', start);
        const auto piece = body.substr(start, comma == std::string::npos ? comma : comma - start);
        args.push_back(to_number(piece, text));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    auto expect = [&](std::size_t count) {
        if (args.size() != count) {
            throw ConfigError("distribution '" + std::string(text) + "' expects " +
                              std::to_string(count) + " argument(s)");
        }
    };

    DistributionSpec spec;
    if (head == "bvn") {
        expect(1);
        spec = DistributionSpec::bvn(args[0]);
    } else if (head == "nm") {
        expect(1);
        spec = DistributionSpec::normal_mixture(args[0]);
    } else if (head == "bvt") {
        expect(2);
        spec = DistributionSpec::bvt(args[0], args[1]);
    } else if (head.starts_with("bvt")) {
        expect(1);
        spec = DistributionSpec::bvt(to_number(std::string_view(head).substr(3), text), args[0]);
    } else if (head == "garch") {
        if (args.size() == 2 && args[0] == 2.0 && args[1] == 1.0) return DistributionSpec::of(DistributionKind::Garch21);
        expect(4);
        spec = DistributionSpec::of(DistributionKind::Garch21);
        spec.garch.omega = args[0];
        spec.garch.alpha1 = args[1];
        spec.garch.alpha2 = args[2];
        spec.garch.beta = args[3];
    } else if (head == "reglin" || head == "regquad" || head == "regtrig") {
        expect(1);
        const auto kind = head == "reglin"    ? DistributionKind::RegLin
                          : head == "regquad" ? DistributionKind::RegQuad
                                              : DistributionKind::RegTrig;
        spec = DistributionSpec::regression(kind, args[0]);
    } else {
        throw ConfigError("unknown distribution '" + std::string(text) + "'");
    }
    spec.validate();
    return spec;
}

std::string distribution_name(const DistributionSpec& spec) {
    switch (spec.kind) {
        case DistributionKind::BivariateNormal: return "BVN(" + fmt(spec.rho) + ")";
        case DistributionKind::NormalMixture:
            if (spec.p == 0.5) return "NM1";
            if (spec.p == 1.0 / 3.0) return "NM2";
            if (spec.p == 0.25) return "NM3";
            return "NM(" + fmt(spec.p) + ")";
        case DistributionKind::FourNormalMixture: return "MN";
        case DistributionKind::BivariateT: return "BVT" + fmt(spec.nu) + "(" + fmt(spec.rho) + ")";
        case DistributionKind::UnifDisc: return "UnifDisc";
        case DistributionKind::UnifRhomb: return "UnifRhomb";
        case DistributionKind::UnifTriangle: return "UnifTriangle";
        case DistributionKind::Garch21: {
            const GarchParams d;
            const auto& g = spec.garch;
            if (g.omega == d.omega && g.alpha1 == d.alpha1 && g.alpha2 == d.alpha2 && g.beta == d.beta) {
                return "GARCH(2,1)";
            }
            return "GARCH(" + fmt(g.omega) + "," + fmt(g.alpha1) + "," + fmt(g.alpha2) + "," +
                   fmt(g.beta) + ")";
        }
        case DistributionKind::RegLin:
            if (spec.sigma == 0.3) return "RegLin1";
            if (spec.sigma == 0.45) return "RegLin2";
            return "RegLin(" + fmt(spec.sigma) + ")";
        case DistributionKind::RegQuad:
            if (spec.sigma == 0.15) return "RegQuad1";
            if (spec.sigma == 0.3) return "RegQuad2";
            return "RegQuad(" + fmt(spec.sigma) + ")";
        case DistributionKind::RegTrig:
            if (spec.sigma == 0.15) return "RegTrig1";
            if (spec.sigma == 0.3) return "RegTrig2";
            return "RegTrig(" + fmt(spec.sigma) + ")";
    }
    return "unknown";
}

bool has_finite_moments(const DistributionSpec& spec, int order) noexcept {
    if (spec.kind == DistributionKind::BivariateT) return spec.nu > static_cast<double>(order);
    return true;
}

Sample sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    if (n < 2) throw SampleTooSmallError("a sample needs at least 2 observations");
    Rng rng(seed);
    std::vector<double> xs(n), ys(n);
    auto fill = [&](auto draw) {
        for (std::size_t i = 0; i < n; ++i) std::tie(xs[i], ys[i]) = draw();
    };

    switch (spec.kind) {
        case DistributionKind::BivariateNormal:
            fill([&] { return standard_pair(rng, spec.rho); });
            break;
        case DistributionKind::NormalMixture:
            fill([&] {
                const double rho = rng.uniform() < spec.p ? -0.5 : 0.5;
                return standard_pair(rng, rho);
            });
            break;
        case DistributionKind::FourNormalMixture:
            fill([&] {
                const auto component = rng.uniform_index(4);
                const double mx = (component & 1U) ? 5.0 : 0.0;
                const double my = (component & 2U) ? 5.0 : 0.0;
                const double x = mx + rng.normal();
                return std::pair{x, my + rng.normal()};
            });
            break;
        case DistributionKind::BivariateT:
            fill([&] {
                const auto [z1, z2] = standard_pair(rng, spec.rho);
                const double w = std::sqrt(rng.chi_squared(spec.nu) / spec.nu);
                return std::pair{z1 / w, z2 / w};
            });
            break;
        case DistributionKind::UnifDisc:
            fill([&] {
                return rejection(rng, -1.0, 1.0, -1.0, 1.0,
                                 [](double x, double y) { return x * x + y * y <= 1.0; });
            });
            break;
        case DistributionKind::UnifRhomb:
            fill([&] {
                return rejection(rng, -1.0, 1.0, -1.0, 1.0, [](double x, double y) {
                    return std::abs(x) + std::abs(y) <= 1.0;
                });
            });
            break;
        case DistributionKind::UnifTriangle:
            fill([&] {
                return rejection(rng, 0.0, 1.0, 0.0, 1.0,
                                 [](double x, double y) { return x + y <= 1.0; });
            });
            break;
        case DistributionKind::Garch21: {
            const auto& g = spec.garch;
            const double uncond = g.omega / (1.0 - g.alpha1 - g.alpha2 - g.beta);
            double r1 = 0.0, r2 = 0.0, s2 = uncond;
            auto step = [&] {
                s2 = g.omega + g.alpha1 * r1 * r1 + g.alpha2 * r2 * r2 + g.beta * s2;
                const double r = std::sqrt(s2) * rng.normal();
                r2 = r1;
                r1 = r;
                return r;
            };
            for (std::size_t t = 0; t < g.burn_in; ++t) step();
            double prev = step();
            for (std::size_t i = 0; i < n; ++i) {
                const double cur = step();
                xs[i] = cur;
                ys[i] = prev;
                prev = cur;
            }
            break;
        }
        case DistributionKind::RegLin:
            fill([&] {
                const double x = rng.uniform();
                return std::pair{x, x + spec.sigma * rng.normal()};
            });
            break;
        case DistributionKind::RegQuad:
            fill([&] {
                const double x = rng.uniform(-1.0, 1.0);
                return std::pair{x, x * x + spec.sigma * rng.normal()};
            });
            break;
        case DistributionKind::RegTrig:
            fill([&] {
                const double x = rng.uniform(0.0, 4.0 * std::numbers::pi);
                return std::pair{x, (std::sin(x) + 1.0) / 2.0 + spec.sigma * rng.normal()};
            });
            break;
    }
    return Sample(std::move(xs), std::move(ys));
}

}  // namespace lancaster
