// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero
// when any criterion fails. `acceptance 3 7` runs a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lancaster/asymptotics.hpp"
#include "lancaster/estimators.hpp"
#include "lancaster/experiments.hpp"
#include "lancaster/inference.hpp"
#include "lancaster/rng.hpp"
#include "lancaster/samplers.hpp"
#include "lancaster/special_functions.hpp"
#include "lancaster/truth.hpp"
#include "oracles.hpp"

using namespace lancaster;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [FAIL " << what << "]";
        }
    }
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// 1. Closed-form covariance under bivariate normality.
void criterion_1(Outcome& o) {
    double worst = 0.0;
    for (double rho : {0.0, 0.25, -0.25, 0.5, -0.5, 0.95, -0.95}) {
        const auto s = sigma_star(MomentSet::bivariate_normal(rho));
        const double q = (1 - rho * rho) * (1 - rho * rho);
        const double e11 = q, e12 = 2 * rho * q, e22 = q * (3 * std::pow(rho, 4) + 10 * rho * rho + 1);
        worst = std::max({worst, std::abs(s.s11 - e11), std::abs(s.s12 - e12), std::abs(s.s22 - e22)});
        if (rho == 0.0) {
            o.check(std::abs(s.s11 - 1) < 1e-12 && std::abs(s.s12) < 1e-12 && std::abs(s.s22 - 1) < 1e-12,
                    "identity at rho=0");
        }
    }
    o.check(worst < 1e-9, "entrywise 1e-9");
    o.detail << " max entry error " << fmt(worst, 3);
}

// 2. max(|U|,|V|) with standard margins and tau = 0.
void criterion_2(Outcome& o) {
    const LimitLaw law{LimitKind::MaxAbsPair, 1.0, 1.0, 0.0};
    double worst = 0.0;
    for (int i = 0; i <= 600; ++i) {
        const double z = i * 0.01;
        const double f = 2 * oracle::phi(z) - 1;
        worst = std::max(worst, std::abs(max_abs_cdf(z, law) - f * f));
    }
    o.check(worst < 1e-12, "cdf 1e-12");
    // (2 Phi(q) - 1)^2 = 0.95  <=>  q = Phi^{-1}((1 + sqrt(0.95)) / 2)
    const double q_root = oracle::phi_inv((1 + std::sqrt(0.95)) / 2);
    const double q = limit_quantile(0.95, law);
    o.check(std::abs(q - q_root) < 1e-8, "quantile 1e-8");
    o.detail << " cdf error " << fmt(worst, 3) << ", q0.95 " << fmt(q, 12) << " vs " << fmt(q_root, 12);
}

// 3. Skew-normal mixture vs direct bivariate normal quadrature.
void criterion_3(Outcome& o) {
    const std::vector<double> sig = {0.5, 0.8, 1.0, 1.5, 2.5};
    const std::vector<double> taus = {-0.9, -0.5, 0.0, 0.5, 0.9};
    double worst = 0.0;
    std::size_t points = 0;
    for (double s1 : sig)
        for (double s2 : sig)
            for (double tau : taus) {
                const LimitLaw pair{LimitKind::MaxPair, s1, s2, tau};
                const LimitLaw neg{LimitKind::MaxNegPair, s1, s2, tau};
                const LimitLaw abs{LimitKind::MaxAbsPair, s1, s2, tau};
                const double m = std::max(s1, s2);
                for (double t : {-1.0, 0.0, 0.7, 1.6}) {
                    const double z = t * m;
                    worst = std::max(worst, std::abs(limit_cdf(z, pair) - oracle::max_pair_cdf(z, s1, s2, tau)));
                    worst = std::max(worst, std::abs(limit_cdf(z, neg) - oracle::max_neg_pair_cdf(z, s1, s2, tau)));
                    if (z > 0) {
                        worst = std::max(worst, std::abs(limit_cdf(z, abs) - oracle::max_abs_cdf(z, s1, s2, tau)));
                    }
                    points += 3;
                }
            }
    o.check(worst < 1e-6, "1e-6");
    o.detail << " " << points << " evaluations, max error " << fmt(worst, 3);
}

// 4. Joint limit of the rank components under independence.
void criterion_4(Outcome& o) {
    const std::size_t n = 1000, reps = 2000;
    std::vector<double> u(reps), v(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const auto s = sample(DistributionSpec::bvn(0.0), n, Rng::stream(kSeed, {4, r}).next());
        const auto e = lancaster_rank(s);
        u[r] = std::sqrt(double(n)) * e.rho1;
        v[r] = std::sqrt(double(n)) * e.rho2;
    }
    const double d1 = oracle::ks_statistic(u, oracle::phi);
    const double d2 = oracle::ks_statistic(v, oracle::phi);
    const double crit = oracle::ks_critical(reps, 0.01);
    const double corr = oracle::pearson(u, v);
    o.check(d1 < crit, "KS rho1");
    o.check(d2 < crit, "KS rho2");
    o.check(std::abs(corr) < 0.05, "correlation");
    o.detail << " KS " << fmt(d1, 3) << ", " << fmt(d2, 3) << " (critical " << fmt(crit, 3)
             << "), corr " << fmt(corr, 3);
}

StudyConfig power_config(std::vector<std::string> dists, std::vector<std::string> methods) {
    StudyConfig c;
    c.kind = StudyKind::Power;
    for (const auto& d : dists) c.distributions.push_back(parse_distribution(d));
    c.methods = std::move(methods);
    c.n = 100;
    c.replications = 2000;
    c.permutations = 500;
    c.alpha = 0.05;
    c.seed = kSeed;
    c.threads = 0;
    return c;
}

// 5. Size of the tests under two independence models.
void criterion_5(Outcome& o) {
    auto c = power_config({"BVN(0)", "MN"},
                          {"rank_asymptotic", "rank_permutation", "linear_permutation",
                           "pearson_permutation", "spearman_permutation", "dcor_permutation",
                           "xi_permutation"});
    const auto report = run_power_study(c);
    for (const auto& cell : report.cells) {
        const double v = cell.value.value_or(-1);
        o.detail << " " << cell.distribution << "/" << cell.method << "=" << fmt(v, 3);
        o.check(std::abs(v - 0.05) <= 0.012, cell.distribution + "/" + cell.method);
    }
}

// 6. Power spot checks.
void criterion_6(Outcome& o) {
    struct Spot {
        const char* dist;
        const char* method;
        double target;
    };
    const Spot spots[] = {{"MN1", "rank_asymptotic", 0.51},
                          {"UnifDisc", "linear_permutation", 0.92},
                          {"GARCH(2,1)", "rank_permutation", 0.82},
                          {"RegQuad1", "xi_permutation", 1.00}};
    for (const auto& s : spots) {
        const auto report = run_power_study(power_config({s.dist}, {s.method}));
        const double v = report.cells.at(0).value.value_or(-1);
        o.detail << " " << s.dist << "/" << s.method << "=" << fmt(v, 3) << " (" << s.target << ")";
        o.check(std::abs(v - s.target) <= 0.04, std::string(s.dist) + "/" + s.method);
    }
}

// 7. Coverage and mean length spot checks.
void criterion_7(Outcome& o) {
    StudyConfig c;
    c.kind = StudyKind::Coverage;
    c.n = 200;
    c.replications = 2000;
    c.bootstrap = 300;
    c.alpha = 0.05;
    c.seed = kSeed;
    c.threads = 0;
    const auto truth = TruthTable::load(default_truth_path());

    auto run = [&](const char* dist, std::vector<std::string> methods) {
        auto cfg = c;
        cfg.distributions = {parse_distribution(dist)};
        cfg.methods = std::move(methods);
        return run_coverage_study(cfg, truth);
    };
    const auto bvn0 = run("BVN(0)", {"plugin", "plugin_conservative"});
    const auto bvn95 = run("BVN(0.95)", {"plugin"});
    const auto tri = run("UnifTriangle", {"boot_rank"});

    auto cov = [&](const StudyReport& r, const char* m, double target) {
        const auto* cell = r.find(r.cells.at(0).distribution, m);
        const double v = cell->value.value_or(-1);
        o.detail << " " << cell->distribution << "/" << m << " coverage " << fmt(v, 3) << " (" << target << ")";
        o.check(std::abs(v - target) <= 0.015, cell->distribution + "/" + m + " coverage");
    };
    auto len = [&](const StudyReport& r, const char* m, double target) {
        const auto* cell = r.find(r.cells.at(0).distribution, m);
        const double v = cell->mean_length.value_or(-1);
        o.detail << " " << cell->distribution << "/" << m << " length " << fmt(v, 3) << " (" << target << ")";
        o.check(std::abs(v - target) <= 0.03, cell->distribution + "/" + m + " length");
    };
    cov(bvn0, "plugin", 0.85);
    cov(bvn0, "plugin_conservative", 0.94);
    cov(tri, "boot_rank", 0.94);
    len(bvn0, "plugin", 0.21);
    len(bvn95, "plugin", 0.03);
}

// 8. Monte Carlo permutation p-values vs exhaustive enumeration.
void criterion_8(Outcome& o) {
    double worst = 0.0;
    const auto coefs = all_coefficients();
    for (std::size_t f = 0; f < 20; ++f) {
        const std::size_t n = 4 + f % 4;
        Rng rng = Rng::stream(kSeed, {8, f});
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.normal();
            y[i] = 0.6 * x[i] + rng.normal();
        }
        const Coefficient c = coefs[f % coefs.size()];
        auto naive = [&](const std::vector<std::size_t>& perm) {
            std::vector<double> yp(n);
            for (std::size_t i = 0; i < n; ++i) yp[i] = y[perm[i]];
            switch (c) {
                case Coefficient::Pearson: return std::abs(oracle::pearson(x, yp));
                case Coefficient::Spearman:
                    return std::abs(oracle::pearson(oracle::naive_ranks(x), oracle::naive_ranks(yp)));
                case Coefficient::LancasterLinear: return oracle::lancaster_linear(x, yp).value();
                case Coefficient::LancasterRank: return oracle::lancaster_rank(x, yp).value();
                case Coefficient::DistanceCorrelation: return oracle::dcor(x, yp);
                case Coefficient::Xi: return oracle::xi(x, yp);
            }
            return 0.0;
        };
        const double exact = oracle::exhaustive_p_value(n, naive);
        const auto mc = test_permutation(Sample(x, y), c, 100000, kSeed + f);
        worst = std::max(worst, std::abs(mc.p_value - exact));
    }
    o.check(worst <= 0.01, "0.01");
    o.detail << " 20 fixtures (n = 4..7), max |p_mc - p_exact| " << fmt(worst, 3);
}

// 9. Invariance properties on random samples.
void criterion_9(Outcome& o) {
    std::size_t monotone_bad = 0, symmetry_bad = 0, flip_bad = 0;
    for (std::size_t k = 0; k < 1000; ++k) {
        Rng rng = Rng::stream(kSeed, {9, k});
        const std::size_t n = 5 + rng.uniform_index(60);
        const double rho = rng.uniform(-0.9, 0.9);
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.normal();
            y[i] = rho * x[i] + std::sqrt(1 - rho * rho) * rng.normal();
        }
        const Sample s(x, y);

        // Strictly increasing transforms of each margin.
        std::vector<double> fx(n), gy(n);
        for (std::size_t i = 0; i < n; ++i) {
            fx[i] = std::exp(x[i]);
            gy[i] = y[i] * y[i] * y[i] + 2.0 * y[i];
        }
        const Sample t(fx, gy);
        const auto a = lancaster_rank(s), b = lancaster_rank(t);
        if (a.rho1 != b.rho1 || a.rho2 != b.rho2 || a.value != b.value) ++monotone_bad;
        if (spearman(s) != spearman(t)) ++monotone_bad;

        // Symmetry in argument order.
        const Sample sw = s.swapped();
        for (auto c : {Coefficient::Pearson, Coefficient::Spearman, Coefficient::LancasterLinear,
                       Coefficient::LancasterRank, Coefficient::DistanceCorrelation}) {
            if (std::abs(evaluate_coefficient(c, s).value - evaluate_coefficient(c, sw).value) > 1e-12) {
                ++symmetry_bad;
            }
        }

        // Sign flip of one margin leaves the maximum unchanged.
        std::vector<double> ny(n);
        for (std::size_t i = 0; i < n; ++i) ny[i] = -y[i];
        const Sample f(x, ny);
        if (lancaster_rank(f).value != a.value) ++flip_bad;
        if (std::abs(lancaster_linear(f).value - lancaster_linear(s).value) > 1e-12) ++flip_bad;
    }
    o.check(monotone_bad == 0, "monotone");
    o.check(symmetry_bad == 0, "symmetry");
    o.check(flip_bad == 0, "sign flip");
    o.detail << " 1000 cases each; violations monotone " << monotone_bad << ", symmetry "
             << symmetry_bad << ", sign flip " << flip_bad;
}

// 10. Single-sample estimates at n = 10^4.
void criterion_10(Outcome& o) {
    auto draw = [](const char* d) {
        return sample(parse_distribution(d), 10000, Rng::stream(kSeed, {10, hash_key(d)}).next());
    };
    for (const char* d : {"NM1", "NM2"}) {
        const double v = lancaster_rank(draw(d)).value;
        o.detail << " " << d << " rhoL " << fmt(v, 4);
        o.check(v >= 0.24 && v <= 0.31, std::string(d) + " rhoL in 0.25-0.30");
    }
    const double bvc = lancaster_rank(draw("BVC")).value;
    const double garch = lancaster_rank(draw("GARCH(2,1)")).value;
    o.detail << " BVC rhoL " << fmt(bvc, 3) << " GARCH rhoL " << fmt(garch, 3);
    o.check(bvc > 0.6, "BVC rhoL > 0.6");
    o.check(garch > 0.4, "GARCH rhoL > 0.4");
    for (const char* d : {"NM1", "BVT5(0)", "BVC", "UnifDisc"}) {
        const double v = spearman(draw(d));
        o.detail << " " << d << " rhoS " << fmt(v, 3);
        o.check(std::abs(v) < 0.05, std::string(d) + " |rhoS| < 0.05");
    }
}

struct Criterion {
    int id;
    const char* title;
    double budget_seconds;
    std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria = {
        {1, "closed-form covariance under bivariate normality", 1, criterion_1},
        {2, "max(|U|,|V|) law with standard margins", 1, criterion_2},
        {3, "skew-normal mixture vs bivariate normal quadrature", 30, criterion_3},
        {4, "joint normal limit of the rank components", 120, criterion_4},
        {5, "size of the independence tests (n=100, B=2000)", 600, criterion_5},
        {6, "power spot checks (n=100, B=2000)", 1200, criterion_6},
        {7, "coverage and length spot checks (n=200, B=2000)", 1800, criterion_7},
        {8, "permutation p-values vs exhaustive enumeration", 60, criterion_8},
        {9, "invariance properties", 60, criterion_9},
        {10, "single-sample estimate signatures (n=10^4)", 60, criterion_10},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.contains(c.id)) continue;
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.check(secs <= c.budget_seconds, "runtime budget " + fmt(c.budget_seconds, 4) + " s");
        std::printf("%s criterion %d: %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL", c.id, c.title,
                    secs, o.detail.str().c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
