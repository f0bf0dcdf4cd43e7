#include "lancaster/estimators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "lancaster/error.hpp"
#include "lancaster/rng.hpp"
#include "lancaster/special_functions.hpp"

namespace lancaster {

namespace {

std::vector<std::size_t> sorted_order(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t l, std::size_t r) { return values[l] < values[r]; });
    return order;
}

void require_min_size(const Sample& sample, std::size_t n_min, const char* what) {
    if (sample.size() < n_min) {
        throw SampleTooSmallError(std::string(what) + " needs at least " + std::to_string(n_min) +
                                  " observations, got " + std::to_string(sample.size()));
    }
}

double clamp_unit(double r) { return std::clamp(r, -1.0, 1.0); }

double pearson_of(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) {
        throw DegenerateSampleError("correlation undefined: a margin has zero variance");
    }
    return clamp_unit(sxy / std::sqrt(sxx * syy));
}

// Row means of |v_i - v_j| in O(n log n) through prefix sums over the sorted values.
std::vector<double> distance_row_means(std::span<const double> v) {
    const std::size_t n = v.size();
    const auto order = sorted_order(v);
    std::vector<double> sorted(n);
    for (std::size_t k = 0; k < n; ++k) sorted[k] = v[order[k]];
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + sorted[k];
    std::vector<double> means(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double below = sorted[k] * static_cast<double>(k) - prefix[k];
        const double above = (prefix[n] - prefix[k + 1]) - sorted[k] * static_cast<double>(n - k - 1);
        means[order[k]] = (below + above) / static_cast<double>(n);
    }
    return means;
}

}  // namespace

RankVector ranks(std::span<const double> values) {
    const auto order = sorted_order(values);
    RankVector result(values.size());
    std::size_t k = 0;
    while (k < order.size()) {
        std::size_t end = k + 1;
        while (end < order.size() && values[order[end]] == values[order[k]]) ++end;
        for (std::size_t m = k; m < end; ++m) result[order[m]] = end;
        k = end;
    }
    return result;
}

RankVector ranks_by_position(std::span<const double> values) {
    const auto order = sorted_order(values);
    RankVector result(values.size());
    for (std::size_t k = 0; k < order.size(); ++k) result[order[k]] = k + 1;
    return result;
}

bool has_ties(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

ScoreSet vdw_scores(std::size_t n) {
    if (n < 2) throw SampleTooSmallError("van der Waerden scores need n >= 2");
    ScoreSet s;
    s.a.resize(n);
    const double denom = static_cast<double>(n + 1);
    // Fill the lower half and mirror it so that a(n + 1 - j) == -a(j) exactly.
    for (std::size_t j = 1; 2 * j <= n; ++j) {
        const double q = normal_quantile(static_cast<double>(j) / denom);
        s.a[j - 1] = q;
        s.a[n - j] = -q;
    }
    if (n % 2 == 1) s.a[n / 2] = 0.0;
    s.b.resize(n);
    for (std::size_t k = 0; k < n; ++k) s.b[k] = s.a[k] * s.a[k];

    const auto nn = static_cast<double>(n);
    s.a_bar = std::accumulate(s.a.begin(), s.a.end(), 0.0) / nn;
    s.b_bar = std::accumulate(s.b.begin(), s.b.end(), 0.0) / nn;
    for (std::size_t k = 0; k < n; ++k) {
        s.s_a2 += (s.a[k] - s.a_bar) * (s.a[k] - s.a_bar);
        s.s_b2 += (s.b[k] - s.b_bar) * (s.b[k] - s.b_bar);
    }
    s.s_a2 /= nn;
    s.s_b2 /= nn;
    return s;
}

std::shared_ptr<const ScoreSet> cached_vdw_scores(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::shared_ptr<const ScoreSet>> cache;
    if (auto it = cache.find(n); it != cache.end()) return it->second;
    if (cache.size() > 64) cache.clear();
    auto scores = std::make_shared<const ScoreSet>(vdw_scores(n));
    cache.emplace(n, scores);
    return scores;
}

LancasterEstimate make_estimate(double rho1, double rho2, bool ties) {
    LancasterEstimate e;
    e.rho1 = rho1;
    e.rho2 = rho2;
    e.ties = ties;
    if (std::abs(rho2) > std::abs(rho1)) {
        e.value = std::abs(rho2);
        e.winner = Component::Second;
    } else {
        e.value = std::abs(rho1);
        e.winner = Component::First;
    }
    return e;
}

LancasterEstimate lancaster_rank_from_ranks(std::span<const std::size_t> x_ranks,
                                            std::span<const std::size_t> y_ranks,
                                            const ScoreSet& scores, bool ties) {
    const std::size_t n = x_ranks.size();
    double sum1 = 0.0, sum2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t q = x_ranks[j] - 1;
        const std::size_t r = y_ranks[j] - 1;
        sum1 += scores.a[q] * scores.a[r];
        sum2 += (scores.b[q] - scores.b_bar) * (scores.b[r] - scores.b_bar);
    }
    const auto nn = static_cast<double>(n);
    return make_estimate(clamp_unit(sum1 / (nn * scores.s_a2)),
                         clamp_unit(sum2 / (nn * scores.s_b2)), ties);
}

LancasterEstimate lancaster_rank(const Sample& sample) {
    require_min_size(sample, 3, "rank Lancaster correlation");
    const auto q = ranks(sample.xs());
    const auto r = ranks(sample.ys());
    const bool ties = has_ties(sample.xs()) || has_ties(sample.ys());
    return lancaster_rank_from_ranks(q, r, *cached_vdw_scores(sample.size()), ties);
}

Standardized standardize(std::span<const double> values) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (values.empty() || *lo == *hi) {
        throw DegenerateSampleError("margin is constant; standardization undefined");
    }
    Standardized s;
    const auto n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / n);
    if (!(s.sd > 0.0)) throw DegenerateSampleError("margin has zero variance");
    s.values.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) s.values[i] = (values[i] - s.mean) / s.sd;
    return s;
}

LancasterEstimate lancaster_linear(const Sample& sample) {
    require_min_size(sample, 3, "linear Lancaster correlation");
    const auto x = standardize(sample.xs());
    const auto y = standardize(sample.ys());
    const std::size_t n = sample.size();
    double m11 = 0.0, m22 = 0.0, m40 = 0.0, m04 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = x.values[i], yi = y.values[i];
        const double x2 = xi * xi, y2 = yi * yi;
        m11 += xi * yi;
        m22 += x2 * y2;
        m40 += x2 * x2;
        m04 += y2 * y2;
    }
    const auto nn = static_cast<double>(n);
    m11 /= nn;
    m22 /= nn;
    m40 /= nn;
    m04 /= nn;
    if (!(m40 > 1.0) || !(m04 > 1.0)) {
        throw DegenerateKurtosisError("standardized fourth moment <= 1; squared correlation undefined");
    }
    const double rho2 = (m22 - 1.0) / std::sqrt((m40 - 1.0) * (m04 - 1.0));
    return make_estimate(clamp_unit(m11), clamp_unit(rho2));
}

double pearson(const Sample& sample) {
    require_min_size(sample, 3, "Pearson correlation");
    return pearson_of(sample.xs(), sample.ys());
}

double spearman(const Sample& sample) {
    require_min_size(sample, 3, "Spearman correlation");
    const auto q = ranks(sample.xs());
    const auto r = ranks(sample.ys());
    std::vector<double> qd(q.begin(), q.end());
    std::vector<double> rd(r.begin(), r.end());
    return pearson_of(qd, rd);
}

double distance_correlation(const Sample& sample) {
    const auto xs = sample.xs();
    const auto ys = sample.ys();
    const std::size_t n = sample.size();
    const auto nn = static_cast<double>(n);

    const auto ax = distance_row_means(xs);
    const auto by = distance_row_means(ys);
    const double a_grand = std::accumulate(ax.begin(), ax.end(), 0.0) / nn;
    const double b_grand = std::accumulate(by.begin(), by.end(), 0.0) / nn;

    // dCov^2 = S1 + S2 - 2 S3 with S1 = mean_ij a_ij b_ij, S2 = a.. b..,
    // S3 = mean_i a_i. b_i. ; the same identity with a = b gives dVar^2.
    double cross = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double xi = xs[i], yi = ys[i];
        double row = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) row += std::abs(xi - xs[j]) * std::abs(yi - ys[j]);
        cross += row;
    }
    cross = 2.0 * cross / (nn * nn);

    auto squared_sum = [&](std::span<const double> v) {
        const double m = std::accumulate(v.begin(), v.end(), 0.0) / nn;
        double ss = 0.0;
        for (const double e : v) ss += (e - m) * (e - m);
        return 2.0 * nn * ss / (nn * nn);  // mean_ij (v_i - v_j)^2
    };
    double s3_xy = 0.0, s3_xx = 0.0, s3_yy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s3_xy += ax[i] * by[i];
        s3_xx += ax[i] * ax[i];
        s3_yy += by[i] * by[i];
    }
    s3_xy /= nn;
    s3_xx /= nn;
    s3_yy /= nn;

    const double dcov2 = std::max(0.0, cross + a_grand * b_grand - 2.0 * s3_xy);
    const double dvarx2 = squared_sum(xs) + a_grand * a_grand - 2.0 * s3_xx;
    const double dvary2 = squared_sum(ys) + b_grand * b_grand - 2.0 * s3_yy;
    if (!(dvarx2 > 0.0) || !(dvary2 > 0.0)) return 0.0;
    return std::min(1.0, std::sqrt(dcov2 / std::sqrt(dvarx2 * dvary2)));
}

double xi_coefficient(const Sample& sample, std::uint64_t seed) {
    const auto xs = sample.xs();
    const std::size_t n = sample.size();
    Rng rng(seed);
    std::vector<std::uint64_t> jitter(n);
    for (auto& j : jitter) j = rng.next();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        if (xs[l] != xs[r]) return xs[l] < xs[r];
        return jitter[l] < jitter[r];
    });
    const auto r = ranks(sample.ys());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto a = static_cast<double>(r[order[i + 1]]);
        const auto b = static_cast<double>(r[order[i]]);
        total += std::abs(a - b);
    }
    const auto nn = static_cast<double>(n);
    return 1.0 - 3.0 * total / (nn * nn - 1.0);
}

namespace {

constexpr std::array<Coefficient, 6> kCoefficients = {
    Coefficient::Pearson,         Coefficient::Spearman,
    Coefficient::LancasterLinear, Coefficient::LancasterRank,
    Coefficient::DistanceCorrelation, Coefficient::Xi};

}  // namespace

std::string_view coefficient_id(Coefficient c) noexcept {
    switch (c) {
        case Coefficient::Pearson: return "pearson";
        case Coefficient::Spearman: return "spearman";
        case Coefficient::LancasterLinear: return "lancaster_linear";
        case Coefficient::LancasterRank: return "lancaster_rank";
        case Coefficient::DistanceCorrelation: return "dcor";
        case Coefficient::Xi: return "xi";
    }
    return "unknown";
}

Coefficient parse_coefficient(std::string_view id) {
    for (const auto c : kCoefficients) {
        if (coefficient_id(c) == id) return c;
    }
    std::string valid;
    for (const auto c : kCoefficients) {
        if (!valid.empty()) valid += ", ";
        valid += coefficient_id(c);
    }
    throw ConfigError("unknown coefficient '" + std::string(id) + "'; valid ids: " + valid);
}

std::span<const Coefficient> all_coefficients() noexcept { return kCoefficients; }

CoefficientValue evaluate_coefficient(Coefficient c, const Sample& sample, std::uint64_t seed) {
    auto plain = [](double v) { return CoefficientValue{v, v, v, false}; };
    switch (c) {
        case Coefficient::Pearson: return plain(pearson(sample));
        case Coefficient::Spearman: {
            auto v = plain(spearman(sample));
            v.ties = has_ties(sample.xs()) || has_ties(sample.ys());
            return v;
        }
        case Coefficient::LancasterLinear: {
            const auto e = lancaster_linear(sample);
            return {e.value, e.rho1, e.rho2, false};
        }
        case Coefficient::LancasterRank: {
            const auto e = lancaster_rank(sample);
            return {e.value, e.rho1, e.rho2, e.ties};
        }
        case Coefficient::DistanceCorrelation: return plain(distance_correlation(sample));
        case Coefficient::Xi: return plain(xi_coefficient(sample, seed));
    }
    return {};
}

}  // namespace lancaster
