#include "lancaster/truth.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lancaster/error.hpp"
#include "lancaster/estimators.hpp"
#include "lancaster/report_io.hpp"

namespace lancaster {

std::optional<TruthValue> analytic_truth(const DistributionSpec& spec) {
    switch (spec.kind) {
        case DistributionKind::BivariateNormal: {
            const double v = std::abs(spec.rho);
            return TruthValue{v, v, "analytic"};
        }
        case DistributionKind::NormalMixture: {
            // Standard normal margins; the squared Hermite component is rho^2 = 1/4
            // for both mixture components.
            const double v = std::max(std::abs(0.5 - spec.p), 0.25);
            return TruthValue{v, v, "analytic"};
        }
        case DistributionKind::FourNormalMixture: return TruthValue{0.0, 0.0, "analytic"};
        case DistributionKind::BivariateT: {
            if (!(spec.nu > 4.0)) return std::nullopt;
            // X = Z1 / W, Y = Z2 / W with W^2 ~ chi2_nu / nu.
            const double nu = spec.nu;
            const double m = nu / (nu - 2.0);
            const double c = nu * nu / ((nu - 2.0) * (nu - 4.0));
            const double r2 = ((1.0 + 2.0 * spec.rho * spec.rho) * c - m * m) / (3.0 * c - m * m);
            return TruthValue{std::nullopt, std::max(std::abs(spec.rho), std::abs(r2)), "analytic"};
        }
        // Correlation of the squares: -1/3 on the disc, -3/7 on the rhombus.
        // On the triangle the Pearson part, -1/2, dominates.
        case DistributionKind::UnifDisc: return TruthValue{std::nullopt, 1.0 / 3.0, "analytic"};
        case DistributionKind::UnifRhomb: return TruthValue{std::nullopt, 3.0 / 7.0, "analytic"};
        case DistributionKind::UnifTriangle: return TruthValue{std::nullopt, 0.5, "analytic"};
        default: return std::nullopt;
    }
}

TruthValue monte_carlo_truth(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
    const Sample s = sample(spec, n, seed);
    TruthValue out;
    out.rank = lancaster_rank(s).value;
    if (has_finite_moments(spec, 4)) out.linear = lancaster_linear(s).value;
    out.source = "monte-carlo n=" + std::to_string(n) + " seed=" + std::to_string(seed);
    return out;
}

std::vector<DistributionSpec> default_truth_distributions() {
    std::vector<DistributionSpec> out;
    for (const char* name : {"BVT5(0)", "BVT2(0)", "BVT1(0)", "BVT5(0.2)", "BVT2(0.2)", "BVT1(0.2)",
                             "UnifDisc", "UnifRhomb", "UnifTriangle", "GARCH(2,1)", "RegLin1",
                             "RegLin2", "RegQuad1", "RegQuad2", "RegTrig1", "RegTrig2"}) {
        out.push_back(parse_distribution(name));
    }
    return out;
}

namespace {

std::optional<double> parse_cell(const std::string& cell, std::size_t line) {
    if (cell.empty()) return std::nullopt;
    try {
        return parse_double(cell);
    } catch (const ParseError& e) {
        throw ParseError(e.what(), line);
    }
}

}  // namespace

TruthTable TruthTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open truth file '" + path + "'");
    TruthTable table;
    std::string text;
    std::size_t line = 0;
    bool header = false;
    while (std::getline(in, text)) {
        ++line;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.empty() || text.front() == '#') continue;
        const auto cells = split_csv_line(text, line);
        if (!header) {
            if (cells.size() != 4 || cells[0] != "distribution") {
                throw ParseError("truth file header must be distribution,rho_rank,rho_linear,source",
                                 line);
            }
            header = true;
            continue;
        }
        if (cells.size() != 4) throw ParseError("expected 4 fields", line);
        DistributionSpec spec;
        try {
            spec = parse_distribution(cells[0]);
        } catch (const ConfigError& e) {
            throw ParseError(e.what(), line);
        }
        table.set(spec, TruthValue{parse_cell(cells[1], line), parse_cell(cells[2], line), cells[3]});
    }
    return table;
}

void TruthTable::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write truth file '" + path + "'");
    out << "# regenerate with: lancaster truth (see README); closed forms override these values\n"
        << "distribution,rho_rank,rho_linear,source\n";
    for (const auto& [name, v] : entries_) {
        out << csv_field(name) << ',' << (v.rank ? format_double(*v.rank) : "") << ','
            << (v.linear ? format_double(*v.linear) : "") << ',' << csv_field(v.source) << '\n';
    }
}

void TruthTable::set(const DistributionSpec& spec, TruthValue value) {
    entries_[distribution_name(spec)] = std::move(value);
}

std::optional<TruthValue> TruthTable::find(const DistributionSpec& spec) const {
    const auto analytic = analytic_truth(spec);
    const auto it = entries_.find(distribution_name(spec));
    if (it == entries_.end()) return analytic;
    TruthValue v = it->second;
    if (analytic) {
        if (analytic->rank) v.rank = analytic->rank;
        if (analytic->linear) v.linear = analytic->linear;
        v.source += "; closed form where available";
    }
    return v;
}

std::string default_truth_path() {
    namespace fs = std::filesystem;
    if (const char* env = std::getenv("LANCASTER_DATA_DIR"); env && *env) {
        return (fs::path(env) / "true_values.csv").string();
    }
    for (const char* dir : {LANCASTER_DEFAULT_DATA_DIR, LANCASTER_INSTALL_DATA_DIR}) {
        const auto p = fs::path(dir) / "true_values.csv";
        if (fs::exists(p)) return p.string();
    }
    return (fs::path(LANCASTER_DEFAULT_DATA_DIR) / "true_values.csv").string();
}

}  // namespace lancaster
