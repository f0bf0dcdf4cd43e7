#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lancaster {

/// Paired observations (x_i, y_i), i = 0..n-1.
///
/// Construction validates equal lengths, n >= 2 and finite entries.
class Sample {
public:
    Sample() = default;
    Sample(std::vector<double> xs, std::vector<double> ys);

    std::size_t size() const noexcept { return xs_.size(); }
    std::span<const double> xs() const noexcept { return xs_; }
    std::span<const double> ys() const noexcept { return ys_; }

    // Same xs, ys re-paired through `perm` (ys'[i] = ys[perm[i]]).
    Sample with_permuted_ys(std::span<const std::size_t> perm) const;
    Sample swapped() const;

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

}  // namespace lancaster
