#include "lancaster/sample.hpp"

#include <cmath>
#include <string>

#include "lancaster/error.hpp"

namespace lancaster {

Sample::Sample(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() != ys_.size()) {
        throw DomainError("sample columns differ in length: " + std::to_string(xs_.size()) +
                          " vs " + std::to_string(ys_.size()));
    }
    if (xs_.size() < 2) {
        throw SampleTooSmallError("sample needs at least 2 observations");
    }
    for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (!std::isfinite(xs_[i]) || !std::isfinite(ys_[i])) {
            throw DomainError("non-finite observation at index " + std::to_string(i));
        }
    }
}

Sample Sample::with_permuted_ys(std::span<const std::size_t> perm) const {
    std::vector<double> ys(ys_.size());
    for (std::size_t i = 0; i < ys.size(); ++i) ys[i] = ys_[perm[i]];
    return Sample(xs_, std::move(ys));
}

Sample Sample::swapped() const { return Sample(ys_, xs_); }

}  // namespace lancaster
