#pragma once

#include <array>
#include <cstddef>

namespace lancaster {

// Dense row-major matrix with compile-time dimensions.
template <std::size_t Rows, std::size_t Cols>
struct Matrix {
    std::array<double, Rows * Cols> data{};

    static constexpr std::size_t rows() noexcept { return Rows; }
    static constexpr std::size_t cols() noexcept { return Cols; }

    constexpr double& operator()(std::size_t r, std::size_t c) noexcept { return data[r * Cols + c]; }
    constexpr double operator()(std::size_t r, std::size_t c) const noexcept {
        return data[r * Cols + c];
    }

    constexpr Matrix<Cols, Rows> transposed() const noexcept {
        Matrix<Cols, Rows> t;
        for (std::size_t r = 0; r < Rows; ++r)
            for (std::size_t c = 0; c < Cols; ++c) t(c, r) = (*this)(r, c);
        return t;
    }
};

template <std::size_t R, std::size_t K, std::size_t C>
constexpr Matrix<R, C> operator*(const Matrix<R, K>& lhs, const Matrix<K, C>& rhs) noexcept {
    Matrix<R, C> out;
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t k = 0; k < K; ++k) {
            const double l = lhs(r, k);
            if (l == 0.0) continue;
            for (std::size_t c = 0; c < C; ++c) out(r, c) += l * rhs(k, c);
        }
    return out;
}

}  // namespace lancaster
