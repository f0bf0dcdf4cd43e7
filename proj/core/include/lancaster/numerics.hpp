#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace lancaster::numerics {

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, integral, error;
};

template <class F>
Segment kronrod15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * sum;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
};

// Globally adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b].
// Bisects the segment with the largest error estimate until the total error
// is below max(abs_tol, rel_tol * |value|) or max_segments is reached.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol = 1e-12,
                           double rel_tol = 1e-12, std::size_t max_segments = 2000) {
    if (a == b) return {0.0, 0.0, true};
    std::vector<detail::Segment> heap;
    heap.reserve(64);
    auto by_error = [](const detail::Segment& l, const detail::Segment& r) {
        return l.error < r.error;
    };
    heap.push_back(detail::kronrod15(f, a, b));
    double total = heap.front().integral;
    double error = heap.front().error;
    while (error > std::max(abs_tol, rel_tol * std::abs(total)) && heap.size() < max_segments) {
        std::pop_heap(heap.begin(), heap.end(), by_error);
        const detail::Segment worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval exhausted at double precision
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), by_error);
            break;
        }
        const auto left = detail::kronrod15(f, worst.a, mid);
        const auto right = detail::kronrod15(f, mid, worst.b);
        total += left.integral + right.integral - worst.integral;
        error += left.error + right.error - worst.error;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), by_error);
    }
    // Re-sum to shed the drift of the running updates.
    total = 0.0;
    error = 0.0;
    for (const auto& s : heap) {
        total += s.integral;
        error += s.error;
    }
    return {total, error, error <= std::max(abs_tol, rel_tol * std::abs(total))};
}

// Smallest x in [lo, hi] (to within `width`) with f(x) >= target, for a
// nondecreasing f. The bracket is expanded outward if it does not straddle.
template <class F>
double bisect_increasing(F&& f, double target, double lo, double hi, double width = 1e-12,
                         int max_iter = 400) {
    for (int k = 0; k < 60 && f(lo) >= target; ++k) lo -= (hi - lo);
    for (int k = 0; k < 60 && f(hi) < target; ++k) hi += (hi - lo);
    for (int k = 0; k < max_iter && hi - lo > width; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) >= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace lancaster::numerics
