#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "mfshe/errors.hpp"

namespace mfshe::quad {

// 15-point Gauss-Legendre nodes/weights on [-1, 1].
struct GL15 {
    static constexpr int n = 15;
    static constexpr std::array<double, 15> x = {
        -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
        -0.7244177313601700, -0.5709721726085388, -0.3941513470775634,
        -0.2011940939974345, 0.0,                 0.2011940939974345,
        0.3941513470775634,  0.5709721726085388,  0.7244177313601700,
        0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
    static constexpr std::array<double, 15> w = {
        0.03075324199611727, 0.07036604748810812, 0.1071592204671719,
        0.1395706779261543,  0.1662692058169939,  0.1861610000155622,
        0.1984314853271116,  0.2025782419255613,  0.1984314853271116,
        0.1861610000155622,  0.1662692058169939,  0.1395706779261543,
        0.1071592204671719,  0.07036604748810812, 0.03075324199611727};
};

struct GL7 {
    static constexpr int n = 7;
    static constexpr std::array<double, 7> x = {
        -0.9491079123427585, -0.7415311855993944, -0.4058451513773972,
        0.0,                 0.4058451513773972,  0.7415311855993944,
        0.9491079123427585};
    static constexpr std::array<double, 7> w = {
        0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
        0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
        0.1294849661688697};
};

template <typename Rule, typename F>
double fixed_rule(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < Rule::n; ++i) s += Rule::w[i] * f(c + h * Rule::x[i]);
    return s * h;
}

// Adaptive bisection with a GL15/GL7 error estimate. The segment budget
// bounds total work; exceeding it with the error still large signals a
// tolerance below what the integrand can support.
template <typename F>
double adaptive(F&& f, double a, double b, double abs_tol, int max_depth = 44,
                std::size_t max_segments = 400000) {
    struct Seg {
        double a, b, tol;
        int depth;
    };
    std::vector<Seg> stack{{a, b, abs_tol, 0}};
    double total = 0.0;
    std::size_t used = 0;
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        ++used;
        const double coarse = fixed_rule<GL7>(f, s.a, s.b);
        const double fine = fixed_rule<GL15>(f, s.a, s.b);
        const double err = std::fabs(fine - coarse);
        if (err <= s.tol || s.depth >= max_depth || used >= max_segments) {
            if (err > 1e3 * s.tol)
                throw QuadratureError(
                    "adaptive quadrature: budget exhausted with error " +
                    std::to_string(err));
            total += fine;
            continue;
        }
        const double m = 0.5 * (s.a + s.b);
        stack.push_back({s.a, m, 0.5 * s.tol, s.depth + 1});
        stack.push_back({m, s.b, 0.5 * s.tol, s.depth + 1});
    }
    return total;
}

// int_a^inf f, integrated over consecutive blocks of width `block`.
// Partial sums of an oscillatory integrand alternate around the limit; the
// iterated pairwise average of the partial-sum sequence converges fast even
// when the block magnitudes decay only like a power law. Also correct for
// monotone decaying tails (averaging is regular for convergent sequences).
// No convergence exit is taken before `min_span` has been traversed, so a
// rising envelope cannot fake an early plateau.
template <typename F>
double oscillatory_tail(F&& f, double a, double block, double abs_tol,
                        double min_span = 0.0, int max_blocks = 4000) {
    std::vector<double> partial;
    partial.reserve(256);
    double sum = 0.0;
    double prev_est = 0.0;
    bool have_prev = false;
    for (int k = 0; k < max_blocks; ++k) {
        const double lo = a + k * block;
        const double v = fixed_rule<GL15>(f, lo, lo + block);
        sum += v;
        partial.push_back(sum);
        const bool spanned = k * block >= min_span;
        if (spanned && std::fabs(v) < 1e-3 * abs_tol && k >= 2) return sum;
        if (spanned && partial.size() >= 6) {
            const std::size_t m = std::min<std::size_t>(24, partial.size());
            std::vector<double> row(partial.end() - m, partial.end());
            while (row.size() > 1) {
                for (std::size_t i = 0; i + 1 < row.size(); ++i)
                    row[i] = 0.5 * (row[i] + row[i + 1]);
                row.pop_back();
            }
            const double est = row[0];
            if (have_prev && std::fabs(est - prev_est) < abs_tol) return est;
            prev_est = est;
            have_prev = true;
        }
    }
    throw QuadratureError("oscillatory tail: no convergence in " +
                          std::to_string(max_blocks) + " blocks");
}

} // namespace mfshe::quad
