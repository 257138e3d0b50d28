#pragma once

// Test-side oracles, independent of the library code paths: a long-double
// adaptive Simpson and constants frozen from a standalone brute-force run
// (full-period-block oscillatory summation, cross-checked at alpha = 2
// against the real-space Walsh integral to 2e-10).
#include <cmath>
#include <functional>

namespace oracle {

inline long double simpson(const std::function<long double(long double)>& f,
                           long double a, long double b, long double tol,
                           int depth = 0) {
    const long double m = (a + b) / 2;
    const long double fa = f(a), fm = f(m), fb = f(b);
    const long double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    const long double lm = (a + m) / 2, rm = (m + b) / 2;
    const long double left = (m - a) / 6 * (fa + 4 * f(lm) + fm);
    const long double right = (b - m) / 6 * (fm + 4 * f(rm) + fb);
    if (depth > 24 || fabsl(left + right - whole) < 15 * tol)
        return left + right + (left + right - whole) / 15;
    return simpson(f, a, m, tol / 2, depth + 1) +
           simpson(f, m, b, tol / 2, depth + 1);
}

// Frozen values (alpha, beta, d, t as noted).
inline constexpr double kStableDensity_a15_x0 = 0.287352751452164;  // s=1,d=1
inline constexpr double kStableDensity_a15_x1 = 0.202038159607840;  // s=1,d=1
inline constexpr double kRieszConst_b05_d1 = 2.506628274631001;     // sqrt(2pi)
inline constexpr double kRieszConst_b1_d2 = 6.283185307179586;      // 2pi
inline constexpr double kRieszConst_b09_d1 = 0.334340718685344;
inline constexpr double kVarConst_a15_b05_d1 = 4.252549848153225;
inline constexpr double kVarConstPaper_a15_b05_d1 = 5.329780844329321;
inline constexpr double kVarRatio_a15_b05_d1 = 0.797884560802865;
inline constexpr double kVarConst_a2_b1_d1 = 2.506628274631001;
inline constexpr double kVarConst_a2_b05_d2 = 12.770625972837091;
inline constexpr double kVarConst_a2_b05_d1 = 4.065016499909536;
inline constexpr double kCov10_a15_b05_t1 = 0.81363404615455;
inline constexpr double kCov100_a15_b05_t1 = 0.25086314060751;
inline constexpr double kCov5_a2_b05_t1 = 1.17463501679592;   // = real-space
inline constexpr double kCov20_a2_b05_t1 = 0.56156588287875;  // = real-space
inline constexpr double kSpec_r1_a2_b1_t1 = 0.43233235838169365;  // (1-e^-2)/2

} // namespace oracle
