#include "mfshe/tailfit.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mfshe/errors.hpp"

namespace mfshe::fractal {

namespace {

struct Fit2 {
    double c = 0.0;
    double r = 0.0;
    double rms = 0.0;
    double se_c = 0.0;
};

// Weighted least squares of the Weibull-type exceedance model at fixed b:
//   -log P{X > z} = c z^b + (b - 1) log z + r - log(1 - (b-1)/(b c z^b)).
// The (b-1) log z term and the bracket are the first terms of the
// incomplete-gamma asymptotics of a density with stretched-exponential
// decay (at b = 2 the bracket is exactly the Mills-ratio leading term;
// both vanish at b = 1). The bracket needs c, so the linear (c, r) solve
// runs twice, the second pass with the correction from the first.
Fit2 solve_at_b(const std::vector<double>& z, const std::vector<double>& y,
                const std::vector<double>& w, double b) {
    const std::size_t n = z.size();
    Fit2 out;
    double c_prev = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = std::pow(z[i], b);
            double yy = y[i] - (b - 1.0) * std::log(z[i]);
            if (pass > 0 && c_prev > 0.0 && b > 1.0) {
                const double a1 =
                    std::min(0.5, (b - 1.0) / (b * c_prev * x));
                yy += std::log(1.0 - a1);
            }
            s11 += w[i] * x * x;
            s12 += w[i] * x;
            s22 += w[i];
            r1 += w[i] * x * yy;
            r2 += w[i] * yy;
        }
        const double det = s11 * s22 - s12 * s12;
        out.c = (s22 * r1 - s12 * r2) / det;
        out.r = (s11 * r2 - s12 * r1) / det;
        out.se_c = std::sqrt(std::max(0.0, s22 / det));
        c_prev = out.c;
    }
    double ss = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::pow(z[i], b);
        double fiti = out.c * x + (b - 1.0) * std::log(z[i]) + out.r;
        if (out.c > 0.0 && b > 1.0)
            fiti -= std::log(1.0 - std::min(0.5, (b - 1.0) / (b * out.c * x)));
        ss += w[i] * (y[i] - fiti) * (y[i] - fiti);
        wsum += w[i];
    }
    out.rms = std::sqrt(ss / wsum);
    return out;
}

struct Levels {
    std::vector<double> z, y, w;
};

// z levels at empirical exceedance probabilities log-spaced from 0.02 down
// to 20/N (>= 20 exceedances at every level). Weights are inverse total
// variance: the delta-method statistical variance of -log P^ plus a fixed
// systematic floor for the model error of the asymptotic tail form, which
// keeps the (statistically precise) shallow levels from dominating where
// the form is least valid.
Levels build_levels(std::vector<double>& samples) {
    const std::size_t N = samples.size();
    if (N < 10000)
        throw std::invalid_argument("tail_exponent_fit: need >= 1e4 samples");
    std::sort(samples.begin(), samples.end());
    const double p_hi = 0.02;
    const double p_lo = 20.0 / static_cast<double>(N);
    if (p_lo >= p_hi)
        throw CensoringError("tail_exponent_fit: too few samples for a tail");
    const int K = 24;
    Levels lv;
    for (int j = 0; j < K; ++j) {
        const double p =
            p_hi * std::pow(p_lo / p_hi, static_cast<double>(j) / (K - 1));
        const auto idx = static_cast<std::size_t>(
            std::floor((1.0 - p) * static_cast<double>(N)));
        const double zj = samples[std::min(idx, N - 1)];
        const auto exceed = static_cast<double>(
            samples.end() - std::upper_bound(samples.begin(), samples.end(), zj));
        if (exceed < 20.0) break;
        const double pj = exceed / static_cast<double>(N);
        if (!lv.z.empty() && zj <= lv.z.back()) continue;  // ties
        lv.z.push_back(zj);
        lv.y.push_back(-std::log(pj));
        // var(-log P^) = (1 - P)/(N P); systematic floor ~0.032^2
        const double var_stat = (1.0 - pj) / (static_cast<double>(N) * pj);
        lv.w.push_back(1.0 / (var_stat + 1e-3));
    }
    if (lv.z.size() < 6 || lv.z.back() <= lv.z.front() * 1.05 ||
        lv.z.front() <= 0.0)
        throw CensoringError("tail_exponent_fit: unresolvable tail range");
    return lv;
}

} // namespace

TailFit tail_fit_at_b(std::vector<double> samples, double b) {
    const auto lv = build_levels(samples);
    const auto fit = solve_at_b(lv.z, lv.y, lv.w, b);
    TailFit out;
    out.b = b;
    out.c = fit.c;
    out.c_lower = fit.c - 2.0 * fit.se_c;
    out.c_upper = fit.c + 2.0 * fit.se_c;
    out.residual = fit.rms;
    return out;
}

TailFit tail_exponent_fit(std::vector<double> samples,
                          const std::vector<double>& b_grid) {
    if (b_grid.size() < 2)
        throw std::invalid_argument("tail_exponent_fit: need a b grid");
    const auto lv = build_levels(samples);

    double best_b = b_grid.front();
    double best_rms = 1e300;
    std::vector<double> rms_on_grid(b_grid.size());
    for (std::size_t i = 0; i < b_grid.size(); ++i) {
        const auto fit = solve_at_b(lv.z, lv.y, lv.w, b_grid[i]);
        rms_on_grid[i] = fit.rms;
        if (fit.rms < best_rms) {
            best_rms = fit.rms;
            best_b = b_grid[i];
        }
    }
    for (std::size_t i = 1; i + 1 < b_grid.size(); ++i) {
        if (b_grid[i] != best_b) continue;
        const double r0 = rms_on_grid[i - 1], r1 = rms_on_grid[i],
                     r2 = rms_on_grid[i + 1];
        const double denom = r0 - 2.0 * r1 + r2;
        if (denom > 0.0) {
            const double shift = 0.5 * (r0 - r2) / denom;
            if (std::fabs(shift) <= 1.0)
                best_b += shift * 0.5 * (b_grid[i + 1] - b_grid[i - 1]);
        }
        break;
    }

    const auto fit = solve_at_b(lv.z, lv.y, lv.w, best_b);
    TailFit out;
    out.b = best_b;
    out.c = fit.c;
    out.c_lower = fit.c - 2.0 * fit.se_c;
    out.c_upper = fit.c + 2.0 * fit.se_c;
    out.residual = fit.rms;
    return out;
}

} // namespace mfshe::fractal
