#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mfshe {

// Serial is the reference path; Parallel runs the same per-item work under
// OpenMP. Every parallel loop in the project writes into an index-addressed
// slot and reduces in a fixed order afterwards, so both policies produce
// bit-identical results given the same seeds.
enum class ExecPolicy { Serial, Parallel };

template <typename Body>
void for_each_index(ExecPolicy policy, std::int64_t n, Body&& body) {
    if (policy == ExecPolicy::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
#endif
    }
    for (std::int64_t i = 0; i < n; ++i) body(i);
}

// Fixed-order compensated (Kahan) sum of per-item results.
inline double ordered_sum(const std::vector<double>& slots) {
    double s = 0.0, c = 0.0;
    for (double v : slots) {
        const double y = v - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::int64_t n = 0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
    MeanStderr r;
    r.n = static_cast<std::int64_t>(xs.size());
    if (r.n == 0) return r;
    r.mean = ordered_sum(xs) / static_cast<double>(r.n);
    double ss = 0.0, c = 0.0;
    for (double v : xs) {
        const double dx = v - r.mean;
        const double y = dx * dx - c;
        const double t = ss + y;
        c = (t - ss) - y;
        ss = t;
    }
    if (r.n > 1)
        r.stderr_ = std::sqrt(ss / (static_cast<double>(r.n) *
                                    static_cast<double>(r.n - 1)));
    return r;
}

} // namespace mfshe
