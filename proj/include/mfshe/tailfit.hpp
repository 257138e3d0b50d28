#pragma once

#include <vector>

namespace mfshe::fractal {

struct TailFit {
    double b = 0.0;        // fitted tail exponent
    double c = 0.0;        // fitted constant of -log P ~ c z^b
    double c_lower = 0.0;  // c - 2 se (lower-style constant)
    double c_upper = 0.0;  // c + 2 se (upper-style constant)
    double residual = 0.0; // weighted rms residual at the chosen b
};

// Fits the Weibull-type tail model  -log P{X > z} = c z^b + q log z + r
// to the empirical exceedance curve of iid samples, profiling b over b_grid
// (with parabolic refinement). The q log z + r terms absorb the polynomial
// prefactor of densities like the Gaussian, so b and c estimate the pure
// stretched-exponential order. z levels are empirical quantiles from
// p = 0.25 down to 20/N; throws CensoringError when the tail is unresolvable.
TailFit tail_exponent_fit(std::vector<double> samples,
                          const std::vector<double>& b_grid);

// Same model with the exponent b pinned (no profiling).
TailFit tail_fit_at_b(std::vector<double> samples, double b);

} // namespace mfshe::fractal
