#pragma once

#include <vector>

#include "mfshe/kernels.hpp"
#include "mfshe/model_params.hpp"

namespace mfshe::field {

// Cov(Z_t(x), Z_t(x+lag)) for |lag| = L, by radial quadrature of the
// time-integrated spectral density against the angular average of the plane
// wave. Absolute tolerance ~1e-10 relative to the variance scale.
double z_covariance_radial(double L, const ModelParams& p);

inline double z_covariance(const Point& lag, const ModelParams& p) {
    return z_covariance_radial(norm2(lag), p);
}

inline double z_variance(const ModelParams& p) {
    return kernels::variance_of_z(p);
}

// E|Z_t(x) - Z_t(y)|^2 at |x-y| = L.
inline double z_structure_function(double L, const ModelParams& p) {
    return 2.0 * (z_variance(p) - z_covariance_radial(L, p));
}

inline double z_correlation(double L, const ModelParams& p) {
    return z_covariance_radial(L, p) / z_variance(p);
}

// Covariance sequence c(j*spacing), j = 0..count-1. Small lags are evaluated
// directly; large lags through a cubic spline of c(L) L^beta on a log-lag
// grid (48 points per decade), which keeps the relative interpolation error
// near 1e-8 for this family of curves.
std::vector<double> covariance_sequence(const ModelParams& p, double spacing,
                                        std::size_t count);

// Operational correlation length: the smallest lag with Corr <= 0.05.
double correlation_length(const ModelParams& p);

// Empirical constant for the long-range bound Corr <= c3 |lag|^{-beta}:
// the sup of Corr(L) L^beta over L in [max(2 t^{1/alpha}, 1), 1e3].
double c3_bound(const ModelParams& p);

} // namespace mfshe::field
