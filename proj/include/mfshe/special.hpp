#pragma once

#include <cmath>

namespace mfshe::special {

inline double gamma_fn(double x) { return std::tgamma(x); }
inline double log_gamma(double x) { return std::lgamma(x); }

// Surface area of the unit sphere in R^d: omega_{d-1} = 2 pi^{d/2} / Gamma(d/2).
inline double sphere_surface(int d) {
    return 2.0 * std::pow(M_PI, 0.5 * d) / std::tgamma(0.5 * d);
}

// Angular average of the plane wave over the unit sphere in R^d:
//   Omega_d(u) = Gamma(d/2) (2/u)^{d/2-1} J_{d/2-1}(u),
// the kernel of the radial Fourier (Hankel) transform. Closed forms for
// d = 1, 3; Bessel J0 for d = 2.
inline double plane_wave_mean(int d, double u) {
    if (u == 0.0) return 1.0;
    switch (d) {
        case 1: return std::cos(u);
        case 2: return std::cyl_bessel_j(0.0, u);
        case 3: return std::sin(u) / u;
        default: {
            const double nu = 0.5 * d - 1.0;
            return std::tgamma(0.5 * d) * std::pow(2.0 / u, nu) *
                   std::cyl_bessel_j(nu, u);
        }
    }
}

// Asymptotic half-period of Omega_d's oscillation (exact for d odd, the
// large-argument Bessel period otherwise). Used to block oscillatory tails.
inline double plane_wave_half_period() { return M_PI; }

} // namespace mfshe::special
