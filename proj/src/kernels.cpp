#include "mfshe/kernels.hpp"

#include <algorithm>

namespace mfshe::kernels {

namespace {

double gaussian_density(double r, double s, int d) {
    // p^_s(xi) = e^{-s |xi|^2}  =>  N(0, 2s I) marginally.
    return std::pow(4.0 * M_PI * s, -0.5 * d) * std::exp(-r * r / (4.0 * s));
}

double cauchy_density(double r, double s, int d) {
    // Isotropic Cauchy: p_s(x) = Gamma((d+1)/2) / pi^{(d+1)/2}
    //                            * s / (s^2 + |x|^2)^{(d+1)/2}.
    const double c =
        special::gamma_fn(0.5 * (d + 1)) / std::pow(M_PI, 0.5 * (d + 1));
    return c * s / std::pow(s * s + r * r, 0.5 * (d + 1));
}

} // namespace

double stable_density_radial(double r, double s, const ModelParams& p) {
    if (!(s > 0.0))
        throw std::invalid_argument("stable_density: s must be positive");
    const double a = p.alpha();
    const int d = p.d();
    if (a == 2.0) return gaussian_density(r, s, d);
    if (a == 1.0) return cauchy_density(r, s, d);

    // p_s(x) = (2pi)^{-d} omega_{d-1} int_0^inf e^{-s u^a} u^{d-1}
    //          Omega_d(u r) du, truncated where the exponential factor
    //          falls below 1e-13.
    const double u_max = std::pow(30.0 / s, 1.0 / a);
    const double scale =
        std::pow(2.0 * M_PI, -d) * special::sphere_surface(d);
    const auto integrand = [&](double u) {
        return std::exp(-s * std::pow(u, a)) * std::pow(u, d - 1) *
               special::plane_wave_mean(d, u * r);
    };
    // Envelope of the integral for the absolute tolerance.
    const double env = special::gamma_fn(static_cast<double>(d) / a) /
                       (a * std::pow(s, static_cast<double>(d) / a));
    const double tol = 1e-12 * std::max(1.0, env);

    double val = 0.0;
    if (r * u_max <= 24.0) {
        val = quad::adaptive(integrand, 0.0, u_max, tol);
    } else {
        // Oscillatory: sum half-period blocks; the exponential factor ends
        // the series shortly past u_max.
        const double block = special::plane_wave_half_period() / r;
        val = quad::oscillatory_tail(integrand, 0.0, block, tol, u_max,
                                     static_cast<int>(u_max / block) + 256);
    }
    const double density = scale * val;
    if (!std::isfinite(density))
        throw QuadratureError("stable_density: inversion integral diverged");
    return density;
}

double stable_density(const Point& x, double s, const ModelParams& p) {
    return stable_density_radial(norm2(x), s, p);
}

} // namespace mfshe::kernels
