#pragma once

#include <cmath>
#include <limits>

#include "mfshe/errors.hpp"
#include "mfshe/model_params.hpp"
#include "mfshe/quadrature.hpp"
#include "mfshe/special.hpp"

// Closed-form and quadrature-based evaluation of the model's deterministic
// functions: Levy exponent, symmetric stable transition density, Riesz kernel
// and its square-root factor h, the time-integrated spectral density of the
// linear solution, and the variance prefactor.
//
// Fourier convention, fixed once for the whole project: forward transform
// g^(xi) = int g(x) e^{-i xi.x} dx, inverse with prefactor (2pi)^{-d}. Under
// this convention the Riesz kernel f(z) = c_{beta,d} |z|^{-beta} transforms to
// f^(xi) = (2pi)^d |xi|^{beta-d}, and the solution variance works out to
//   Var(Z_t) = omega_{d-1} Gamma(beta/alpha) / ((alpha-beta) 2^{beta/alpha})
//              * t^{(alpha-beta)/alpha},
// with omega_{d-1} the unit-sphere surface area. This prefactor is what
// variance_constant() returns; the commonly printed closed form with c_{beta,d}
// in place of omega_{d-1} is available as paper_variance_prefactor(), and
// variance_convention_ratio() reports the quotient between the two.

namespace mfshe::kernels {

inline double levy_exponent(const Point& xi, const ModelParams& p) {
    return std::pow(norm2(xi), p.alpha());
}

// c_{beta,d} = 2^beta pi^{d/2} Gamma(beta/2) / Gamma((d-beta)/2)
inline double riesz_constant(const ModelParams& p) {
    const double b = p.beta();
    const int d = p.d();
    return std::exp(b * std::log(2.0) + 0.5 * d * std::log(M_PI) +
                    special::log_gamma(0.5 * b) -
                    special::log_gamma(0.5 * (d - b)));
}

// f(z) = c_{beta,d} |z|^{-beta}; singular at the origin.
inline double riesz_kernel(const Point& z, const ModelParams& p) {
    const double r = norm2(z);
    if (r == 0.0)
        throw SingularInputError("riesz_kernel: evaluation at z = 0");
    return riesz_constant(p) * std::pow(r, -p.beta());
}

// Square-root factor h(x) = lambda |x|^{-(d+beta)/2} of the Riesz kernel,
// normalized so that h * h = f holds exactly (equivalently |h^|^2 = f^ under
// the project's Fourier convention), which is the property the noise
// coupling is built on:
//   lambda(beta, d) = 2^{beta/2} Gamma((d+beta)/4) / Gamma((d-beta)/4).
// The commonly printed c_{beta,d}^{1/2} amplitude does not square-convolve
// back to f under any convention; factor_amplitude() below is the one that
// does. Optionally truncated at radius ell (h_ell) or restricted to the
// complement (the remainder h - h_ell).
inline double factor_amplitude(const ModelParams& p) {
    const double b = p.beta();
    const int d = p.d();
    return std::exp(0.5 * b * std::log(2.0) +
                    special::log_gamma(0.25 * (d + b)) -
                    special::log_gamma(0.25 * (d - b)));
}

class KernelFactorization {
public:
    KernelFactorization(const ModelParams& p,
                        double ell = std::numeric_limits<double>::infinity())
        : p_(p), ell_(ell), amp_(factor_amplitude(p)) {
        if (!(ell > 0.0))
            throw std::invalid_argument("KernelFactorization: ell must be > 0");
    }

    double ell() const { return ell_; }
    const ModelParams& params() const { return p_; }

    double full(double r) const {
        if (r == 0.0)
            throw SingularInputError("kernel factor: evaluation at 0");
        return amp_ * std::pow(r, -0.5 * (p_.d() + p_.beta()));
    }

    double truncated(double r) const { return r <= ell_ ? full(r) : 0.0; }
    double remainder(double r) const { return r > ell_ ? full(r) : 0.0; }

    // Average of h over the grid cell containing the origin (side `spacing`),
    // computed over the equal-volume ball; exact for d = 1. Keeps the L2 mass
    // that pointwise sampling of the singular cell would lose.
    double singular_cell_average(double spacing) const {
        const int d = p_.d();
        const double omega = special::sphere_surface(d);
        const double vol = std::pow(spacing, d);
        const double rc = std::pow(vol * d / omega, 1.0 / d);
        const double q = 0.5 * (d - p_.beta()); // exponent of the radial integral
        return amp_ * (omega / vol) * std::pow(rc, q) / q;
    }

private:
    ModelParams p_;
    double ell_;
    double amp_;
};

// Time-integrated spectral density of Z_t:
//   S(r) = (1 - e^{-2 t r^alpha}) r^{beta-d-alpha} / 2,  r > 0,
// normalized so Var(Z_t) = int_{R^d} S(|xi|) dxi. The r -> 0 singularity is
// integrable (net order r^{beta-1} after the angular factor) and is handled
// by the callers' radial quadrature, never pointwise.
inline double z_spectral_density(double r, const ModelParams& p) {
    if (r < 0.0) throw std::invalid_argument("z_spectral_density: r < 0");
    if (r == 0.0)
        throw SingularInputError("z_spectral_density: singular at r = 0");
    const double a = p.alpha(), b = p.beta();
    return -std::expm1(-2.0 * p.t() * std::pow(r, a)) *
           std::pow(r, b - p.d() - a) * 0.5;
}

inline double variance_constant(const ModelParams& p) {
    const double a = p.alpha(), b = p.beta();
    return special::sphere_surface(p.d()) * special::gamma_fn(b / a) /
           ((a - b) * std::pow(2.0, b / a));
}

// The closed form as printed alongside the dimension theorems, with c_{beta,d}
// in place of the sphere-surface factor.
inline double paper_variance_prefactor(const ModelParams& p) {
    const double a = p.alpha(), b = p.beta();
    return riesz_constant(p) * special::gamma_fn(b / a) /
           ((a - b) * std::pow(2.0, b / a));
}

inline double variance_convention_ratio(const ModelParams& p) {
    return variance_constant(p) / paper_variance_prefactor(p);
}

inline double variance_of_z(const ModelParams& p) {
    return variance_constant(p) * std::pow(p.t(), p.variance_time_exponent());
}

// Transition density p_s(x) of the symmetric alpha-stable process with
// exponent psi(xi) = |xi|^alpha. Gaussian and Cauchy closed forms; radial
// Fourier inversion otherwise (documented absolute tolerance ~1e-10).
double stable_density(const Point& x, double s, const ModelParams& p);

// Radial version; r = |x|.
double stable_density_radial(double r, double s, const ModelParams& p);

} // namespace mfshe::kernels
