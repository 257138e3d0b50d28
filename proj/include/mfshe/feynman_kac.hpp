#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mfshe/exec.hpp"
#include "mfshe/model_params.hpp"
#include "mfshe/rng.hpp"

namespace mfshe::pam {

// Standard symmetric alpha-stable draw (cf e^{-|xi|^alpha}), Chambers-
// Mallows-Stuck. Closed forms for alpha = 1 (Cauchy) and alpha = 2.
double sym_stable_standard(rng::GaussianRng& rng, double alpha);

// Standard positive (one-sided) rho-stable draw with Laplace transform
// e^{-lambda^rho}, rho in (0,1) (Kanter's form of CMS).
double positive_stable_standard(rng::GaussianRng& rng, double rho);

// Increment of the d-dimensional isotropic stable process with exponent
// psi(xi) = |xi|^alpha over time dt: direct CMS per d = 1, Brownian motion
// subordinated by an (alpha/2)-stable subordinator for d >= 2.
void stable_increment(rng::GaussianRng& rng, double alpha, int d, double dt,
                      double* out);

struct MomentEstimate {
    int k = 2;
    double value = 0.0;
    double stderr_ = 0.0;
    std::int64_t n_paths = 0;
    double dt_path = 0.0;
    double cap = 0.0;
    bool variance_warning = false;  // relative stderr above 50%
};

// E[u_t(x)^k] by the Feynman-Kac pair-interaction functional: k independent
// isotropic stable paths from a common start, the exponential of the summed
// pairwise Riesz interaction with the kernel capped at `cap` (f ^ cap, bias
// downward). Left-point Riemann sum in time.
MomentEstimate fk_moment(int k, const ModelParams& params,
                         std::int64_t n_paths, double dt_path, double cap,
                         std::uint64_t seed,
                         ExecPolicy policy = ExecPolicy::Parallel);

// Same estimator with an arbitrary radial interaction kernel; the diagnostic
// beta -> 0 limit replaces the Riesz kernel by a constant and the functional
// becomes deterministic.
MomentEstimate fk_moment_with_kernel(
    int k, const ModelParams& params, std::int64_t n_paths, double dt_path,
    const std::function<double(double)>& radial_kernel, std::uint64_t seed,
    ExecPolicy policy = ExecPolicy::Parallel);

} // namespace mfshe::pam
