#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "mfshe/exec.hpp"
#include "mfshe/model_params.hpp"

namespace mfshe::pam {

// Discretization of the parabolic Anderson model on a periodic torus [0, L)
// with grid_n sites (one spatial dimension), exponential-Euler stepping of
// the mild form in the Ito interpretation: the multiplicative noise is
// applied at the left endpoint, then smoothed by the stable semigroup.
//
// The driving noise increment per step is a centered Gaussian field, white
// in time (variance dt) and spatially colored with the Riesz spectral
// density realized on the discrete torus frequencies. The zero mode's
// variance comes from integrating the spectral density over the fundamental
// frequency cell (ball of equal volume), which is finite since beta > 0.
struct PamConfig {
    ModelParams params;
    double torus_side = 64.0;
    int grid_n = 512;
    double dt = 1e-3;
    std::uint64_t seed = 0;

    PamConfig(const ModelParams& p, double L, int n, double dt_, std::uint64_t s);

    int steps() const { return steps_; }
    double spacing() const { return torus_side / grid_n; }
    double noise_site_variance_rate() const { return f0_; }
    double stability_dt_bound() const { return dt_bound_; }

private:
    int steps_ = 0;
    double f0_ = 0.0;       // per-unit-time noise variance at a site
    double dt_bound_ = 0.0; // dt cap from the per-step noise sd <= 0.25 rule
};

// Largest dt passing the stability rule for this (params, L, n).
double stability_dt_bound(const ModelParams& params, double L, int n);

// Per-step noise fields on the torus. The spectral route is the production
// noise; the white/convolved routes realize the factorization coupling
// F^(h) = (white noise) * h and its truncation, sharing one underlying eta
// array so localized and full simulations can be driven by identical noise.
class TorusNoise {
public:
    explicit TorusNoise(const PamConfig& cfg);

    // Colored increment with the torus-mode spectral amplitudes, scaled by
    // sqrt(dt). Deterministic in (cfg.seed, step).
    std::vector<double> spectral_increment(int step) const;

    // iid N(0,1) per site; the shared eta array for the coupling routes.
    std::vector<double> white_array(int step) const;

    // sqrt(spacing * dt) * (h * eta) over the whole torus (FFT convolution,
    // min-image kernel, singular cell averaged).
    std::vector<double> convolve_full(const std::vector<double>& eta) const;

    // Same with h truncated at radius ell; direct summation over the
    // truncated support.
    std::vector<double> convolve_truncated(const std::vector<double>& eta,
                                           double ell) const;

    const std::vector<double>& mode_variance() const { return mode_var_; }
    // Noise covariance at lag r (sites), per unit time, for the given route.
    std::vector<double> covariance_spectral() const;
    std::vector<double> covariance_convolved(double ell) const;

private:
    PamConfig cfg_;
    std::vector<double> mode_var_;       // v_k, k = 0..n/2
    std::vector<double> h_grid_;         // min-image h values per site offset
    std::vector<std::complex<double>> h_hat_;
};

// One exponential-Euler step u -> S_dt(u (1 + dF)); throws BlowupError when
// any |u| exceeds 1e300.
void step_pam(std::vector<double>& u, const PamConfig& cfg,
              const std::vector<double>& noise_field);

struct PamRun {
    std::vector<double> final_field;
    std::int64_t nonpositive_sites = 0;  // discretization artifacts, counted
};

enum class NoiseRoute { Spectral, ConvolvedFull };

// Full simulation from u0 = 1 to the configured horizon.
PamRun simulate_pam(const PamConfig& cfg, NoiseRoute route = NoiseRoute::Spectral);

// Exact second moment E[u(x)^2] of the discrete scheme, evolved by the
// stationary covariance recursion m <- S_2dt [m (1 + dt f_grid)] in
// O(n log n) per step. f_grid is the per-unit-time noise covariance of the
// chosen route. Deterministic; used for discretization allowances and as a
// statistics-free oracle for the Monte Carlo second moment.
double second_moment_recursion(const PamConfig& cfg,
                               NoiseRoute route = NoiseRoute::Spectral);

struct TailCurvePoint {
    double z = 0.0;
    double probability = 0.0;
    double stderr_ = 0.0;
    bool censored = false;  // fewer than 20 expected exceedances
};

// Empirical exceedance curve of log u_t at a fixed torus site over
// independent replicas.
std::vector<TailCurvePoint> tail_probability(
    const PamConfig& cfg, const std::vector<double>& z_grid,
    std::int64_t replicas, ExecPolicy policy = ExecPolicy::Parallel);

// Legendre-transform bracket for the tail constants, from the moment
// constants c (lower c_* or upper c^*):
//   q(c) = ((a-b)/(2a-b))^{(a-b)/a} [1 - ((a-b)/(2a-b))^{(2a-b)/(a-b)}]
//          * c^{-(a-b)/a}.
double tail_constant_from_moment(const ModelParams& p, double c_moment);

} // namespace mfshe::pam
