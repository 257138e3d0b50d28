#include "mfshe/pam.hpp"

#include <algorithm>
#include <cmath>

#include "mfshe/errors.hpp"
#include "mfshe/fft.hpp"
#include "mfshe/kernels.hpp"
#include "mfshe/rng.hpp"
#include "mfshe/special.hpp"

namespace mfshe::pam {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Torus-mode variances v_k (k = 0..n/2) with Var(dF_i) = dt * sum_k v_k over
// the Hermitian-extended range.
std::vector<double> torus_mode_variance(const ModelParams& p, double L, int n) {
    const double dk = 2.0 * M_PI / L;
    std::vector<double> v(n / 2 + 1);
    // zero mode: integral of |xi|^{beta-d} over the cell ball
    const int d = p.d();
    const double omega = special::sphere_surface(d);
    v[0] = omega * std::pow(M_PI / L, p.beta()) / p.beta();
    const double cell = std::pow(dk, d);
    for (int k = 1; k <= n / 2; ++k)
        v[k] = cell * std::pow(dk * k, p.beta() - d);
    return v;
}

double site_variance_rate(const std::vector<double>& v, int n) {
    // Hermitian extension: interior modes appear twice.
    double f0 = v[0] + v[n / 2];
    for (int k = 1; k < n / 2; ++k) f0 += 2.0 * v[k];
    return f0;
}

} // namespace

double stability_dt_bound(const ModelParams& params, double L, int n) {
    const auto v = torus_mode_variance(params, L, n);
    return 0.0625 / site_variance_rate(v, n);
}

PamConfig::PamConfig(const ModelParams& p, double L, int n, double dt_,
                     std::uint64_t s)
    : params(p), torus_side(L), grid_n(n), dt(dt_), seed(s) {
    if (p.d() != 1)
        throw GeometryError("pam: the torus simulator is one-dimensional");
    if (!is_pow2(n)) throw ConfigError("pam: grid_n must be a power of two");
    if (!(L > 0.0) || !(dt_ > 0.0)) throw ConfigError("pam: need L, dt > 0");
    const auto v = torus_mode_variance(p, L, n);
    f0_ = site_variance_rate(v, n);
    dt_bound_ = 0.0625 / f0_;
    if (dt > dt_bound_)
        throw ConfigError(
            "pam: dt exceeds the stability bound " + std::to_string(dt_bound_) +
            " (per-step noise sd must stay below 0.25)");
    steps_ = static_cast<int>(std::ceil(p.t() / dt - 1e-9));
    // land exactly on the horizon
    dt = p.t() / steps_;
}

TorusNoise::TorusNoise(const PamConfig& cfg) : cfg_(cfg) {
    const int n = cfg.grid_n;
    mode_var_ = torus_mode_variance(cfg.params, cfg.torus_side, n);

    // Min-image kernel factor values per site offset; the singular cell uses
    // its analytic average.
    const kernels::KernelFactorization fac(cfg.params);
    const double sp = cfg.spacing();
    h_grid_.resize(n);
    h_grid_[0] = fac.singular_cell_average(sp);
    for (int j = 1; j < n; ++j)
        h_grid_[j] = fac.full(std::min(j, n - j) * sp);
    h_hat_.resize(fft::complex_size({n}));
    fft::forward_r2c({n}, h_grid_.data(), h_hat_.data());
}

std::vector<double> TorusNoise::spectral_increment(int step) const {
    const int n = cfg_.grid_n;
    std::vector<double> g(n);
    rng::GaussianRng gauss(rng::derive_seed(cfg_.seed, 0x5Bu + step));
    for (auto& x : g) x = gauss.normal();
    std::vector<std::complex<double>> spec(fft::complex_size({n}));
    fft::forward_r2c({n}, g.data(), spec.data());
    const double nn = static_cast<double>(n);
    for (int k = 0; k <= n / 2; ++k)
        spec[k] *= std::sqrt(mode_var_[k] * cfg_.dt * nn);
    std::vector<double> out(n);
    fft::inverse_c2r({n}, spec.data(), out.data());
    for (auto& x : out) x /= nn;
    return out;
}

std::vector<double> TorusNoise::white_array(int step) const {
    const int n = cfg_.grid_n;
    std::vector<double> eta(n);
    rng::GaussianRng gauss(rng::derive_seed(cfg_.seed, 0x77AA00u + step));
    for (auto& x : eta) x = gauss.normal();
    return eta;
}

std::vector<double> TorusNoise::convolve_full(
    const std::vector<double>& eta) const {
    const int n = cfg_.grid_n;
    std::vector<std::complex<double>> spec(fft::complex_size({n}));
    fft::forward_r2c({n}, eta.data(), spec.data());
    for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= h_hat_[k];
    std::vector<double> out(n);
    fft::inverse_c2r({n}, spec.data(), out.data());
    const double scale =
        std::sqrt(cfg_.spacing() * cfg_.dt) / static_cast<double>(n);
    for (auto& x : out) x *= scale;
    return out;
}

std::vector<double> TorusNoise::convolve_truncated(
    const std::vector<double>& eta, double ell) const {
    const int n = cfg_.grid_n;
    const double sp = cfg_.spacing();
    // min-image support cannot exceed the torus half; at ell >= L/2 this
    // reproduces the full circular convolution
    const int m_ell =
        std::min(static_cast<int>(std::floor(ell / sp)), n / 2);
    const double scale = std::sqrt(sp * cfg_.dt);
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = h_grid_[0] * eta[i];
        for (int m = 1; m <= m_ell; ++m) {
            const int ip = i + m < n ? i + m : i + m - n;
            if (2 * m == n) {
                acc += h_grid_[m] * eta[ip];  // antipode enters once
                continue;
            }
            const int im = i - m >= 0 ? i - m : i - m + n;
            acc += h_grid_[m] * (eta[ip] + eta[im]);
        }
        out[i] = acc * scale;
    }
    return out;
}

std::vector<double> TorusNoise::covariance_spectral() const {
    const int n = cfg_.grid_n;
    std::vector<std::complex<double>> spec(fft::complex_size({n}));
    for (int k = 0; k <= n / 2; ++k) spec[k] = mode_var_[k];
    std::vector<double> cov(n);
    fft::inverse_c2r({n}, spec.data(), cov.data());
    return cov;
}

std::vector<double> TorusNoise::covariance_convolved(double ell) const {
    // cov(r) = spacing * sum_m h_l(m) h_l(m + r) (circular)
    const int n = cfg_.grid_n;
    const double sp = cfg_.spacing();
    const int m_ell = ell >= cfg_.torus_side
                          ? n / 2
                          : static_cast<int>(std::floor(ell / sp));
    std::vector<double> hl(n, 0.0);
    hl[0] = h_grid_[0];
    for (int m = 1; m <= m_ell; ++m) {
        hl[m] = h_grid_[m];
        hl[n - m] = h_grid_[n - m];
    }
    std::vector<std::complex<double>> spec(fft::complex_size({n}));
    fft::forward_r2c({n}, hl.data(), spec.data());
    for (auto& z : spec) z = std::norm(z);
    std::vector<double> cov(n);
    fft::inverse_c2r({n}, spec.data(), cov.data());
    const double scale = sp / static_cast<double>(n);
    for (auto& x : cov) x *= scale;
    return cov;
}

void step_pam(std::vector<double>& u, const PamConfig& cfg,
              const std::vector<double>& noise_field) {
    const int n = cfg.grid_n;
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = u[i] * (1.0 + noise_field[i]);
    std::vector<std::complex<double>> spec(fft::complex_size({n}));
    fft::forward_r2c({n}, v.data(), spec.data());
    const double dk = 2.0 * M_PI / cfg.torus_side;
    for (int k = 0; k <= n / 2; ++k)
        spec[k] *= std::exp(-cfg.dt * std::pow(dk * k, cfg.params.alpha()));
    fft::inverse_c2r({n}, spec.data(), u.data());
    double peak = 0.0;
    for (auto& x : u) {
        x /= static_cast<double>(n);
        peak = std::max(peak, std::fabs(x));
    }
    if (peak > 1e300)
        throw BlowupError("pam step overflow; dt too large or extreme draw");
}

PamRun simulate_pam(const PamConfig& cfg, NoiseRoute route) {
    const TorusNoise noise(cfg);
    std::vector<double> u(cfg.grid_n, 1.0);
    for (int s = 0; s < cfg.steps(); ++s) {
        const auto dF = route == NoiseRoute::Spectral
                            ? noise.spectral_increment(s)
                            : noise.convolve_full(noise.white_array(s));
        step_pam(u, cfg, dF);
    }
    PamRun run;
    run.nonpositive_sites =
        std::count_if(u.begin(), u.end(), [](double x) { return x <= 0.0; });
    run.final_field = std::move(u);
    return run;
}

double second_moment_recursion(const PamConfig& cfg, NoiseRoute route) {
    const int n = cfg.grid_n;
    const TorusNoise noise(cfg);
    const auto fgrid = route == NoiseRoute::Spectral
                           ? noise.covariance_spectral()
                           : noise.covariance_convolved(cfg.torus_side);
    std::vector<double> m(n, 1.0), v(n);
    std::vector<std::complex<double>> spec(fft::complex_size({n}));
    const double dk = 2.0 * M_PI / cfg.torus_side;
    std::vector<double> s2(n / 2 + 1);
    for (int k = 0; k <= n / 2; ++k)
        s2[k] = std::exp(-2.0 * cfg.dt * std::pow(dk * k, cfg.params.alpha()));
    for (int step = 0; step < cfg.steps(); ++step) {
        for (int i = 0; i < n; ++i) m[i] *= 1.0 + cfg.dt * fgrid[i];
        fft::forward_r2c({n}, m.data(), spec.data());
        for (int k = 0; k <= n / 2; ++k) spec[k] *= s2[k];
        fft::inverse_c2r({n}, spec.data(), m.data());
        for (auto& x : m) x /= static_cast<double>(n);
    }
    return m[0];
}

std::vector<TailCurvePoint> tail_probability(const PamConfig& cfg,
                                             const std::vector<double>& z_grid,
                                             std::int64_t replicas,
                                             ExecPolicy policy) {
    std::vector<double> logu(replicas);
    for_each_index(policy, replicas, [&](std::int64_t i) {
        PamConfig c = cfg;
        c.seed = rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
        const auto run = simulate_pam(c);
        logu[i] = std::log(std::max(run.final_field[0], 1e-300));
    });
    std::vector<TailCurvePoint> out;
    out.reserve(z_grid.size());
    for (double z : z_grid) {
        std::int64_t k = 0;
        for (double lv : logu)
            if (lv >= z) ++k;
        TailCurvePoint pt;
        pt.z = z;
        pt.probability = static_cast<double>(k) / replicas;
        pt.stderr_ = std::sqrt(
            std::max(pt.probability * (1.0 - pt.probability), 1e-300) /
            replicas);
        pt.censored = k < 20;
        out.push_back(pt);
    }
    return out;
}

double tail_constant_from_moment(const ModelParams& p, double c_moment) {
    const double a = p.alpha(), b = p.beta();
    const double s = (a - b) / (2.0 * a - b);
    return std::pow(s, (a - b) / a) *
           (1.0 - std::pow(s, (2.0 * a - b) / (a - b))) *
           std::pow(c_moment, -(a - b) / a);
}

} // namespace mfshe::pam
