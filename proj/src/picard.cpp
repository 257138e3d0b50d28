#include "mfshe/picard.hpp"

#include <cmath>

#include "mfshe/errors.hpp"
#include "mfshe/fft.hpp"
#include "mfshe/rng.hpp"

namespace mfshe::pam {

struct PicardEngine::Impl {
    PamConfig cfg;
    double ell;
    int n = 0;
    int T = 0;
    // w_hat[s'][s - s' - 1]: spectrum of the windowed kernel from source
    // step s' to target step s (0-based steps; target time t_{s+1}).
    std::vector<std::vector<std::vector<std::complex<double>>>> w_hat;

    Impl(const PamConfig& c, double l) : cfg(c), ell(l), n(c.grid_n),
                                         T(c.steps()) {}
};

PicardEngine::PicardEngine(const PamConfig& cfg, double ell)
    : impl_(std::make_unique<Impl>(cfg, ell)) {
    const int n = impl_->n, T = impl_->T;
    const double sp = cfg.spacing();
    const double dk = 2.0 * M_PI / cfg.torus_side;
    const double alpha = cfg.params.alpha();
    const std::size_t nc = fft::complex_size({n});

    // Base kernels per time difference: p_dt(j) on the torus grid from the
    // exact spectral multiplier (consistent with the stepper's semigroup).
    std::vector<std::vector<double>> base(T);
    for (int lag = 1; lag <= T; ++lag) {
        std::vector<std::complex<double>> spec(nc);
        const double dtau = lag * cfg.dt;
        for (int k = 0; k <= n / 2; ++k)
            spec[k] = std::exp(-dtau * std::pow(dk * k, alpha));
        base[lag - 1].resize(n);
        fft::inverse_c2r({n}, spec.data(), base[lag - 1].data());
        for (auto& x : base[lag - 1]) x /= static_cast<double>(n);
    }

    impl_->w_hat.resize(T);
    std::vector<double> w(n);
    for (int src = 0; src < T; ++src) {
        impl_->w_hat[src].resize(T - src);
        for (int tgt = src; tgt < T; ++tgt) {
            const double t_target = (tgt + 1) * cfg.dt;
            const double half_width =
                ell * std::pow(t_target, 1.0 / alpha);
            const int m_win = std::min(
                n / 2, static_cast<int>(std::floor(half_width / sp)));
            const auto& b = base[tgt - src];
            std::fill(w.begin(), w.end(), 0.0);
            w[0] = b[0];
            for (int j = 1; j <= m_win; ++j) {
                w[j] = b[j];
                w[n - j] = b[n - j];
            }
            auto& what = impl_->w_hat[src][tgt - src];
            what.resize(nc);
            fft::forward_r2c({n}, w.data(), what.data());
        }
    }
}

PicardEngine::~PicardEngine() = default;
PicardEngine::PicardEngine(PicardEngine&&) noexcept = default;

const PamConfig& PicardEngine::config() const { return impl_->cfg; }

PicardEngine::Replica PicardEngine::run(int m, std::uint64_t replica_seed,
                                        bool with_full) const {
    const int n = impl_->n, T = impl_->T;
    const std::size_t nc = fft::complex_size({n});
    PamConfig cfg = impl_->cfg;
    cfg.seed = replica_seed;
    const TorusNoise noise(cfg);

    // Shared eta per step; truncated and full noise fields derived from it.
    std::vector<std::vector<double>> dF_ell(T);
    std::vector<std::vector<double>> dF_full(with_full ? T : 0);
    for (int s = 0; s < T; ++s) {
        const auto eta = noise.white_array(s);
        dF_ell[s] = noise.convolve_truncated(eta, impl_->ell);
        if (with_full) dF_full[s] = noise.convolve_full(eta);
    }

    Replica rep;
    rep.levels.reserve(m + 1);
    // level 0: constant one at every time
    std::vector<std::vector<double>> prev(T + 1, std::vector<double>(n, 1.0));
    rep.levels.push_back(prev.back());

    std::vector<std::complex<double>> src_spec(nc);
    std::vector<double> prod(n);
    for (int level = 1; level <= m; ++level) {
        // acc[s]: spectral accumulator for the target step s (time t_{s+1})
        std::vector<std::vector<std::complex<double>>> acc(
            T, std::vector<std::complex<double>>(nc, {0.0, 0.0}));
        for (int src = 0; src < T; ++src) {
            for (int i = 0; i < n; ++i)
                prod[i] = prev[src][i] * dF_ell[src][i];
            fft::forward_r2c({n}, prod.data(), src_spec.data());
            for (int tgt = src; tgt < T; ++tgt) {
                const auto& what = impl_->w_hat[src][tgt - src];
                auto& a = acc[tgt];
                for (std::size_t k = 0; k < nc; ++k)
                    a[k] += what[k] * src_spec[k];
            }
        }
        std::vector<std::vector<double>> cur(T + 1,
                                             std::vector<double>(n, 1.0));
        std::vector<double> conv(n);
        for (int tgt = 0; tgt < T; ++tgt) {
            fft::inverse_c2r({n}, acc[tgt].data(), conv.data());
            auto& field = cur[tgt + 1];
            for (int i = 0; i < n; ++i)
                field[i] = 1.0 + conv[i] / static_cast<double>(n);
        }
        rep.levels.push_back(cur.back());
        prev = std::move(cur);
    }

    if (with_full) {
        std::vector<double> u(n, 1.0);
        for (int s = 0; s < T; ++s) step_pam(u, cfg, dF_full[s]);
        rep.full_field = std::move(u);
    }
    return rep;
}

std::vector<double> picard_iterate(const PicardSpec& spec, const PamConfig& cfg,
                                   const std::vector<int>& site_indices,
                                   std::uint64_t seed) {
    const double margin =
        2.0 * spec.ell *
            (std::pow(cfg.params.t(), 1.0 / cfg.params.alpha()) + 1.0);
    if (!(margin <= cfg.torus_side))
        throw GeometryError(
            "picard_iterate: localization boxes plus margin exceed the torus");
    const PicardEngine engine(cfg, spec.ell);
    const auto rep = engine.run(spec.m, seed, false);
    std::vector<double> out;
    out.reserve(site_indices.size());
    for (int idx : site_indices) out.push_back(rep.levels[spec.m][idx]);
    return out;
}

CouplingGap coupling_error(const PicardSpec& spec, const PamConfig& cfg,
                           std::int64_t replicas, std::uint64_t seed,
                           ExecPolicy policy) {
    const PicardEngine engine(cfg, spec.ell);
    const int center = cfg.grid_n / 2;
    std::vector<double> gaps(replicas);
    for_each_index(policy, replicas, [&](std::int64_t i) {
        const auto rep = engine.run(
            spec.m, rng::derive_seed(seed, static_cast<std::uint64_t>(i)),
            true);
        const double g = rep.full_field[center] - rep.levels[spec.m][center];
        gaps[i] = g * g;
    });
    const auto ms = mean_stderr(gaps);
    return {ms.mean, ms.stderr_};
}

} // namespace mfshe::pam
