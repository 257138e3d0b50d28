#include "mfshe/feynman_kac.hpp"

#include <cmath>

#include "mfshe/kernels.hpp"

namespace mfshe::pam {

double sym_stable_standard(rng::GaussianRng& rng, double alpha) {
    if (alpha == 2.0) {
        // cf e^{-xi^2}: N(0, 2)
        return std::sqrt(2.0) * rng.normal();
    }
    if (alpha == 1.0) {
        return std::tan(M_PI * (rng.uniform_open() - 0.5));
    }
    const double v = M_PI * (rng.uniform_open() - 0.5);
    double w;
    do {
        w = rng.exponential();
    } while (w == 0.0);
    const double a = alpha * v;
    return std::sin(a) / std::pow(std::cos(v), 1.0 / alpha) *
           std::pow(std::cos(v - a) / w, (1.0 - alpha) / alpha);
}

double positive_stable_standard(rng::GaussianRng& rng, double rho) {
    const double theta = M_PI * rng.uniform_open();
    double w;
    do {
        w = rng.exponential();
    } while (w == 0.0);
    const double a = std::sin((1.0 - rho) * theta) *
                     std::pow(std::sin(rho * theta), rho / (1.0 - rho)) /
                     std::pow(std::sin(theta), 1.0 / (1.0 - rho));
    return std::pow(a / w, (1.0 - rho) / rho);
}

void stable_increment(rng::GaussianRng& rng, double alpha, int d, double dt,
                      double* out) {
    if (d == 1) {
        out[0] = std::pow(dt, 1.0 / alpha) * sym_stable_standard(rng, alpha);
        return;
    }
    double subordinator;
    if (alpha == 2.0) {
        subordinator = 2.0 * dt;  // B(2t) realizes cf e^{-t |xi|^2}
    } else {
        // S_dt = 2 dt^{2/alpha} S, S positive (alpha/2)-stable standard
        subordinator = 2.0 * std::pow(dt, 2.0 / alpha) *
                       positive_stable_standard(rng, 0.5 * alpha);
    }
    const double sd = std::sqrt(subordinator);
    for (int i = 0; i < d; ++i) out[i] = sd * rng.normal();
}

MomentEstimate fk_moment_with_kernel(
    int k, const ModelParams& params, std::int64_t n_paths, double dt_path,
    const std::function<double(double)>& radial_kernel, std::uint64_t seed,
    ExecPolicy policy) {
    if (k < 2) throw std::invalid_argument("fk_moment: k >= 2");
    if (!(dt_path > 0.0) || n_paths < 1)
        throw std::invalid_argument("fk_moment: bad path settings");
    const int d = params.d();
    const double alpha = params.alpha();
    const int steps = static_cast<int>(std::ceil(params.t() / dt_path - 1e-9));
    const double dt = params.t() / steps;

    std::vector<double> vals(n_paths);
    for_each_index(policy, n_paths, [&](std::int64_t g) {
        rng::GaussianRng rng(rng::derive_seed(seed, static_cast<std::uint64_t>(g)));
        std::vector<double> pos(static_cast<std::size_t>(k) * d, 0.0);
        std::vector<double> inc(d);
        double action = 0.0;
        for (int s = 0; s < steps; ++s) {
            // left-point interaction of the current configuration, summed
            // over unordered pairs (the Ito moment formula; the discrete
            // second-moment recursion pins this normalization)
            double inter = 0.0;
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j) {
                    double r2 = 0.0;
                    for (int ax = 0; ax < d; ++ax) {
                        const double dx = pos[i * d + ax] - pos[j * d + ax];
                        r2 += dx * dx;
                    }
                    inter += radial_kernel(std::sqrt(r2));
                }
            action += inter * dt;
            for (int i = 0; i < k; ++i) {
                stable_increment(rng, alpha, d, dt, inc.data());
                for (int ax = 0; ax < d; ++ax) pos[i * d + ax] += inc[ax];
            }
        }
        vals[g] = std::exp(action);
    });

    const auto ms = mean_stderr(vals);
    MomentEstimate est;
    est.k = k;
    est.value = ms.mean;
    est.stderr_ = ms.stderr_;
    est.n_paths = n_paths;
    est.dt_path = dt;
    est.variance_warning = ms.stderr_ > 0.5 * ms.mean;
    return est;
}

MomentEstimate fk_moment(int k, const ModelParams& params,
                         std::int64_t n_paths, double dt_path, double cap,
                         std::uint64_t seed, ExecPolicy policy) {
    if (!(cap > 0.0)) throw std::invalid_argument("fk_moment: cap > 0");
    const double c = kernels::riesz_constant(params);
    const double beta = params.beta();
    auto est = fk_moment_with_kernel(
        k, params, n_paths, dt_path,
        [c, beta, cap](double r) {
            return r == 0.0 ? cap : std::min(c * std::pow(r, -beta), cap);
        },
        seed, policy);
    est.cap = cap;
    return est;
}

} // namespace mfshe::pam
