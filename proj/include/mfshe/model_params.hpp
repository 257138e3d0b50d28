#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace mfshe {

// Parameter tuple (alpha, beta, d, t) for the fractional heat equations.
// Construction enforces 0 < beta < alpha <= 2, beta <= d, t > 0, d >= 1;
// everything downstream may assume a valid tuple. beta < alpha and beta <= d
// is the admissible region 0 < beta < min(alpha, d) together with its
// beta = d boundary, the space-time-white-noise endpoint of the Riesz
// family, where every derived quantity (spectral density, variance
// constant) stays finite because beta < alpha.
class ModelParams {
public:
    ModelParams(double alpha, double beta, int d, double t)
        : alpha_(alpha), beta_(beta), d_(d), t_(t) {
        if (!(d >= 1))
            throw std::invalid_argument("ModelParams: d must be a positive integer");
        if (!(alpha > 0.0 && alpha <= 2.0))
            throw std::invalid_argument("ModelParams: alpha must lie in (0, 2]");
        if (!(t > 0.0))
            throw std::invalid_argument("ModelParams: t must be positive");
        if (!(beta > 0.0 && beta < alpha && beta <= static_cast<double>(d)))
            throw std::invalid_argument(
                "ModelParams: need 0 < beta < alpha and beta <= d");
    }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    int d() const { return d_; }
    double t() const { return t_; }

    ModelParams with_t(double t_new) const {
        return ModelParams(alpha_, beta_, d_, t_new);
    }

    // Exponent of the variance growth law Var(Z_t) ~ t^{(alpha-beta)/alpha}.
    double variance_time_exponent() const { return (alpha_ - beta_) / alpha_; }

    bool operator==(const ModelParams& o) const {
        return alpha_ == o.alpha_ && beta_ == o.beta_ && d_ == o.d_ && t_ == o.t_;
    }

private:
    double alpha_;
    double beta_;
    int d_;
    double t_;
};

using Point = std::vector<double>;

inline double norm2(const Point& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

inline double norm_inf(const Point& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::fabs(v));
    return m;
}

} // namespace mfshe
