#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "mfshe/kernels.hpp"
#include "mfshe/rng.hpp"
#include "oracle_brute.hpp"

using namespace mfshe;
using doctest::Approx;

TEST_CASE("model params accept exactly the admissible region") {
    CHECK_NOTHROW(ModelParams(2.0, 1.0, 1, 1.0));
    CHECK_NOTHROW(ModelParams(0.5, 0.25, 3, 0.1));
    CHECK_THROWS_AS(ModelParams(2.1, 1.0, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(2.0, 0.0, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(2.0, 1.0, 1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(2.0, 0.5, 0, 1.0), std::invalid_argument);

    // property sweep over the (alpha, beta) rectangle: the admissible region
    // plus its beta = d boundary (white-noise endpoint), nothing else
    rng::GaussianRng r(123);
    for (int i = 0; i < 2000; ++i) {
        const double alpha = 0.05 + 2.4 * r.uniform();
        const double beta = 0.05 + 2.9 * r.uniform();
        const int d = 1 + static_cast<int>(3.0 * r.uniform());
        const bool admissible =
            alpha <= 2.0 && beta < alpha && beta <= static_cast<double>(d);
        bool constructed = true;
        try {
            ModelParams p(alpha, beta, d, 1.0);
        } catch (const std::invalid_argument&) {
            constructed = false;
        }
        CHECK(constructed == admissible);
    }
}

TEST_CASE("levy exponent") {
    const ModelParams p(1.5, 0.5, 2, 1.0);
    CHECK(kernels::levy_exponent({0.6, 0.8}, p) == Approx(1.0));
    CHECK(kernels::levy_exponent({0.0, 0.0}, p) == 0.0);
    CHECK(kernels::levy_exponent({2.0, 0.0}, p) ==
          Approx(std::pow(2.0, 1.5)));
}

TEST_CASE("riesz constant against the gamma oracle") {
    CHECK(kernels::riesz_constant(ModelParams(2.0, 0.5, 1, 1.0)) ==
          Approx(oracle::kRieszConst_b05_d1).epsilon(1e-12));
    CHECK(kernels::riesz_constant(ModelParams(2.0, 1.0, 2, 1.0)) ==
          Approx(oracle::kRieszConst_b1_d2).epsilon(1e-12));
    CHECK(kernels::riesz_constant(ModelParams(2.0, 0.9, 1, 1.0)) ==
          Approx(oracle::kRieszConst_b09_d1).epsilon(1e-12));
}

TEST_CASE("riesz kernel: singularity, unit radius, homogeneity") {
    const ModelParams p(2.0, 0.5, 1, 1.0);
    CHECK_THROWS_AS(kernels::riesz_kernel({0.0}, p), SingularInputError);
    CHECK(kernels::riesz_kernel({1.0}, p) ==
          Approx(kernels::riesz_constant(p)));
    CHECK(kernels::riesz_kernel({4.0}, p) ==
          Approx(oracle::kRieszConst_b05_d1 / 2.0).epsilon(1e-12));
    rng::GaussianRng r(7);
    for (int i = 0; i < 200; ++i) {
        const double z = 0.1 + 5.0 * r.uniform();
        const double lam = 0.1 + 4.0 * r.uniform();
        CHECK(kernels::riesz_kernel({lam * z}, p) ==
              Approx(std::pow(lam, -p.beta()) *
                     kernels::riesz_kernel({z}, p)).epsilon(1e-13));
    }
}

TEST_CASE("spectral density: spot value, limits, shape") {
    const ModelParams p(2.0, 1.0, 1, 1.0);
    CHECK(kernels::z_spectral_density(1.0, p) ==
          Approx(oracle::kSpec_r1_a2_b1_t1).epsilon(1e-12));
    CHECK_THROWS_AS(kernels::z_spectral_density(0.0, p), SingularInputError);
    // t -> 0 kills the density at fixed r
    CHECK(kernels::z_spectral_density(1.0, ModelParams(2.0, 1.0, 1, 1e-12)) ==
          Approx(0.0).epsilon(1e-9));
    // large-r decay: S(r) r^{d+a-b} -> 1/2
    const ModelParams q(1.5, 0.5, 1, 1.0);
    const double r3 = 1e3;
    CHECK(kernels::z_spectral_density(r3, q) *
              std::pow(r3, q.d() + q.alpha() - q.beta()) ==
          Approx(0.5).epsilon(1e-6));
    // nonnegative and eventually decreasing
    double prev = kernels::z_spectral_density(1.0, q);
    for (double r = 1.2; r < 50.0; r *= 1.3) {
        const double v = kernels::z_spectral_density(r, q);
        CHECK(v >= 0.0);
        CHECK(v <= prev);
        prev = v;
    }
}

TEST_CASE("variance constant: oracle values and t-scaling") {
    const ModelParams p(1.5, 0.5, 1, 1.0);
    CHECK(kernels::variance_constant(p) ==
          Approx(oracle::kVarConst_a15_b05_d1).epsilon(1e-12));
    CHECK(kernels::paper_variance_prefactor(p) ==
          Approx(oracle::kVarConstPaper_a15_b05_d1).epsilon(1e-12));
    CHECK(kernels::variance_convention_ratio(p) ==
          Approx(oracle::kVarRatio_a15_b05_d1).epsilon(1e-12));
    CHECK(kernels::variance_constant(ModelParams(2.0, 1.0, 1, 1.0)) ==
          Approx(oracle::kVarConst_a2_b1_d1).epsilon(1e-12));
    CHECK(kernels::variance_constant(ModelParams(2.0, 0.5, 2, 1.0)) ==
          Approx(oracle::kVarConst_a2_b05_d2).epsilon(1e-12));

    // Var(Z_{2t}) / Var(Z_t) = 2^{(a-b)/a} exactly, for random params
    rng::GaussianRng r(99);
    for (int i = 0; i < 50; ++i) {
        const double alpha = 0.3 + 1.7 * r.uniform();
        const double beta =
            std::min(alpha * (0.05 + 0.9 * r.uniform()), 0.99);
        const double t = 0.1 + 3.0 * r.uniform();
        const ModelParams a(alpha, beta, 1, t);
        const ModelParams b = a.with_t(2.0 * t);
        CHECK(kernels::variance_of_z(b) / kernels::variance_of_z(a) ==
              Approx(std::pow(2.0, (a.alpha() - a.beta()) / a.alpha()))
                  .epsilon(1e-12));
    }
    // exponent arithmetic: (a-b)/a = 1/2 at (2,1)
    CHECK(ModelParams(2.0, 1.0, 1, 1.0).variance_time_exponent() ==
          Approx(0.5));

    // independent radial quadrature of the spectral integral (brute oracle)
    const long double head = oracle::simpson(
        [](long double v) {
            const long double r = v * v;  // v = r^{1/2}, beta = 1/2
            const long double x = 2.0L * powl(r, 1.5L);
            return 2.0L * (x < 1e-14L ? 1.0L : -expm1l(-x) / x);
        },
        0.0L, powl(0.3L, 0.5L), 1e-18L);
    const long double body = oracle::simpson(
        [](long double r) {
            return -expm1l(-2.0L * powl(r, 1.5L)) * 0.5L * powl(r, -2.0L);
        },
        0.3L, 60.0L, 1e-18L);
    const long double tail = powl(60.0L, -1.0L) / 2.0L;
    CHECK(kernels::variance_constant(p) ==
          Approx(static_cast<double>(2.0L * (head + body + tail)))
              .epsilon(1e-10));
}

TEST_CASE("stable density: closed forms and inversion oracle") {
    const ModelParams g(2.0, 0.5, 1, 1.0);
    CHECK(kernels::stable_density_radial(0.0, 1.0, g) ==
          Approx(1.0 / std::sqrt(4.0 * M_PI)).epsilon(1e-13));
    const ModelParams c(1.0, 0.5, 1, 1.0);
    CHECK(kernels::stable_density_radial(0.0, 1.0, c) ==
          Approx(1.0 / M_PI).epsilon(1e-13));
    const ModelParams s(1.5, 0.5, 1, 1.0);
    CHECK(kernels::stable_density_radial(0.0, 1.0, s) ==
          Approx(oracle::kStableDensity_a15_x0).epsilon(1e-10));
    CHECK(kernels::stable_density_radial(1.0, 1.0, s) ==
          Approx(oracle::kStableDensity_a15_x1).epsilon(1e-10));
}

TEST_CASE("stable density integrates to one") {
    for (const double alpha : {1.0, 1.5, 2.0}) {
        for (const int d : {1, 2}) {
            const ModelParams p(alpha, 0.4, d, 1.0);
            const double s = 1.0;
            const double omega = special::sphere_surface(d);
            const auto radial = [&](long double r) {
                return kernels::stable_density_radial(static_cast<double>(r),
                                                      s, p) *
                       powl(r, d - 1);
            };
            // split at the bump edge so the adaptive rule cannot step over
            // the concentrated core; Richardson-extrapolate the power tail
            const auto mass_to = [&](double R) {
                return static_cast<double>(
                    omega * (oracle::simpson(radial, 0.0L, 30.0L, 1e-10L) +
                             oracle::simpson(radial, 30.0L,
                                             static_cast<long double>(R),
                                             1e-10L)));
            };
            const double m_half = mass_to(200.0), m_full = mass_to(400.0);
            const double mass =
                m_full + (m_full - m_half) / (std::pow(2.0, alpha) - 1.0);
            CHECK(mass == Approx(1.0).epsilon(1e-4));
        }
    }
}

TEST_CASE("stable density envelope and semigroup") {
    // two-sided envelope p ~ min(s^{-d/a}, s/|x|^{d+a}) for alpha < 2
    for (const double alpha : {1.2, 1.5}) {
        const ModelParams p(alpha, 0.4, 1, 1.0);
        double c1 = 1e300, c2 = 0.0;
        for (const double s : {0.1, 1.0, 10.0}) {
            for (double x = 0.0; x <= 100.0; x += 12.5) {
                const double env = std::min(std::pow(s, -1.0 / alpha),
                                            s / std::pow(std::max(x, 1e-9),
                                                         1.0 + alpha));
                const double ratio =
                    kernels::stable_density_radial(x, s, p) / env;
                c1 = std::min(c1, ratio);
                c2 = std::max(c2, ratio);
            }
        }
        CHECK(c1 > 0.0);
        CHECK(std::isfinite(c2));
        CHECK(c2 < 1e3);
    }
    // semigroup: int p_s(x-y) p_s(y) dy = p_2s(x), 5 spot points
    const ModelParams p(1.5, 0.5, 1, 1.0);
    const double s = 0.7;
    for (const double x : {0.0, 0.5, 1.0, 2.0, 5.0}) {
        const long double conv = oracle::simpson(
            [&](long double y) {
                return kernels::stable_density_radial(
                           std::fabs(x - static_cast<double>(y)), s, p) *
                       kernels::stable_density_radial(
                           std::fabs(static_cast<double>(y)), s, p);
            },
            -60.0L, 60.0L, 1e-10L);
        CHECK(static_cast<double>(conv) ==
              Approx(kernels::stable_density_radial(x, 2.0 * s, p))
                  .epsilon(1e-3));
    }
}

TEST_CASE("kernel factorization h and its truncation") {
    const ModelParams p(1.5, 0.5, 1, 1.0);
    kernels::KernelFactorization fac(p, 4.0);
    const double amp = kernels::factor_amplitude(p);
    CHECK(fac.full(2.0) == Approx(amp * std::pow(2.0, -0.75)).epsilon(1e-13));
    CHECK(fac.truncated(3.9) == Approx(fac.full(3.9)));
    CHECK(fac.truncated(4.1) == 0.0);
    CHECK(fac.remainder(4.1) == Approx(fac.full(4.1)));
    CHECK(fac.remainder(3.9) == 0.0);
    CHECK_THROWS_AS(fac.full(0.0), SingularInputError);
    // d=1 cell average is exact: (1/h) * 2 int_0^{h/2} amp x^{-3/4} dx
    const double h = 0.25;
    const double exact = amp / h * 2.0 * std::pow(h / 2.0, 0.25) / 0.25;
    CHECK(fac.singular_cell_average(h) == Approx(exact).epsilon(1e-12));
}

TEST_CASE("factorization squares back to the riesz kernel: h * h = f") {
    // Closed form at (beta, d) = (1/2, 1): the convolution of two
    // |x|^{-3/4} powers is (B(1/4,1/4) + 2 B(1/2,1/4)) |x|^{-1/2}, so the
    // amplitude must satisfy lambda^2 * that = c_{beta,d}.
    const ModelParams p(1.5, 0.5, 1, 1.0);
    const double lam = kernels::factor_amplitude(p);
    auto beta_fn = [](double a, double b) {
        return std::exp(special::log_gamma(a) + special::log_gamma(b) -
                        special::log_gamma(a + b));
    };
    const double conv_const =
        beta_fn(0.25, 0.25) + 2.0 * beta_fn(0.5, 0.25);
    CHECK(lam * lam * conv_const ==
          Approx(kernels::riesz_constant(p)).epsilon(1e-12));

    // general d = 1 identity, property-tested over beta: the convolution of
    // two |x|^{-(1+beta)/2} powers is
    //   [B((1-b)/2, (1-b)/2) + 2 B((1-b)/2, b)] |x|^{-beta},
    // so lambda^2 times that bracket must reproduce c_{beta,1}
    rng::GaussianRng r(55);
    for (int i = 0; i < 100; ++i) {
        const double b = 0.05 + 0.9 * r.uniform();
        const ModelParams q(2.0, b, 1, 1.0);
        const double lam2 = kernels::factor_amplitude(q);
        const double bracket =
            beta_fn(0.5 * (1.0 - b), 0.5 * (1.0 - b)) +
            2.0 * beta_fn(0.5 * (1.0 - b), b);
        CHECK(lam2 * lam2 * bracket ==
              Approx(kernels::riesz_constant(q)).epsilon(1e-10));
    }
}
