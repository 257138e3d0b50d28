#include "mfshe/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mfshe/circulant.hpp"
#include "mfshe/covariance.hpp"
#include "mfshe/experiments.hpp"
#include "mfshe/feynman_kac.hpp"
#include "mfshe/field_samplers.hpp"
#include "mfshe/kernels.hpp"
#include "mfshe/pam.hpp"
#include "mfshe/picard.hpp"
#include "mfshe/rng.hpp"
#include "mfshe/tailfit.hpp"

namespace mfshe::acceptance {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit line_fit(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LineFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

// Empirical variance of single-site draws from the exact sampler.
struct VarEstimate {
    double var = 0.0;
    double se = 0.0;
};

VarEstimate single_site_variance(const ModelParams& p, std::int64_t replicas,
                                 std::uint64_t seed, ExecPolicy policy) {
    field::LatticeSpec lat;
    lat.d = p.d();
    lat.origin.assign(p.d(), 0.0);
    lat.spacing = 1.0;
    lat.shape.assign(p.d(), 1);
    const field::CirculantEmbedding emb(p, lat);
    std::vector<double> draws(replicas);
    for_each_index(policy, replicas, [&](std::int64_t i) {
        draws[i] = emb.sample(rng::derive_seed(seed, i)).values[0];
    });
    const auto ms = mean_stderr(draws);
    double ss = 0.0;
    for (double v : draws) ss += (v - ms.mean) * (v - ms.mean);
    VarEstimate est;
    est.var = ss / static_cast<double>(replicas - 1);
    est.se = est.var * std::sqrt(2.0 / static_cast<double>(replicas - 1));
    return est;
}

} // namespace

CriterionResult variance_law(const Options& opt) {
    CriterionResult res{1, "variance law (t-scaling of Var Z_t)", true, ""};
    const std::int64_t R = 200000;
    struct Case {
        double alpha, beta;
        int d;
    };
    const Case cases[] = {{2.0, 1.0, 1}, {1.5, 0.5, 1}, {2.0, 0.5, 2}};
    std::ostringstream detail;
    int case_idx = 0;
    for (const auto& c : cases) {
        const ModelParams p1(c.alpha, c.beta, c.d, 1.0);
        const ModelParams p2(c.alpha, c.beta, c.d, 2.0);
        const auto v1 = single_site_variance(
            p1, R, rng::derive_seed(opt.seed, 150 + case_idx), opt.policy);
        const auto v2 = single_site_variance(
            p2, R, rng::derive_seed(opt.seed, 250 + case_idx), opt.policy);
        const double target = field::z_variance(p1);
        const bool level_ok = std::fabs(v1.var - target) <= 3.0 * v1.se;
        const double ratio = v2.var / v1.var;
        const double ratio_target = std::pow(2.0, (c.alpha - c.beta) / c.alpha);
        const double ratio_se =
            ratio * std::sqrt(2.0 * 2.0 / static_cast<double>(R - 1));
        const bool ratio_ok = std::fabs(ratio - ratio_target) <= 3.0 * ratio_se;
        if (!(level_ok && ratio_ok)) res.pass = false;
        detail << "(" << c.alpha << "," << c.beta << "," << c.d
               << "): var=" << fmt(v1.var) << " vs " << fmt(target)
               << " (3se=" << fmt(3.0 * v1.se) << "), ratio=" << fmt(ratio)
               << " vs " << fmt(ratio_target) << "; ";
        ++case_idx;
    }
    res.detail = detail.str();
    return res;
}

CriterionResult structure_function_exponent(const Options&) {
    CriterionResult res{2, "structure-function exponent alpha-beta", true, ""};
    const ModelParams p(1.5, 0.5, 1, 2.0);
    std::vector<double> lx, ly;
    for (int j = -6; j <= -1; ++j) {
        const double lag = std::ldexp(1.0, j);
        lx.push_back(std::log(lag));
        ly.push_back(std::log(field::z_structure_function(lag, p)));
    }
    const auto fit = line_fit(lx, ly);
    const double target = p.alpha() - p.beta();
    res.pass = std::fabs(fit.slope - target) <= 0.05;
    res.detail = "slope=" + fmt(fit.slope) + " target=" + fmt(target) +
                 " tol=0.05";
    return res;
}

CriterionResult correlation_decay(const Options&) {
    CriterionResult res{3, "correlation decay exponent -beta", true, ""};
    const ModelParams p(1.5, 0.5, 1, 1.0);
    std::vector<double> lx, ly;
    for (int j = 0; j <= 8; ++j) {
        const double lag = 10.0 * std::pow(100.0, j / 8.0);
        lx.push_back(std::log(lag));
        ly.push_back(std::log(field::z_correlation(lag, p)));
    }
    const auto fit = line_fit(lx, ly);
    res.pass = std::fabs(fit.slope + p.beta()) <= 0.1;
    res.detail = "slope=" + fmt(fit.slope) + " target=" + fmt(-p.beta()) +
                 " tol=0.1";
    return res;
}

CriterionResult linear_dimension_law(const Options& opt) {
    CriterionResult res{4, "linear dimension law (d - gamma) v 0", true, ""};
    const ModelParams p(2.0, 0.5, 1, 1.0);
    const std::vector<double> gammas{0.25, 0.5, 0.75, 1.2};
    const auto rows = harness::linear_dimension_table(
        p, 6, 14, gammas, 8, 4096, rng::derive_seed(opt.seed, 4), opt.policy);
    std::ostringstream detail;
    for (const auto& row : rows) {
        if (row.gamma < 1.0) {
            const double target = 1.0 - row.gamma;
            const bool ok = std::fabs(row.fit.estimate - target) <= 0.15;
            if (!ok) res.pass = false;
            detail << "g=" << row.gamma << ": " << fmt(row.fit.estimate)
                   << " vs " << fmt(target) << "; ";
        } else {
            // supercritical gamma: statistically zero (counts die out or the
            // fitted slope is indistinguishable from 0)
            const bool ok = row.fit.degenerate ||
                            std::fabs(row.fit.estimate) <=
                                std::max(row.fit.band, 0.1);
            if (!ok) res.pass = false;
            detail << "g=" << row.gamma << ": "
                   << (row.fit.degenerate ? "died out"
                                          : fmt(row.fit.estimate))
                   << " (expect 0); ";
        }
    }
    res.detail = detail.str();
    return res;
}

CriterionResult limsup_constant(const Options& opt) {
    CriterionResult res{5, "limsup constant sqrt(2d)", true, ""};
    const ModelParams p(2.0, 0.5, 1, 1.0);
    const auto maxima = harness::limsup_table(p, 12, 14, 4096,
                                              rng::derive_seed(opt.seed, 5),
                                              opt.policy);
    const double target = std::sqrt(2.0);
    std::ostringstream detail;
    for (const auto& m : maxima) {
        const bool ok = std::fabs(m.ratio - target) <= 0.2 * target;
        if (!ok) res.pass = false;
        detail << "n=" << m.n << ": " << fmt(m.ratio) << "; ";
    }
    res.detail = detail.str() + "target " + fmt(target) + " +- " +
                 fmt(0.2 * target);
    return res;
}

CriterionResult estimator_ground_truth(const Options& opt) {
    CriterionResult res{6, "dimension estimator ground truth", true, ""};
    std::ostringstream detail;
    // Uniform skeletons: counts are deterministic.
    for (int d = 1; d <= 2; ++d) {
        for (double theta : {0.25, 0.5, 0.75}) {
            const int n_lo = d == 1 ? 6 : 5;
            const int n_hi = d == 1 ? 14 : 9;
            std::vector<std::pair<int, double>> counts;
            for (int n = n_lo; n <= n_hi; ++n) {
                const auto axis = fractal::skeleton_axis({theta, n, d});
                double cnt = static_cast<double>(axis.size());
                for (int ax = 1; ax < d; ++ax)
                    cnt *= static_cast<double>(axis.size());
                counts.emplace_back(n, cnt);  // anchors of index n (shell n+1)
            }
            const auto fit =
                fractal::fit_dimension_from_counts(counts, n_lo, n_hi);
            const double target = d * (1.0 - theta);
            const bool ok =
                std::fabs(fit.estimate - target) <= std::max(fit.band, 0.05);
            if (!ok) res.pass = false;
            detail << "skel d=" << d << " th=" << theta << ": "
                   << fmt(fit.estimate) << "+-" << fmt(fit.band) << " vs "
                   << fmt(target) << "; ";
        }
    }
    // Synthetic Bernoulli occupancy, direct Binomial counts up to shell 20.
    {
        const double gamma = 0.3;
        rng::GaussianRng grng(rng::derive_seed(opt.seed, 6));
        std::vector<std::pair<int, double>> counts;
        for (int n = 8; n <= 20; ++n) {
            const double sites =
                2.0 * (std::exp(static_cast<double>(n)) - std::exp(n - 1.0));
            const double prob = std::exp(-gamma * n);
            const double mean = sites * prob;
            const double sd = std::sqrt(sites * prob * (1.0 - prob));
            const double draw = std::max(0.0, mean + sd * grng.normal());
            counts.emplace_back(n, std::floor(draw));
        }
        const auto fit = fractal::fit_dimension_from_counts(counts, 8, 20);
        const bool ok = std::fabs(fit.estimate - (1.0 - gamma)) <= 0.1;
        if (!ok) res.pass = false;
        detail << "bernoulli g=0.3: " << fmt(fit.estimate) << " vs 0.7";
    }
    res.detail = detail.str();
    return res;
}

CriterionResult pam_discretization_check(const Options& opt) {
    CriterionResult res{7, "pam discretization within recorded allowance",
                        true, ""};
    const ModelParams p(1.5, 0.5, 1, 0.5);
    const int n = 256;
    const double L = 32.0;
    const double dt_ref = 0.25 * pam::stability_dt_bound(p, L, n);
    const double dt_sim = dt_ref * opt.dt_scale;
    pam::PamConfig base(p, L, n, dt_ref, 0);
    pam::PamConfig fine_dt(p, L, n, dt_ref / 2.0, 0);
    pam::PamConfig sim(p, L, n, dt_sim, 0);
    const double m_base = pam::second_moment_recursion(base);
    const double allowance =
        2.0 * std::fabs(m_base - pam::second_moment_recursion(fine_dt));
    const double m_sim = pam::second_moment_recursion(sim);
    res.pass = std::fabs(m_sim - m_base) <= allowance;
    res.detail = "recursion at configured dt " + fmt(m_sim) +
                 " vs reference " + fmt(m_base) + " (allowance " +
                 fmt(allowance) + ")";
    return res;
}

CriterionResult pam_mean_second_moment(const Options& opt) {
    CriterionResult res{7, "pam mean and second moment vs feynman-kac", true,
                        ""};
    const ModelParams p(1.5, 0.5, 1, 0.5);
    const int n = 256;
    const double L = 32.0;
    const double dt_ref = 0.25 * pam::stability_dt_bound(p, L, n);
    const double dt_sim = dt_ref * opt.dt_scale;

    // Monte Carlo over torus replicas at the (possibly perturbed) dt.
    const std::int64_t R = 40000;
    std::vector<double> u1(R), u2(R);
    for_each_index(opt.policy, R, [&](std::int64_t i) {
        pam::PamConfig cfg(p, L, n, dt_sim,
                           rng::derive_seed(opt.seed, 7000000 + i));
        const auto run = pam::simulate_pam(cfg);
        u1[i] = run.final_field[0];
        u2[i] = run.final_field[0] * run.final_field[0];
    });
    const auto m1 = mean_stderr(u1);
    const auto m2 = mean_stderr(u2);
    const bool mean_ok = std::fabs(m1.mean - 1.0) <= 3.0 * m1.stderr_;

    // Feynman-Kac oracle; cap * dt_path stays small, and the recorded
    // allowance includes the dt-halving and cap-tenthing refinements.
    const double dtp = 2e-4, cap = 1e2;
    const auto fk = pam::fk_moment(2, p, 200000, dtp, cap,
                                   rng::derive_seed(opt.seed, 7100), opt.policy);
    const auto fk_dt = pam::fk_moment(2, p, 100000, dtp / 2.0, cap,
                                      rng::derive_seed(opt.seed, 7101),
                                      opt.policy);
    const auto fk_cap = pam::fk_moment(2, p, 100000, dtp, cap / 10.0,
                                       rng::derive_seed(opt.seed, 7102),
                                       opt.policy);
    const double fk_allow = std::fabs(fk.value - fk_dt.value) +
                            std::fabs(fk.value - fk_cap.value) +
                            fk_dt.stderr_ + fk_cap.stderr_;

    // Discretization allowance of the torus scheme at the REFERENCE dt,
    // from deterministic second-moment recursions under refinement.
    pam::PamConfig base(p, L, n, dt_ref, 0);
    pam::PamConfig fine_dt(p, L, n, dt_ref / 2.0, 0);
    pam::PamConfig fine_h(p, L, 2 * n, dt_ref, 0);
    pam::PamConfig fine_L(p, 2.0 * L, 2 * n, dt_ref, 0);
    const double m_base = pam::second_moment_recursion(base);
    const double pam_allow =
        2.0 * (std::fabs(m_base - pam::second_moment_recursion(fine_dt)) +
               std::fabs(m_base - pam::second_moment_recursion(fine_h)) +
               std::fabs(m_base - pam::second_moment_recursion(fine_L)));

    const double tol =
        3.0 * std::sqrt(m2.stderr_ * m2.stderr_ + fk.stderr_ * fk.stderr_) +
        pam_allow + fk_allow;
    const bool second_ok = std::fabs(m2.mean - fk.value) <= tol;
    const auto disc = pam_discretization_check(opt);
    res.pass = mean_ok && second_ok && disc.pass;
    res.detail = "mean=" + fmt(m1.mean) + " (3se=" + fmt(3.0 * m1.stderr_) +
                 "); E[u^2]=" + fmt(m2.mean) + " vs fk=" + fmt(fk.value) +
                 " (tol=" + fmt(tol) + ", pam_allow=" + fmt(pam_allow) +
                 ", recursion=" + fmt(m_base) + "); " + disc.detail;
    return res;
}

CriterionResult intermittency_exponent(const Options& opt) {
    CriterionResult res{8, "intermittency exponent (2a-b)/(a-b)", true, ""};
    const ModelParams p(1.5, 0.5, 1, 0.25);
    const double dtp = 2e-4, cap = 1e2;
    const std::int64_t paths[] = {60000, 80000, 100000, 120000};
    std::vector<double> lx, ly;
    std::ostringstream detail;
    for (int k = 2; k <= 5; ++k) {
        const auto est =
            pam::fk_moment(k, p, paths[k - 2], dtp, cap,
                           rng::derive_seed(opt.seed, 800 + k), opt.policy);
        lx.push_back(std::log(static_cast<double>(k)));
        ly.push_back(std::log(std::log(est.value)));
        detail << "k=" << k << ": log fk=" << fmt(std::log(est.value))
               << (est.variance_warning ? "(var-warn)" : "") << "; ";
    }
    const auto fit = line_fit(lx, ly);
    const double target =
        (2.0 * p.alpha() - p.beta()) / (p.alpha() - p.beta());
    res.pass = std::fabs(fit.slope - target) <= 0.4;
    res.detail =
        detail.str() + "slope=" + fmt(fit.slope) + " vs " + fmt(target);
    return res;
}

CriterionResult tail_order(const Options& opt) {
    CriterionResult res{9, "tail order (2a-b)/a of log u", true, ""};
    // Small t puts the resolvable window into the genuinely intermittent
    // moment range (the optimizing moment order k* ~ (2z/5ct)^{2/3} sits at
    // 8..14 here) while the grid still resolves the confinement scale; at
    // larger t the reachable tail is dominated by the k ~ 2 exponential
    // regime and the fitted order degrades to ~1.
    const ModelParams p(1.5, 0.5, 1, 0.01);
    const int n = 512;
    const double L = 32.0;
    pam::PamConfig cfg(p, L, n, 0.5 * pam::stability_dt_bound(p, L, n),
                       rng::derive_seed(opt.seed, 9));
    const std::int64_t R = 1600000;
    std::vector<double> logu(R);
    for_each_index(opt.policy, R, [&](std::int64_t i) {
        pam::PamConfig c = cfg;
        c.seed = rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
        logu[i] = std::log(std::max(pam::simulate_pam(c).final_field[0], 1e-300));
    });
    std::sort(logu.begin(), logu.end());
    // raw slope of log(-log P) vs log z over the deep resolvable window
    std::vector<double> lx, ly;
    const int K = 10;
    const double p_lo = std::max(20.0 / static_cast<double>(R), 1.25e-5);
    const double p_hi = 0.02;
    for (int j = 0; j < K; ++j) {
        const double prob =
            p_hi * std::pow(p_lo / p_hi, static_cast<double>(j) / (K - 1));
        const auto idx = static_cast<std::size_t>((1.0 - prob) * R);
        const double z = logu[std::min<std::size_t>(idx, R - 1)];
        if (z <= 0.0) continue;
        const double exceed = static_cast<double>(
            logu.end() - std::upper_bound(logu.begin(), logu.end(), z));
        if (exceed < 20.0) continue;
        lx.push_back(std::log(z));
        ly.push_back(std::log(-std::log(exceed / static_cast<double>(R))));
    }
    const auto fit = line_fit(lx, ly);
    const double target = (2.0 * p.alpha() - p.beta()) / p.alpha();
    res.pass = lx.size() >= 5 && std::fabs(fit.slope - target) <= 0.3;
    res.detail = "slope=" + fmt(fit.slope) + " vs " + fmt(target) + " (" +
                 std::to_string(lx.size()) + " bins)";
    return res;
}

CriterionResult localization_lemmas(const Options& opt) {
    CriterionResult res{10, "localization: independence and decay rates", true,
                        ""};
    std::ostringstream detail;

    // Independence beyond 2m(l t^{1/a} + l).
    {
        const ModelParams p(1.5, 0.5, 1, 0.5);
        const int n = 256;
        const double L = 64.0;
        pam::PamConfig cfg(p, L, n, pam::stability_dt_bound(p, L, n),
                           rng::derive_seed(opt.seed, 1001));
        const pam::PicardSpec spec(4.0, 2, p);
        const double threshold = pam::independence_range(spec);
        const int site_a = n / 4, site_b = 3 * n / 4;
        const double dist = (site_b - site_a) * cfg.spacing();
        const pam::PicardEngine engine(cfg, spec.ell);
        const std::int64_t R = 6000;
        std::vector<double> va(R), vb(R);
        for_each_index(opt.policy, R, [&](std::int64_t i) {
            const auto rep = engine.run(
                spec.m, rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(i)),
                false);
            va[i] = rep.levels[spec.m][site_a];
            vb[i] = rep.levels[spec.m][site_b];
        });
        const auto ma = mean_stderr(va), mb = mean_stderr(vb);
        double cov = 0.0, sa = 0.0, sb = 0.0;
        for (std::int64_t i = 0; i < R; ++i) {
            cov += (va[i] - ma.mean) * (vb[i] - mb.mean);
            sa += (va[i] - ma.mean) * (va[i] - ma.mean);
            sb += (vb[i] - mb.mean) * (vb[i] - mb.mean);
        }
        const double corr = cov / std::sqrt(sa * sb);
        const double corr_se = 1.0 / std::sqrt(static_cast<double>(R));
        const bool ok = dist >= threshold && std::fabs(corr) <= 3.0 * corr_se;
        if (!ok) res.pass = false;
        detail << "indep: dist=" << fmt(dist) << ">=thr=" << fmt(threshold)
               << ", corr=" << fmt(corr) << " (3se=" << fmt(3.0 * corr_se)
               << "); ";
    }

    // Coupling-gap ratio in ell at t = 0.5, with m deep enough that the
    // kernel-truncation error dominates; paired replicas share eta so the
    // ratio is low-noise.
    {
        const ModelParams p(1.5, 0.5, 1, 0.5);
        const int n = 256;
        const double L = 64.0;
        pam::PamConfig cfg(p, L, n, pam::stability_dt_bound(p, L, n),
                           rng::derive_seed(opt.seed, 1002));
        const std::int64_t R = 1500;
        const int m_deep = 8;
        const pam::PicardEngine eng4(cfg, 4.0);
        const pam::PicardEngine eng8(cfg, 8.0);
        std::vector<double> gap4(R), gap8(R);
        for_each_index(opt.policy, R, [&](std::int64_t i) {
            const auto seed_i =
                rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
            const auto rep4 = eng4.run(m_deep, seed_i, true);
            const auto rep8 = eng8.run(m_deep, seed_i, true);
            double a4 = 0.0, a8 = 0.0;
            for (int s = 0; s < n; ++s) {
                const double g4 = rep4.full_field[s] - rep4.levels[m_deep][s];
                const double g8 = rep8.full_field[s] - rep8.levels[m_deep][s];
                a4 += g4 * g4;
                a8 += g8 * g8;
            }
            gap4[i] = a4 / n;
            gap8[i] = a8 / n;
        });
        const auto g4 = mean_stderr(gap4), g8 = mean_stderr(gap8);
        const double ratio_ell = g8.mean / g4.mean;
        const double target_ell = std::pow(2.0, -p.beta());
        const bool ell_ok =
            std::fabs(ratio_ell - target_ell) <= 0.3 * target_ell;
        if (!ell_ok) res.pass = false;
        detail << "ell ratio=" << fmt(ratio_ell) << " vs " << fmt(target_ell)
               << "+-30%; ";
    }

    // Per-Picard-step ratio of successive differences at t = 0.25, where the
    // discrete contraction has settled into its geometric regime (at larger
    // t the first ratios sit above the lemma's asymptotic factor).
    {
        const ModelParams p(1.5, 0.5, 1, 0.25);
        const int n = 256;
        const double L = 64.0;
        pam::PamConfig cfg(p, L, n, pam::stability_dt_bound(p, L, n),
                           rng::derive_seed(opt.seed, 1003));
        const pam::PicardEngine eng8(cfg, 8.0);
        const std::int64_t R = 1200;
        std::vector<double> d23(R), d34(R), d45(R);
        for_each_index(opt.policy, R, [&](std::int64_t i) {
            const auto rep = eng8.run(
                5, rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(i)),
                false);
            double a23 = 0.0, a34 = 0.0, a45 = 0.0;
            for (int s = 0; s < n; ++s) {
                const double x23 = rep.levels[3][s] - rep.levels[2][s];
                const double x34 = rep.levels[4][s] - rep.levels[3][s];
                const double x45 = rep.levels[5][s] - rep.levels[4][s];
                a23 += x23 * x23;
                a34 += x34 * x34;
                a45 += x45 * x45;
            }
            d23[i] = a23 / n;
            d34[i] = a34 / n;
            d45[i] = a45 / n;
        });
        const double r1 = mean_stderr(d34).mean / mean_stderr(d23).mean;
        const double r2 = mean_stderr(d45).mean / mean_stderr(d34).mean;
        const bool m_ok = std::fabs(r1 - 0.5) <= 0.15 &&
                          std::fabs(r2 - 0.5) <= 0.15;
        if (!m_ok) res.pass = false;
        detail << "picard step ratios=" << fmt(r1) << "," << fmt(r2)
               << " vs 0.5+-30%";
    }
    res.detail = detail.str();
    return res;
}

CriterionResult pam_dimension_bracket(const Options& opt) {
    CriterionResult res{11, "pam dimension bracket shape", true, ""};
    const ModelParams p(1.5, 0.5, 1, 1.0);
    const auto gammas = harness::calibrate_pam_gammas(
        p, {0.15, 0.3, 0.45, 0.6, 0.75}, rng::derive_seed(opt.seed, 1101),
        opt.policy);
    const auto rows = harness::pam_dimension_table(
        p, 5, 10, gammas, 32, rng::derive_seed(opt.seed, 1102), opt.policy);
    // monotone nonincreasing within bands
    bool monotone = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].fit.estimate >
            rows[i - 1].fit.estimate + rows[i - 1].fit.band + rows[i].fit.band)
            monotone = false;
    // exponent of (d - estimate) vs gamma
    std::vector<double> lx, ly;
    std::ostringstream detail;
    for (const auto& row : rows) {
        detail << "g=" << fmt(row.gamma) << ": " << fmt(row.fit.estimate)
               << "; ";
        const double drop = 1.0 - row.fit.estimate;
        if (row.gamma > 0.0 && drop > 0.02 && !row.fit.degenerate &&
            row.fit.estimate > 0.02) {
            lx.push_back(std::log(row.gamma));
            ly.push_back(std::log(drop));
        }
    }
    double slope = 0.0;
    if (lx.size() >= 3) slope = line_fit(lx, ly).slope;
    const double target = (2.0 * p.alpha() - p.beta()) / p.alpha();
    const bool slope_ok = lx.size() >= 3 && std::fabs(slope - target) <= 0.5;
    res.pass = monotone && slope_ok;
    res.detail = detail.str() + "monotone=" + (monotone ? "yes" : "NO") +
                 ", slope=" + fmt(slope) + " vs " + fmt(target) + "+-0.5";
    return res;
}

std::vector<CriterionResult> run_all(const Options& opt) {
    std::vector<CriterionResult> out;
    out.push_back(variance_law(opt));
    out.push_back(structure_function_exponent(opt));
    out.push_back(correlation_decay(opt));
    out.push_back(linear_dimension_law(opt));
    out.push_back(limsup_constant(opt));
    out.push_back(estimator_ground_truth(opt));
    out.push_back(pam_mean_second_moment(opt));
    out.push_back(intermittency_exponent(opt));
    out.push_back(tail_order(opt));
    out.push_back(localization_lemmas(opt));
    out.push_back(pam_dimension_bracket(opt));
    return out;
}

} // namespace mfshe::acceptance
