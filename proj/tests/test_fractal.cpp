#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "mfshe/cover.hpp"
#include "mfshe/peaks.hpp"
#include "mfshe/rng.hpp"
#include "mfshe/shells.hpp"
#include "mfshe/tailfit.hpp"

using namespace mfshe;
using namespace mfshe::fractal;
using doctest::Approx;

namespace {

// Exact minimization over dyadic covers for d = 1 small shells: laminar-tree
// dynamic program (cover each maximal dyadic block either by itself or by
// its children's optimal covers).
double exact_dyadic_cover(const std::set<IntPoint>& pts, int n, double rho) {
    if (pts.empty()) return 0.0;
    const double scale = std::exp(-static_cast<double>(n) * rho);
    // collect occupied unit cells
    std::set<std::int64_t> cells;
    for (const auto& p : pts) cells.insert(p[0]);
    // recursive cost of the dyadic block [c 2^l, (c+1) 2^l)
    std::function<double(std::int64_t, int)> cost = [&](std::int64_t c,
                                                        int level) -> double {
        const double side = std::ldexp(1.0, level);
        const double lo = c * side, hi = lo + side;
        bool any = false;
        for (auto cell : cells)
            if (cell >= lo && cell < hi) any = true;
        if (!any) return 0.0;
        double split = 0.0;
        if (level > 0)
            split = cost(2 * c, level - 1) + cost(2 * c + 1, level - 1);
        else
            split = std::pow(1.0, rho) * scale;
        // whole block usable only if it stays inside the shell
        const double e_n = std::exp(static_cast<double>(n));
        const double e_in = n >= 1 ? std::exp(n - 1.0) : 0.0;
        const bool inside = lo >= -e_n && hi <= e_n &&
                            (n == 0 || hi <= -e_in || lo >= e_in);
        if (level == 0) return split;
        if (!inside) return split;
        return std::min(std::pow(side, rho) * scale, split);
    };
    // cover positive and negative halves from a root block spanning V_n
    int root_level = 0;
    while (std::ldexp(1.0, root_level) < std::exp(static_cast<double>(n)))
        ++root_level;
    double total = 0.0;
    for (std::int64_t c = -2; c <= 1; ++c) total += cost(c, root_level);
    return total;
}

PeakSet skeleton_peakset(double theta, int n_lo, int n_hi, int d) {
    PeakSet ps;
    ps.d = d;
    for (int n = n_lo; n <= n_hi; ++n) {
        for (const auto& pt : skeleton({theta, n, d})) {
            // ceil stays inside the anchor cube [a, a + side), side >= 1
            IntPoint ip(pt.size());
            for (std::size_t i = 0; i < pt.size(); ++i)
                ip[i] = static_cast<std::int64_t>(std::ceil(pt[i]));
            ps.insert(ip);
        }
    }
    return ps;
}

} // namespace

TEST_CASE("shells: membership and index") {
    CHECK(shell_of({0.0}) == 0);
    CHECK(shell_of({0.9}) == 0);
    CHECK(shell_of({1.0}) == 1);     // e^0 = 1 <= x
    CHECK(shell_of({2.7}) == 1);
    CHECK(shell_of({2.8}) == 2);     // just above e
    CHECK(shell_of({-3.0}) == 2);
    CHECK(shell_of({7.0, 1.0}) == 2);  // max coordinate decides
    CHECK(shell_of({7.5, 0.0}) == 3);
    // boundary: x = e^n exactly belongs to shell n+1 (V_n is half-open)
    CHECK(shell_of({std::exp(2.0)}) == 3);
}

TEST_CASE("cube") {
    CHECK_THROWS_AS(Cube({0.0}, 0.5), std::invalid_argument);
    const Cube q({1.0, 2.0}, 1.5);
    CHECK(q.contains({1.0, 2.0}));
    CHECK(q.contains({2.4, 3.4}));
    CHECK_FALSE(q.contains({2.5, 3.0}));
}

TEST_CASE("nu_rho: base cases and shell membership errors") {
    std::set<IntPoint> empty;
    CHECK(nu_rho(empty, 3, 0.5, CoverScheme::UnitLattice) == 0.0);
    std::set<IntPoint> one{{5}};
    CHECK(nu_rho(one, 2, 0.7, CoverScheme::UnitLattice) ==
          Approx(std::exp(-2.0 * 0.7)));
    CHECK(nu_rho(one, 2, 0.7, CoverScheme::GreedyDyadic) ==
          Approx(std::exp(-2.0 * 0.7)));
    CHECK_THROWS_AS(nu_rho(one, 3, 0.7, CoverScheme::UnitLattice),
                    GeometryError);
}

TEST_CASE("nu_rho: greedy-dyadic never exceeds unit-lattice") {
    rng::GaussianRng r(17);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 3;
        std::set<IntPoint> pts;
        const auto lo = static_cast<std::int64_t>(std::ceil(std::exp(n - 1.0)));
        const auto hi = static_cast<std::int64_t>(std::exp(n * 1.0));
        for (std::int64_t x = lo; x < hi; ++x)
            if (r.uniform() < 0.6) pts.insert({x});
        for (double rho : {0.3, 0.7, 1.0}) {
            const double unit = nu_rho(pts, n, rho, CoverScheme::UnitLattice);
            const double greedy = nu_rho(pts, n, rho, CoverScheme::GreedyDyadic);
            CHECK(greedy <= unit * (1.0 + 1e-12));
            // and the exact dyadic optimum is a lower bound on both
            const double exact = exact_dyadic_cover(pts, n, rho);
            CHECK(exact <= greedy * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("nu_rho: full shell with greedy-dyadic is O(1), exact oracle small n") {
    // whole shell occupied: the dyadic merge collapses to a few big cubes
    for (int n = 1; n <= 3; ++n) {
        std::set<IntPoint> pts;
        const auto lo = static_cast<std::int64_t>(std::ceil(std::exp(n - 1.0)));
        const auto hi = static_cast<std::int64_t>(std::exp(n * 1.0));
        for (std::int64_t x = lo; x < hi; ++x) {
            pts.insert({x});
            pts.insert({-x - 1});
        }
        const double rho = 1.0;  // rho = d
        const double unit = nu_rho(pts, n, rho, CoverScheme::UnitLattice);
        const double greedy = nu_rho(pts, n, rho, CoverScheme::GreedyDyadic);
        const double exact = exact_dyadic_cover(pts, n, rho);
        CHECK(greedy <= unit * (1.0 + 1e-12));
        CHECK(exact <= greedy * (1.0 + 1e-12));
        // value pinned by the exact small-instance oracle
        CHECK(greedy == Approx(unit));  // rho = d: merging does not help
        // O(1) in n for rho = d under any scheme: the shell has measure
        // ~ 2 e^n so the unit cover costs ~ 2(1 - 1/e)
        CHECK(unit <= 2.2);
        CHECK(unit >= 0.5);
    }
    // rho < d: greedy merges and approaches the exact dyadic optimum
    for (int n = 1; n <= 3; ++n) {
        std::set<IntPoint> pts;
        const auto lo = static_cast<std::int64_t>(std::ceil(std::exp(n - 1.0)));
        const auto hi = static_cast<std::int64_t>(std::exp(n * 1.0));
        for (std::int64_t x = lo; x < hi; ++x) pts.insert({x});
        const double greedy = nu_rho(pts, n, 0.5, CoverScheme::GreedyDyadic);
        const double exact = exact_dyadic_cover(pts, n, 0.5);
        CHECK(exact <= greedy * (1.0 + 1e-12));
        CHECK(greedy <= 4.0 * exact);  // constant-factor gap, validated
    }
}

TEST_CASE("nu_rho monotone in rho and subadditive under union") {
    rng::GaussianRng r(23);
    std::set<IntPoint> a, b;
    for (std::int64_t x = 8; x < 20; ++x) {
        if (r.uniform() < 0.5) a.insert({x});
        if (r.uniform() < 0.5) b.insert({x});
    }
    std::set<IntPoint> u = a;
    u.insert(b.begin(), b.end());
    for (const auto scheme :
         {CoverScheme::UnitLattice, CoverScheme::GreedyDyadic}) {
        double prev = 1e300;
        for (double rho : {0.2, 0.5, 0.8, 1.0}) {
            const double v = nu_rho(u, 3, rho, scheme);
            CHECK(v <= prev * (1.0 + 1e-12));
            prev = v;
            if (!a.empty() && !b.empty())
                CHECK(v <= nu_rho(a, 3, rho, scheme) +
                          nu_rho(b, 3, rho, scheme) + 1e-12);
        }
    }
}

TEST_CASE("estimate_dimension: skeleton ground truth") {
    for (int d = 1; d <= 2; ++d) {
        for (double theta : {0.25, 0.5, 0.75}) {
            const int n_lo = d == 1 ? 6 : 5;
            const int n_hi = d == 1 ? 14 : 9;
            const auto ps = skeleton_peakset(theta, n_lo, n_hi, d);
            const auto rep = build_cover_report(ps, {0.5},
                                                CoverScheme::UnitLattice);
            // anchors of index n live in shell n+1
            const auto fit = estimate_dimension(rep, n_lo + 1, n_hi + 1);
            const double target = d * (1.0 - theta);
            CHECK(std::fabs(fit.estimate - target) <=
                  std::max(fit.band, 0.05));
        }
    }
}

TEST_CASE("estimate_dimension: full lattice gives d, degenerate guard") {
    PeakSet ps;
    ps.d = 1;
    for (int n = 5; n <= 10; ++n) {
        const auto lo = static_cast<std::int64_t>(std::ceil(std::exp(n - 1.0)));
        const auto hi = static_cast<std::int64_t>(std::exp(n * 1.0));
        for (std::int64_t x = lo; x < hi; ++x) ps.shells[n].insert({x});
    }
    const auto rep = build_cover_report(ps, {1.0}, CoverScheme::UnitLattice);
    const auto fit = estimate_dimension(rep, 5, 10);
    CHECK(std::fabs(fit.estimate - 1.0) <= std::max(fit.band, 0.02));

    PeakSet tiny;
    tiny.d = 1;
    tiny.shells[5].insert({100});
    const auto rep2 = build_cover_report(tiny, {1.0}, CoverScheme::UnitLattice);
    CHECK_THROWS_AS(estimate_dimension(rep2, 5, 10), InsufficientShellsError);
    const auto fit2 = estimate_dimension(rep2, 5, 10, true);
    CHECK(fit2.degenerate);
    CHECK(fit2.estimate == 0.0);
}

TEST_CASE("estimate_dimension: synthetic bernoulli occupancy") {
    // occupied counts ~ Binomial(sites_n, e^{-gamma n}): slope d - gamma
    const double gamma = 0.3;
    rng::GaussianRng r(29);
    std::vector<std::pair<int, double>> counts;
    for (int n = 8; n <= 20; ++n) {
        const double sites =
            2.0 * (std::exp(static_cast<double>(n)) - std::exp(n - 1.0));
        const double prob = std::exp(-gamma * n);
        const double mean = sites * prob;
        const double sd = std::sqrt(sites * prob * (1.0 - prob));
        counts.emplace_back(n, std::max(1.0, std::floor(mean + sd * r.normal())));
    }
    const auto fit = fit_dimension_from_counts(counts, 8, 20);
    CHECK(std::fabs(fit.estimate - 0.7) <= 0.1);
}

TEST_CASE("gauge thresholds and peak extraction") {
    const ModelParams p(1.5, 0.5, 1, 1.0);
    GaugeNormalization norm;
    norm.variance = 4.2525498481532248;
    norm.params = p;

    // linear gauge at gamma -> 0 has threshold 0 (every nonnegative value)
    CHECK(gauge_threshold(Gauge::LinearShe, 0.0, 100.0, norm) == 0.0);
    // log+ floors the norm at e
    CHECK(gauge_threshold(Gauge::LinearShe, 0.5, 1.0, norm) ==
          Approx(std::sqrt(2.0 * norm.variance * 0.5)));

    field::FieldSample f;
    f.lattice.d = 1;
    f.lattice.origin = {150.0};
    f.lattice.spacing = 1.0;
    f.lattice.shape = {64};
    f.params = p;
    f.values.assign(64, 0.0);
    f.values[10] = 1e9;
    f.values[20] = -1e9;

    const auto none = extract_peaks(f, Gauge::LinearShe, 1e18, norm);
    CHECK(none.total_points() == 0);  // huge gamma empties the set
    const auto some = extract_peaks(f, Gauge::LinearShe, 0.5, norm);
    CHECK(some.total_points() == 1);
    CHECK(some.shells.begin()->second.count({160}) == 1);

    // gamma -> 0+: every site with nonnegative value (half of a centered
    // field, all of this one except the -1e9 site)
    const auto all = extract_peaks(f, Gauge::LinearShe, 0.0, norm);
    CHECK(all.total_points() == 63);

    // monotone nesting in gamma
    const auto g1 = extract_peaks(f, Gauge::LinearShe, 0.3, norm);
    const auto g2 = extract_peaks(f, Gauge::LinearShe, 0.9, norm);
    for (const auto& [sh, pts] : g2.shells)
        for (const auto& pt : pts) CHECK(g1.shells.at(sh).count(pt) == 1);

    // spacing != 1 rejected
    f.lattice.spacing = 0.5;
    CHECK_THROWS_AS(extract_peaks(f, Gauge::LinearShe, 0.5, norm),
                    GeometryError);
}

TEST_CASE("iid surrogate field: occupied-count slope is 1 - gamma") {
    // standard-normal surrogate with unit variance normalization: P(peak at
    // |x|) = Phi-bar(sqrt(2 gamma log|x|)) ~ |x|^{-gamma}, slope 1 - gamma
    const double gamma = 0.5;
    GaugeNormalization norm;
    norm.variance = 1.0;
    norm.params = ModelParams(2.0, 0.5, 1, 1.0);
    rng::GaussianRng r(31);
    std::vector<std::pair<int, double>> counts;
    for (int n = 8; n <= 16; ++n) {
        const auto lo = static_cast<std::int64_t>(std::ceil(std::exp(n - 1.0)));
        const auto hi = static_cast<std::int64_t>(std::exp(n * 1.0));
        double count = 0.0;
        for (std::int64_t x = lo; x < hi; ++x) {
            const double thr = gauge_threshold(
                Gauge::LinearShe, gamma, static_cast<double>(x), norm);
            if (r.normal() >= thr) count += 1.0;
        }
        counts.emplace_back(n, count);
    }
    const auto fit = fit_dimension_from_counts(counts, 8, 16);
    CHECK(std::fabs(fit.estimate - 0.5) <= 0.1);
}

TEST_CASE("skeleton: enumeration and cardinality") {
    // n=2, theta=0.5, d=1: e^2 + j e, j = 0..floor(e) = 2
    const auto axis = skeleton_axis({0.5, 2, 1});
    REQUIRE(axis.size() == 3);
    CHECK(axis[0] == Approx(std::exp(2.0)));
    CHECK(axis[1] == Approx(std::exp(2.0) + std::exp(1.0)));
    CHECK(axis[2] == Approx(std::exp(2.0) + 2.0 * std::exp(1.0)));
    // theta -> 1-: two points (j in {0, 1})
    CHECK(skeleton_axis({0.999, 3, 1}).size() == 2);
    // |Pi_n(theta)| = (floor(e^{n(1-theta)}) + 1)^d; n=3, theta=0.4, d=2: 49
    CHECK(skeleton({0.4, 3, 2}).size() == 49);
}

TEST_CASE("theta-thickness") {
    // full lattice is thick for every theta
    PeakSet full;
    full.d = 1;
    for (int n = 3; n <= 8; ++n) {
        const auto lo = static_cast<std::int64_t>(std::ceil(std::exp(n - 1.0)));
        const auto hi = static_cast<std::int64_t>(std::exp(n * 1.0));
        for (std::int64_t x = lo; x < hi; ++x) full.shells[n].insert({x});
    }
    CHECK(is_theta_thick(full, 0.5, 3, 6).thick);
    CHECK(is_theta_thick(full, 0.25, 3, 6).thick);

    // empty set fails with a witness at n = M
    PeakSet empty;
    empty.d = 1;
    const auto r = is_theta_thick(empty, 0.5, 4, 6);
    CHECK_FALSE(r.thick);
    CHECK(r.fail_n == 4);

    // a skeleton is thick at its own theta (anchors are members)
    const auto skel = skeleton_peakset(0.5, 4, 8, 1);
    CHECK(is_theta_thick(skel, 0.5, 4, 8).thick);

    // thickness implies dimension >= d(1 - theta) - band
    const auto rep = build_cover_report(skel, {0.5}, CoverScheme::UnitLattice);
    const auto fit = estimate_dimension(rep, 5, 9);
    CHECK(fit.estimate >= 1.0 * (1.0 - 0.5) - std::max(fit.band, 0.05));
}

TEST_CASE("tail exponent fit: gaussian, exponential") {
    std::vector<double> b_grid;
    for (double b = 0.5; b <= 3.01; b += 0.05) b_grid.push_back(b);

    {
        rng::GaussianRng r(101);
        std::vector<double> xs(4000000);
        for (auto& x : xs) x = r.normal();
        const auto fit = tail_exponent_fit(xs, b_grid);
        CHECK(std::fabs(fit.b - 2.0) <= 0.2);
        CHECK(std::fabs(fit.c - 0.5) <= 0.1);
        CHECK(fit.c_lower <= fit.c);
        CHECK(fit.c_upper >= fit.c);
    }
    {
        rng::GaussianRng r(201);
        std::vector<double> xs(2000000);
        for (auto& x : xs) x = r.exponential();
        const auto fit = tail_exponent_fit(xs, b_grid);
        CHECK(std::fabs(fit.b - 1.0) <= 0.1);
    }
    {
        // Weibull law with exponent 5/3 (the pam tail order at (1.5, 0.5))
        rng::GaussianRng r(300);
        std::vector<double> xs(1000000);
        for (auto& x : xs) x = std::pow(r.exponential(), 0.6);
        const auto fit = tail_exponent_fit(xs, b_grid);
        CHECK(std::fabs(fit.b - 5.0 / 3.0) <= 0.15);
    }
    // censoring: too few samples
    std::vector<double> small(100, 1.0);
    CHECK_THROWS(tail_exponent_fit(small, b_grid));
    // degenerate range
    std::vector<double> flat(20000, 1.0);
    CHECK_THROWS_AS(tail_exponent_fit(flat, b_grid), CensoringError);
}

TEST_CASE("peaks file round trip") {
    PeakSet ps;
    ps.d = 2;
    ps.gauge = Gauge::Pam;
    ps.gamma = 0.75;
    rng::GaussianRng r(47);
    for (int i = 0; i < 200; ++i) {
        const auto x = static_cast<std::int64_t>(10.0 + 400.0 * r.uniform());
        const auto y = static_cast<std::int64_t>(10.0 + 400.0 * r.uniform());
        ps.insert({x, y});
    }
    const auto path =
        (std::filesystem::temp_directory_path() / "mfshe_peaks_test.txt")
            .string();
    write_peaks(ps, path);
    const auto rd = read_peaks(path);
    CHECK(rd.d == ps.d);
    CHECK(rd.gauge == ps.gauge);
    CHECK(rd.gamma == Approx(ps.gamma));
    CHECK(rd.shells == ps.shells);
    std::filesystem::remove(path);
}
