#include "mfshe/cover.hpp"

#include <algorithm>
#include <cmath>

#include "mfshe/errors.hpp"

namespace mfshe::fractal {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b, r = a % b;
    return (r != 0 && (r < 0) != (b < 0)) ? q - 1 : q;
}

// Real extent of the dyadic block with corner index c and side 2^level.
bool block_inside_shell(const IntPoint& corner, int level, int n, int d) {
    const double side = std::ldexp(1.0, level);
    const double e_n = std::exp(static_cast<double>(n));
    bool inside_vn = true;
    for (int ax = 0; ax < d; ++ax) {
        const double lo = static_cast<double>(corner[ax]) * side;
        const double hi = lo + side;
        if (!(lo >= -e_n && hi <= e_n)) inside_vn = false;
    }
    if (!inside_vn) return false;
    if (n == 0) return true;
    // must not intersect the inner hole V_{n-1}
    const double e_in = std::exp(static_cast<double>(n - 1));
    bool overlaps_hole = true;
    for (int ax = 0; ax < d; ++ax) {
        const double lo = static_cast<double>(corner[ax]) * side;
        const double hi = lo + side;
        if (hi <= -e_in || lo >= e_in) overlaps_hole = false;
    }
    return !overlaps_hole;
}

} // namespace

double nu_rho(const std::set<IntPoint>& points, int n, double rho,
              CoverScheme scheme) {
    if (!(rho > 0.0)) throw std::invalid_argument("nu_rho: rho must be > 0");
    if (points.empty()) return 0.0;
    int d = static_cast<int>(points.begin()->size());
    for (const auto& p : points) {
        std::vector<double> xd(p.begin(), p.end());
        if (shell_of(xd) != n)
            throw GeometryError("nu_rho: point outside shell " +
                                std::to_string(n));
    }

    const double scale = std::exp(-static_cast<double>(n) * rho);
    if (scheme == CoverScheme::UnitLattice || rho >= static_cast<double>(d))
        return static_cast<double>(points.size()) * scale;

    // Greedy-dyadic: merge fully occupied, shell-contained blocks level by
    // level; cost of a level-j block is (2^j / e^n)^rho.
    std::set<IntPoint> current(points.begin(), points.end());
    double cost = 0.0;
    const std::int64_t children = std::int64_t{1} << d;
    for (int level = 0;; ++level) {
        if (current.empty()) break;
        // Candidate parents with full occupancy.
        std::map<IntPoint, std::int64_t> tally;
        for (const auto& c : current) {
            IntPoint parent(d);
            for (int ax = 0; ax < d; ++ax) parent[ax] = floor_div(c[ax], 2);
            ++tally[parent];
        }
        std::set<IntPoint> merged;
        for (const auto& [parent, cnt] : tally)
            if (cnt == children && block_inside_shell(parent, level + 1, n, d))
                merged.insert(parent);
        // Blocks not fully merged stay in the cover at this level.
        double level_cost = 0.0;
        std::int64_t kept = 0;
        for (const auto& c : current) {
            IntPoint parent(d);
            for (int ax = 0; ax < d; ++ax) parent[ax] = floor_div(c[ax], 2);
            if (!merged.count(parent)) ++kept;
        }
        level_cost = static_cast<double>(kept) *
                     std::pow(std::ldexp(1.0, level), rho) * scale;
        cost += level_cost;
        if (merged.empty()) break;
        current = std::move(merged);
    }
    return cost;
}

CoverReport build_cover_report(const PeakSet& ps,
                               const std::vector<double>& rho_grid,
                               CoverScheme scheme) {
    CoverReport rep;
    rep.d = ps.d;
    rep.scheme = scheme;
    for (const auto& [n, pts] : ps.shells) {
        ShellRow row;
        row.n = n;
        row.occupied = static_cast<std::int64_t>(pts.size());
        for (double rho : rho_grid) row.nu[rho] = nu_rho(pts, n, rho, scheme);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

DimensionFit estimate_dimension(const CoverReport& report, int n_min, int n_max,
                                bool allow_degenerate) {
    std::vector<std::pair<int, double>> counts;
    for (const auto& row : report.rows)
        counts.emplace_back(row.n, static_cast<double>(row.occupied));
    return fit_dimension_from_counts(counts, n_min, n_max, allow_degenerate);
}

DimensionFit fit_dimension_from_counts(
    const std::vector<std::pair<int, double>>& counts, int n_min, int n_max,
    bool allow_degenerate) {
    std::vector<double> xs, ys;
    for (const auto& [n_shell, count] : counts) {
        if (n_shell < n_min || n_shell > n_max || !(count > 0.0)) continue;
        xs.push_back(static_cast<double>(n_shell));
        ys.push_back(std::log(count));
    }
    DimensionFit fit;
    fit.shells_used = static_cast<int>(xs.size());
    if (xs.size() < 4) {
        if (!allow_degenerate)
            throw InsufficientShellsError(
                "estimate_dimension: need >= 4 shells with nonzero counts");
        fit.degenerate = true;
        return fit;
    }
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - slope * xs[i] - intercept;
        ss += r * r;
    }
    const double se =
        xs.size() > 2
            ? std::sqrt(ss / (n - 2.0) * n / denom)
            : 0.0;
    fit.estimate = slope;
    fit.band = 2.0 * se;
    return fit;
}

std::vector<double> skeleton_axis(const SkeletonSpec& spec) {
    if (!(spec.theta > 0.0 && spec.theta < 1.0))
        throw std::invalid_argument("skeleton: theta in (0,1)");
    const double e_n = std::exp(static_cast<double>(spec.n));
    const double step = std::exp(spec.theta * spec.n);
    const auto j_max = static_cast<std::int64_t>(
        std::floor(std::exp(spec.n * (1.0 - spec.theta))));
    std::vector<double> axis;
    axis.reserve(j_max + 1);
    for (std::int64_t j = 0; j <= j_max; ++j)
        axis.push_back(e_n + static_cast<double>(j) * step);
    return axis;
}

std::vector<std::vector<double>> skeleton(const SkeletonSpec& spec) {
    const auto axis = skeleton_axis(spec);
    const std::size_t m = axis.size();
    std::size_t total = 1;
    for (int i = 0; i < spec.d; ++i) total *= m;
    std::vector<std::vector<double>> pts;
    pts.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::vector<double> p(spec.d);
        std::size_t q = flat;
        for (int ax = spec.d - 1; ax >= 0; --ax) {
            p[ax] = axis[q % m];
            q /= m;
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

ThicknessResult is_theta_thick(const PeakSet& set, double theta, int M,
                               int n_max) {
    for (int n = M; n <= n_max; ++n) {
        const double side = std::exp(theta * n);
        const auto anchors = skeleton({theta, n, set.d});
        // Anchored cubes live in shell n+1 entirely.
        const auto it = set.shells.find(n + 1);
        for (const auto& a : anchors) {
            bool hit = false;
            if (it != set.shells.end()) {
                const auto& pts = it->second;
                IntPoint lo(set.d);
                for (int ax = 0; ax < set.d; ++ax)
                    lo[ax] = static_cast<std::int64_t>(std::ceil(a[ax]));
                for (auto p = pts.lower_bound(lo); p != pts.end(); ++p) {
                    if (static_cast<double>((*p)[0]) >= a[0] + side) break;
                    bool in = true;
                    for (int ax = 0; ax < set.d; ++ax) {
                        const double c = static_cast<double>((*p)[ax]);
                        if (!(c >= a[ax] && c < a[ax] + side)) {
                            in = false;
                            break;
                        }
                    }
                    if (in) {
                        hit = true;
                        break;
                    }
                }
            }
            if (!hit) return {false, n, a};
        }
    }
    return {true, -1, {}};
}

} // namespace mfshe::fractal
