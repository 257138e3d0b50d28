#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "mfshe/peaks.hpp"
#include "mfshe/shells.hpp"

namespace mfshe::fractal {

enum class CoverScheme { UnitLattice, GreedyDyadic };

// Cover cost nu^n_rho of a point set's slice in shell n. The unit-lattice
// scheme covers each occupied integer unit box at cost e^{-n rho}; the
// greedy-dyadic scheme additionally merges fully occupied dyadic blocks that
// stay inside the shell (only profitable for rho < d). Both are upper bounds
// on the true minimum; greedy-dyadic <= unit-lattice always.
double nu_rho(const std::set<IntPoint>& points, int n, double rho,
              CoverScheme scheme);

struct ShellRow {
    int n = 0;
    std::int64_t occupied = 0;
    std::map<double, double> nu;  // rho -> nu^n_rho
};

struct DimensionFit {
    double estimate = 0.0;
    double band = 0.0;      // 2x regression standard error
    int shells_used = 0;
    bool degenerate = false;  // too few nonzero shells; estimate pinned to 0
};

struct CoverReport {
    int d = 1;
    CoverScheme scheme = CoverScheme::UnitLattice;
    std::vector<ShellRow> rows;
    DimensionFit fit;
};

CoverReport build_cover_report(const PeakSet& ps,
                               const std::vector<double>& rho_grid,
                               CoverScheme scheme);

// Least-squares fit of log(occupied count) against the shell index over
// [n_min, n_max]; the slope estimates the dimension, the band is twice the
// regression standard error. Throws InsufficientShellsError with fewer than
// 4 nonzero shells unless allow_degenerate is set, in which case a peak set
// that has died out is reported as dimension 0.
DimensionFit estimate_dimension(const CoverReport& report, int n_min, int n_max,
                                bool allow_degenerate = false);

// Same fit on replica-averaged (shell, count) pairs.
DimensionFit fit_dimension_from_counts(
    const std::vector<std::pair<int, double>>& counts, int n_min, int n_max,
    bool allow_degenerate = false);

// theta-skeleton: A_n(theta) = { e^n + j e^{theta n} : 0 <= j <= e^{n(1-theta)} },
// Pi_n(theta) its d-fold product.
struct SkeletonSpec {
    double theta = 0.5;
    int n = 1;
    int d = 1;
};

std::vector<double> skeleton_axis(const SkeletonSpec& spec);
std::vector<std::vector<double>> skeleton(const SkeletonSpec& spec);

struct ThicknessResult {
    bool thick = true;
    int fail_n = -1;
    std::vector<double> fail_anchor;
};

// E is theta-thick from shell M if every cube Q(x, e^{theta n}), x in
// Pi_n(theta), M <= n <= n_max, meets the set. Returns the first failing
// (n, anchor) as a witness.
ThicknessResult is_theta_thick(const PeakSet& set, double theta, int M,
                               int n_max);

} // namespace mfshe::fractal
