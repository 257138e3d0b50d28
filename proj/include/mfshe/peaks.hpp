#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mfshe/lattice.hpp"
#include "mfshe/model_params.hpp"
#include "mfshe/shells.hpp"

namespace mfshe::fractal {

enum class Gauge {
    LinearShe,  // Z_t(x) >= sqrt(2 Var(Z_t) gamma log+ |x|)
    Pam,        // log+ u_t(x) >= gamma t^{(a-b)/(2a-b)} (log+ |x|)^{a/(2a-b)}
};

inline const char* gauge_name(Gauge g) {
    return g == Gauge::LinearShe ? "linear-she" : "pam";
}

// Threshold normalization record: the variance scale actually used (this
// implementation's convention) plus the model parameters behind it.
struct GaugeNormalization {
    double variance = 1.0;  // Var(Z_t) used by the linear-she gauge
    ModelParams params{2.0, 0.5, 1, 1.0};
};

// log+ r = log(r v e)
inline double log_plus(double r) { return std::log(std::max(r, M_E)); }

double gauge_threshold(Gauge gauge, double gamma, double norm_x,
                       const GaugeNormalization& norm);

// Integer-lattice point set tagged by shell, duplicate-free.
struct PeakSet {
    int d = 1;
    Gauge gauge = Gauge::LinearShe;
    double gamma = 0.0;
    std::string source;
    // points per shell, each point d integers
    std::map<int, std::set<IntPoint>> shells;

    std::int64_t total_points() const {
        std::int64_t n = 0;
        for (const auto& [sh, pts] : shells) n += pts.size();
        return n;
    }

    void insert(const IntPoint& p);
};

// All sites of the field whose value meets the gauge threshold at that
// site's |x|. Requires unit spacing and integer origins (shell-aware
// placement); throws GeometryError otherwise.
PeakSet extract_peaks(const field::FieldSample& field, Gauge gauge,
                      double gamma, const GaugeNormalization& norm);

// Text format: header "MFPEAKS v1 d=<d> gauge=<tag> gamma=<g>", then one
// point per line as d space-separated integers followed by the shell tag.
void write_peaks(const PeakSet& ps, const std::string& path);
PeakSet read_peaks(const std::string& path);

} // namespace mfshe::fractal
