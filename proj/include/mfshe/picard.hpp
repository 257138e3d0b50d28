#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include <cmath>

#include "mfshe/errors.hpp"
#include "mfshe/exec.hpp"
#include "mfshe/pam.hpp"

namespace mfshe::pam {

// Localized Picard iterates u^{(ell,m)} of the truncated-noise equation,
// driven by F^(h_ell) = (eta * h_ell): the same discrete eta arrays as the
// paired full simulation, so the coupling u - u^{(ell,m)} is exact in the
// shared noise.
struct PicardSpec {
    double ell = 8.0;
    int m = 2;
    ModelParams params;

    PicardSpec(double ell_, int m_, const ModelParams& p)
        : ell(ell_), m(m_), params(p) {
        if (!(ell > 0.0)) throw ConfigError("picard: ell must be positive");
        if (m < 0) throw ConfigError("picard: m must be >= 0");
    }
};

// Independence threshold of Lemma-style localization: points farther apart
// than 2 m (ell t^{1/alpha} + ell) in sup norm have disjoint eta domains.
inline double independence_range(const PicardSpec& spec) {
    if (!(spec.ell > 1.0) || spec.m < 1)
        throw ConfigError("independence_range: requires ell > 1 and m >= 1");
    return 2.0 * spec.m *
           (spec.ell * std::pow(spec.params.t(), 1.0 / spec.params.alpha()) +
            spec.ell);
}

// Precomputed windowed propagation kernels for one (cfg, ell): the discrete
// mild sum V^(j)(x, t_s) = 1 + sum_{s'<s} [p_{t_s-t_{s'}} 1_{|.|<=ell t_s^{1/a}}]
// * (V^(j-1)_{s'} dF^ell_{s'}), evaluated for all grid x by FFT. Shared
// read-only across replicas.
class PicardEngine {
public:
    PicardEngine(const PamConfig& cfg, double ell);
    ~PicardEngine();
    PicardEngine(PicardEngine&&) noexcept;

    struct Replica {
        // final-time fields of the iterates, levels 0..m
        std::vector<std::vector<double>> levels;
        // paired full simulation driven by the same eta (eta * full h noise)
        std::vector<double> full_field;
    };

    // Runs levels 0..m and the paired full field under derived seed
    // (cfg.seed, replica_index).
    Replica run(int m, std::uint64_t replica_seed, bool with_full) const;

    const PamConfig& config() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Values of u^{(ell,m)}_t at the given torus sites (indices into the grid).
// Geometry: the localization boxes must fit the torus with margin >= ell.
std::vector<double> picard_iterate(const PicardSpec& spec, const PamConfig& cfg,
                                   const std::vector<int>& site_indices,
                                   std::uint64_t seed);

struct CouplingGap {
    double mean_square_gap = 0.0;
    double stderr_ = 0.0;
};

// Monte Carlo E|u_t(x) - u^{(ell,m)}_t(x)|^2 at the torus center site over
// paired replicas sharing eta.
CouplingGap coupling_error(const PicardSpec& spec, const PamConfig& cfg,
                           std::int64_t replicas, std::uint64_t seed,
                           ExecPolicy policy = ExecPolicy::Parallel);

} // namespace mfshe::pam
