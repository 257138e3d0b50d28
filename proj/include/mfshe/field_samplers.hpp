#pragma once

#include <cstdint>
#include <vector>

#include "mfshe/circulant.hpp"
#include "mfshe/exec.hpp"
#include "mfshe/lattice.hpp"
#include "mfshe/model_params.hpp"

namespace mfshe::field {

// Partitions the lattice into contiguous blocks of `block` sites per axis,
// samples each block with the exact circulant scheme under its own derived
// seed, independently across blocks. Valid when block * spacing exceeds the
// dependence range 2 t^{1/alpha}; the neglected cross-block correlation is
// bounded by c3 (block * spacing)^{-beta} and recorded on the sample.
FieldSample sample_field_block_independent(const LatticeSpec& lattice,
                                           const ModelParams& params,
                                           std::int64_t block,
                                           std::uint64_t seed,
                                           ExecPolicy policy = ExecPolicy::Parallel);

// Stationary sampler on a periodic torus covering the lattice: mode
// amplitudes are the spectral density integrated over frequency cells.
// Approximate (torus wrap + mode truncation); cheap for large patches.
FieldSample sample_field_spectral_torus(const LatticeSpec& lattice,
                                        const ModelParams& params,
                                        std::uint64_t seed);

// m equally correlated standard Gaussians: Z_i = Y + U_i with Var Y = r,
// Var U_i = 1 - r.
struct EquiCorrelatedSpec {
    int m = 1;
    double r = 0.0;
};

std::vector<double> sample_equicorrelated(const EquiCorrelatedSpec& spec,
                                          std::uint64_t seed);

struct TailPoint {
    double lambda = 0.0;
    double probability = 0.0;
    double stderr_ = 0.0;
};

// P{ sup over the meshed box [0, box_side]^d of Z_t / sd(Z_t) > lambda },
// estimated over `replicas` exact-field draws. Mesh bias is one-sided (the
// discrete sup underestimates the continuum sup).
std::vector<TailPoint> sup_box_tail(const ModelParams& params, double box_side,
                                    const std::vector<double>& lambda_grid,
                                    std::int64_t replicas, double mesh,
                                    std::uint64_t seed,
                                    ExecPolicy policy = ExecPolicy::Parallel);

} // namespace mfshe::field
