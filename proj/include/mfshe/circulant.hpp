#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mfshe/lattice.hpp"
#include "mfshe/model_params.hpp"

namespace mfshe::field {

// Circulant embedding of the z-covariance sequence: exact Gaussian sampling
// on uniform lattices, d in {1, 2} (nested block circulant for d = 2).
// Padding starts at 2x the lattice and doubles until the embedding spectrum
// is nonnegative (entries above -1e-10 * max are clamped to zero); throws
// EmbeddingError beyond the size cap. The embedding is built once per
// (params, spacing, shape) and can then generate any number of independent
// samples at two FFTs each.
class CirculantEmbedding {
public:
    CirculantEmbedding(const ModelParams& params, const LatticeSpec& lattice);
    ~CirculantEmbedding();
    CirculantEmbedding(CirculantEmbedding&&) noexcept;
    CirculantEmbedding& operator=(CirculantEmbedding&&) noexcept;

    FieldSample sample(std::uint64_t seed) const;

    // Embedding torus shape actually used (after padding).
    const std::vector<int>& embedding_shape() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One-call exact sampler.
FieldSample sample_field_exact(const LatticeSpec& lattice,
                               const ModelParams& params, std::uint64_t seed);

} // namespace mfshe::field
