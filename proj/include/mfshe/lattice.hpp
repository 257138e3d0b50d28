#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfshe/model_params.hpp"

namespace mfshe::field {

enum class Scheme : std::uint8_t {
    CirculantExact = 0,
    SpectralTorus = 1,
    BlockIndependent = 2,
};

inline const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::CirculantExact: return "circulant-exact";
        case Scheme::SpectralTorus: return "spectral-torus";
        case Scheme::BlockIndependent: return "block-independent";
    }
    return "?";
}

// Rectangular uniform lattice: origin + spacing * index per axis, row-major.
struct LatticeSpec {
    int d = 1;
    std::vector<double> origin;       // size d
    double spacing = 1.0;
    std::vector<std::int64_t> shape;  // size d, all positive

    std::int64_t size() const {
        return std::accumulate(shape.begin(), shape.end(), std::int64_t{1},
                               std::multiplies<>());
    }

    void validate() const {
        if (d < 1 || static_cast<int>(shape.size()) != d ||
            static_cast<int>(origin.size()) != d)
            throw std::invalid_argument("LatticeSpec: inconsistent dimension");
        if (!(spacing > 0.0))
            throw std::invalid_argument("LatticeSpec: spacing must be > 0");
        for (auto s : shape)
            if (s <= 0)
                throw std::invalid_argument("LatticeSpec: empty axis");
    }

    Point site(std::int64_t flat) const {
        Point x(d);
        for (int axis = d - 1; axis >= 0; --axis) {
            x[axis] = origin[axis] + spacing *
                      static_cast<double>(flat % shape[axis]);
            flat /= shape[axis];
        }
        return x;
    }
};

// One realization of Z_t on a lattice, with enough provenance to regenerate
// it bit-identically.
struct FieldSample {
    LatticeSpec lattice;
    std::vector<double> values;
    ModelParams params{2.0, 0.5, 1, 1.0};
    std::uint64_t seed = 0;
    Scheme scheme = Scheme::CirculantExact;
    // For block-independent samples: the recorded bound on the neglected
    // cross-block correlation, c3 * (block * spacing)^{-beta}.
    double cross_block_corr_bound = 0.0;
};

// Binary field dump, header then row-major little-endian f64 values.
void write_field(const FieldSample& f, const std::string& path);
FieldSample read_field(const std::string& path);

} // namespace mfshe::field
