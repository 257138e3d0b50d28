#include "mfshe/field_samplers.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <map>

#include "mfshe/covariance.hpp"
#include "mfshe/errors.hpp"
#include "mfshe/fft.hpp"
#include "mfshe/kernels.hpp"
#include "mfshe/rng.hpp"
#include "mfshe/special.hpp"

namespace mfshe::field {

FieldSample sample_field_block_independent(const LatticeSpec& lattice,
                                           const ModelParams& params,
                                           std::int64_t block,
                                           std::uint64_t seed,
                                           ExecPolicy policy) {
    lattice.validate();
    if (block <= 0) throw std::invalid_argument("block must be positive");
    const double dep_range = 2.0 * std::pow(params.t(), 1.0 / params.alpha());
    if (!(static_cast<double>(block) * lattice.spacing > dep_range))
        throw GeometryError(
            "block-independent sampler: block * spacing must exceed the "
            "dependence range 2 t^{1/alpha}");
    if (lattice.d != 1 && lattice.d != 2)
        throw GeometryError("block-independent sampler supports d in {1, 2}");

    FieldSample out;
    out.lattice = lattice;
    out.params = params;
    out.seed = seed;
    out.scheme = Scheme::BlockIndependent;
    out.values.assign(lattice.size(), 0.0);
    out.cross_block_corr_bound =
        c3_bound(params) *
        std::pow(static_cast<double>(block) * lattice.spacing, -params.beta());

    // One embedding per distinct block shape; full blocks dominate so the
    // cache has at most 2^d entries.
    const int d = lattice.d;
    std::vector<std::int64_t> nblocks(d), rem(d);
    for (int ax = 0; ax < d; ++ax) {
        nblocks[ax] = (lattice.shape[ax] + block - 1) / block;
        rem[ax] = lattice.shape[ax] - (nblocks[ax] - 1) * block;
    }
    auto block_shape = [&](const std::vector<std::int64_t>& idx) {
        std::vector<std::int64_t> s(d);
        for (int ax = 0; ax < d; ++ax)
            s[ax] = (idx[ax] == nblocks[ax] - 1) ? rem[ax] : block;
        return s;
    };

    std::map<std::vector<std::int64_t>, CirculantEmbedding> embeddings;
    std::int64_t total_blocks = 1;
    for (int ax = 0; ax < d; ++ax) total_blocks *= nblocks[ax];
    for (std::int64_t b = 0; b < total_blocks; ++b) {
        std::vector<std::int64_t> idx(d);
        std::int64_t q = b;
        for (int ax = d - 1; ax >= 0; --ax) {
            idx[ax] = q % nblocks[ax];
            q /= nblocks[ax];
        }
        const auto shape = block_shape(idx);
        if (!embeddings.count(shape)) {
            LatticeSpec ls;
            ls.d = d;
            ls.origin.assign(d, 0.0);
            ls.spacing = lattice.spacing;
            ls.shape = shape;
            embeddings.emplace(shape, CirculantEmbedding(params, ls));
        }
    }

    for_each_index(policy, total_blocks, [&](std::int64_t b) {
        std::vector<std::int64_t> idx(d);
        std::int64_t q = b;
        for (int ax = d - 1; ax >= 0; --ax) {
            idx[ax] = q % nblocks[ax];
            q /= nblocks[ax];
        }
        const auto shape = block_shape(idx);
        const auto piece = embeddings.at(shape).sample(
            rng::derive_seed(seed, static_cast<std::uint64_t>(b)));
        // Scatter the block into the output lattice.
        if (d == 1) {
            std::copy(piece.values.begin(), piece.values.end(),
                      out.values.begin() + idx[0] * block);
        } else {
            const std::int64_t row0 = idx[0] * block, col0 = idx[1] * block;
            for (std::int64_t i = 0; i < shape[0]; ++i)
                std::copy_n(piece.values.begin() + i * shape[1], shape[1],
                            out.values.begin() +
                                (row0 + i) * lattice.shape[1] + col0);
        }
    });
    return out;
}

FieldSample sample_field_spectral_torus(const LatticeSpec& lattice,
                                        const ModelParams& params,
                                        std::uint64_t seed) {
    lattice.validate();
    const int d = lattice.d;
    if (d != 1 && d != 2)
        throw GeometryError("spectral-torus sampler supports d in {1, 2}");

    // Torus of n >= shape sites per axis (power of two), mode amplitudes
    // |a_k|^2 = S(|xi_k|) * cell volume, zero mode from the cell-ball
    // integral of S near 0.
    std::vector<int> n(d);
    for (int ax = 0; ax < d; ++ax) {
        int m = 1;
        while (m < lattice.shape[ax]) m <<= 1;
        n[ax] = 2 * m;
    }
    std::vector<double> side(d);
    for (int ax = 0; ax < d; ++ax) side[ax] = n[ax] * lattice.spacing;
    const double dk = 2.0 * M_PI / side[0];
    double cell = 1.0;
    for (int ax = 0; ax < d; ++ax) cell *= 2.0 * M_PI / side[ax];

    std::int64_t total = 1;
    for (int ax = 0; ax < d; ++ax) total *= n[ax];

    // Zero-mode variance: integral of S over the ball of cell volume.
    // S(r) ~ t r^{beta-d} as r -> 0; integrate exactly in that limit.
    const double omega = special::sphere_surface(d);
    const double rc = std::pow(cell * d / omega, 1.0 / d);
    const double zero_var = params.t() * omega * std::pow(rc, params.beta()) /
                            params.beta();

    std::vector<double> g(total);
    rng::GaussianRng gauss(seed);
    for (auto& v : g) v = gauss.normal();

    std::vector<std::complex<double>> spec(fft::complex_size(n));
    fft::forward_r2c(n, g.data(), spec.data());
    // filter sqrt(n_total * |a_k|^2)
    const std::int64_t n1c = d == 2 ? n[1] / 2 + 1 : n[0] / 2 + 1;
    const std::int64_t rows = d == 2 ? n[0] : 1;
    for (std::int64_t i = 0; i < rows; ++i) {
        for (std::int64_t j = 0; j < n1c; ++j) {
            double k2 = 0.0;
            if (d == 1) {
                k2 = (dk * j) * (dk * j);
            } else {
                const std::int64_t ki = i <= n[0] / 2 ? i : i - n[0];
                k2 = dk * dk * (static_cast<double>(ki * ki) +
                                static_cast<double>(j * j));
            }
            double var_k;
            if (k2 == 0.0) {
                var_k = zero_var;
            } else {
                var_k = kernels::z_spectral_density(std::sqrt(k2), params) *
                        cell;
            }
            spec[i * n1c + j] *=
                std::sqrt(var_k * static_cast<double>(total));
        }
    }
    std::vector<double> x(total);
    fft::inverse_c2r(n, spec.data(), x.data());
    const double norm = 1.0 / static_cast<double>(total);
    for (auto& v : x) v *= norm;

    FieldSample out;
    out.lattice = lattice;
    out.params = params;
    out.seed = seed;
    out.scheme = Scheme::SpectralTorus;
    out.values.resize(lattice.size());
    if (d == 1) {
        std::copy_n(x.begin(), out.values.size(), out.values.begin());
    } else {
        for (std::int64_t i = 0; i < lattice.shape[0]; ++i)
            std::copy_n(x.begin() + i * n[1], lattice.shape[1],
                        out.values.begin() + i * lattice.shape[1]);
    }
    return out;
}

std::vector<double> sample_equicorrelated(const EquiCorrelatedSpec& spec,
                                          std::uint64_t seed) {
    if (spec.m < 1) throw std::invalid_argument("equicorrelated: m >= 1");
    if (!(spec.r >= 0.0 && spec.r < 1.0))
        throw std::invalid_argument("equicorrelated: r in [0, 1)");
    rng::GaussianRng gauss(seed);
    const double y = std::sqrt(spec.r) * gauss.normal();
    std::vector<double> z(spec.m);
    const double su = std::sqrt(1.0 - spec.r);
    for (auto& zi : z) zi = y + su * gauss.normal();
    return z;
}

namespace {

// MFSHE1 field dump header: magic "MFSHE1", version u16, d u16, shape u64
// per axis, spacing f64, origin f64 x d, alpha f64, beta f64, t f64,
// seed u64, scheme u8, then values as little-endian f64 row-major.
template <typename T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw Error("field dump: truncated file");
    return v;
}

} // namespace

void write_field(const FieldSample& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    os.write("MFSHE1", 6);
    put<std::uint16_t>(os, 1);
    put<std::uint16_t>(os, static_cast<std::uint16_t>(f.lattice.d));
    for (auto s : f.lattice.shape) put<std::uint64_t>(os, s);
    put<double>(os, f.lattice.spacing);
    for (auto o : f.lattice.origin) put<double>(os, o);
    put<double>(os, f.params.alpha());
    put<double>(os, f.params.beta());
    put<double>(os, f.params.t());
    put<std::uint64_t>(os, f.seed);
    put<std::uint8_t>(os, static_cast<std::uint8_t>(f.scheme));
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!os) throw Error("field dump: write failed for " + path);
}

FieldSample read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path);
    char magic[6];
    is.read(magic, 6);
    if (!is || std::memcmp(magic, "MFSHE1", 6) != 0)
        throw Error(path + ": not an MFSHE1 field dump");
    const auto version = get<std::uint16_t>(is);
    if (version != 1) throw Error(path + ": unsupported version");
    FieldSample f;
    f.lattice.d = get<std::uint16_t>(is);
    f.lattice.shape.resize(f.lattice.d);
    for (auto& s : f.lattice.shape)
        s = static_cast<std::int64_t>(get<std::uint64_t>(is));
    f.lattice.spacing = get<double>(is);
    f.lattice.origin.resize(f.lattice.d);
    for (auto& o : f.lattice.origin) o = get<double>(is);
    const double alpha = get<double>(is);
    const double beta = get<double>(is);
    const double t = get<double>(is);
    f.params = ModelParams(alpha, beta, f.lattice.d, t);
    f.seed = get<std::uint64_t>(is);
    f.scheme = static_cast<Scheme>(get<std::uint8_t>(is));
    f.values.resize(f.lattice.size());
    is.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!is) throw Error(path + ": truncated values");
    return f;
}

std::vector<TailPoint> sup_box_tail(const ModelParams& params, double box_side,
                                    const std::vector<double>& lambda_grid,
                                    std::int64_t replicas, double mesh,
                                    std::uint64_t seed, ExecPolicy policy) {
    if (replicas < 1000)
        throw std::invalid_argument("sup_box_tail: replicas >= 1e3 required");
    const double corr_len = correlation_length(params);
    if (!(mesh <= 0.05 * corr_len))
        throw GeometryError(
            "sup_box_tail: mesh must resolve the field (<= 0.05 * correlation "
            "length = " +
            std::to_string(0.05 * corr_len) + ")");

    LatticeSpec lat;
    lat.d = params.d();
    lat.origin.assign(lat.d, 0.0);
    lat.spacing = mesh;
    lat.shape.assign(lat.d,
                     static_cast<std::int64_t>(std::floor(box_side / mesh)) + 1);
    const CirculantEmbedding emb(params, lat);
    const double sd = std::sqrt(z_variance(params));

    std::vector<double> sups(replicas);
    for_each_index(policy, replicas, [&](std::int64_t i) {
        const auto s = emb.sample(rng::derive_seed(seed, i));
        double m = -1e300;
        for (double v : s.values) m = std::max(m, v);
        sups[i] = m / sd;
    });

    std::vector<TailPoint> out;
    out.reserve(lambda_grid.size());
    for (double lam : lambda_grid) {
        std::int64_t k = 0;
        for (double s : sups)
            if (s > lam) ++k;
        const double p = static_cast<double>(k) / replicas;
        out.push_back(
            {lam, p, std::sqrt(std::max(p * (1.0 - p), 1e-300) / replicas)});
    }
    return out;
}

} // namespace mfshe::field
