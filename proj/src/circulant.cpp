#include "mfshe/circulant.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include "mfshe/covariance.hpp"
#include "mfshe/errors.hpp"
#include "mfshe/fft.hpp"
#include "mfshe/rng.hpp"

namespace mfshe::field {

namespace {

constexpr std::int64_t kMaxEmbeddingSites = std::int64_t{1} << 24;

int next_pow2(std::int64_t n) {
    int m = 1;
    while (m < n) m <<= 1;
    return m;
}

// Wrapped covariance block for the embedding torus: entry j maps to lag
// min(j, M - j) per axis.
std::vector<double> wrapped_covariance(const ModelParams& p, double spacing,
                                       const std::vector<int>& shape) {
    const int d = static_cast<int>(shape.size());
    std::int64_t total = 1;
    for (int s : shape) total *= s;
    std::vector<double> w(total);

    if (d == 1) {
        const int M = shape[0];
        const auto seq = covariance_sequence(p, spacing,
                                             static_cast<std::size_t>(M / 2 + 1));
        for (int j = 0; j < M; ++j) w[j] = seq[std::min(j, M - j)];
        return w;
    }

    // d == 2: distinct radii are cached by squared integer lag.
    const int M0 = shape[0], M1 = shape[1];
    std::map<std::int64_t, double> cache;
    for (int j0 = 0; j0 < M0; ++j0) {
        const std::int64_t l0 = std::min(j0, M0 - j0);
        for (int j1 = 0; j1 < M1; ++j1) {
            const std::int64_t l1 = std::min(j1, M1 - j1);
            const std::int64_t r2 = l0 * l0 + l1 * l1;
            auto it = cache.find(r2);
            if (it == cache.end()) {
                const double L = spacing * std::sqrt(static_cast<double>(r2));
                it = cache.emplace(r2, z_covariance_radial(L, p)).first;
            }
            w[static_cast<std::int64_t>(j0) * M1 + j1] = it->second;
        }
    }
    return w;
}

} // namespace

struct CirculantEmbedding::Impl {
    ModelParams params{2.0, 0.5, 1, 1.0};
    LatticeSpec lattice;
    std::vector<int> shape;           // embedding torus shape
    std::vector<double> sqrt_eig;     // sqrt of circulant eigenvalues
    std::int64_t total = 0;
};

CirculantEmbedding::CirculantEmbedding(const ModelParams& params,
                                       const LatticeSpec& lattice)
    : impl_(std::make_unique<Impl>()) {
    lattice.validate();
    if (lattice.d > 2)
        throw GeometryError(
            "circulant embedding offered for d in {1, 2} only; use the "
            "block-independent sampler for d >= 3");
    impl_->params = params;
    impl_->lattice = lattice;

    int pad = 2;
    for (;; pad *= 2) {
        std::vector<int> shape(lattice.d);
        std::int64_t total = 1;
        for (int ax = 0; ax < lattice.d; ++ax) {
            shape[ax] = next_pow2(lattice.shape[ax] * pad);
            total *= shape[ax];
        }
        if (total > kMaxEmbeddingSites)
            throw EmbeddingError(
                "circulant embedding exceeds the size cap (2^24 sites); "
                "enlarge padding tolerance or switch scheme");

        const auto wrapped =
            wrapped_covariance(params, lattice.spacing, shape);
        std::vector<std::complex<double>> spec(fft::complex_size(shape));
        fft::forward_r2c(shape, wrapped.data(), spec.data());

        double min_eig = 0.0, max_eig = 0.0;
        for (const auto& z : spec) {
            min_eig = std::min(min_eig, z.real());
            max_eig = std::max(max_eig, z.real());
        }
        if (min_eig < -1e-10 * max_eig) continue;  // double the padding

        // Clamp the tiny negative tail and store sqrt eigenvalues expanded to
        // the full torus (both half-spectrum conjugate copies share values).
        impl_->shape = shape;
        impl_->total = total;
        impl_->sqrt_eig.resize(spec.size());
        for (std::size_t i = 0; i < spec.size(); ++i)
            impl_->sqrt_eig[i] = std::sqrt(std::max(0.0, spec[i].real()));
        return;
    }
}

CirculantEmbedding::~CirculantEmbedding() = default;
CirculantEmbedding::CirculantEmbedding(CirculantEmbedding&&) noexcept = default;
CirculantEmbedding& CirculantEmbedding::operator=(CirculantEmbedding&&) noexcept =
    default;

const std::vector<int>& CirculantEmbedding::embedding_shape() const {
    return impl_->shape;
}

FieldSample CirculantEmbedding::sample(std::uint64_t seed) const {
    const auto& shape = impl_->shape;
    const std::int64_t M = impl_->total;

    // x = (1/M) F^* diag(sqrt(eig)) F g with g iid standard normal has
    // covariance exactly the embedded circulant.
    std::vector<double> g(M);
    rng::GaussianRng gauss(seed);
    for (auto& v : g) v = gauss.normal();

    std::vector<std::complex<double>> spec(fft::complex_size(shape));
    fft::forward_r2c(shape, g.data(), spec.data());
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= impl_->sqrt_eig[i];
    std::vector<double> x(M);
    fft::inverse_c2r(shape, spec.data(), x.data());
    const double norm = 1.0 / static_cast<double>(M);
    for (auto& v : x) v *= norm;

    FieldSample out;
    out.lattice = impl_->lattice;
    out.params = impl_->params;
    out.seed = seed;
    out.scheme = Scheme::CirculantExact;
    out.values.resize(impl_->lattice.size());
    if (impl_->lattice.d == 1) {
        std::copy_n(x.begin(), out.values.size(), out.values.begin());
    } else {
        const std::int64_t n0 = impl_->lattice.shape[0];
        const std::int64_t n1 = impl_->lattice.shape[1];
        for (std::int64_t i = 0; i < n0; ++i)
            std::copy_n(x.begin() + i * shape[1], n1,
                        out.values.begin() + i * n1);
    }
    return out;
}

FieldSample sample_field_exact(const LatticeSpec& lattice,
                               const ModelParams& params, std::uint64_t seed) {
    return CirculantEmbedding(params, lattice).sample(seed);
}

} // namespace mfshe::field
