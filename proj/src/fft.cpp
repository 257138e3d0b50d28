#include "mfshe/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace mfshe::fft {

namespace {

std::mutex plan_mutex;

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

// One cached plan pair per shape. Plans are created once with dummy buffers
// and executed on caller buffers via the new-array interface.
PlanPair& plans_for(const std::vector<int>& shape) {
    static std::map<std::vector<int>, PlanPair> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find(shape);
    if (it != cache.end()) return it->second;

    const std::size_t nr = real_size(shape);
    const std::size_t nc = complex_size(shape);
    std::vector<double> rbuf(nr);
    std::vector<std::complex<double>> cbuf(nc);
    PlanPair pair;
    pair.fwd = fftw_plan_dft_r2c(static_cast<int>(shape.size()), shape.data(),
                                 rbuf.data(),
                                 reinterpret_cast<fftw_complex*>(cbuf.data()),
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    pair.inv = fftw_plan_dft_c2r(static_cast<int>(shape.size()), shape.data(),
                                 reinterpret_cast<fftw_complex*>(cbuf.data()),
                                 rbuf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!pair.fwd || !pair.inv)
        throw std::runtime_error("fftw plan creation failed");
    return cache.emplace(shape, pair).first->second;
}

} // namespace

std::size_t real_size(const std::vector<int>& shape) {
    std::size_t n = 1;
    for (int s : shape) n *= static_cast<std::size_t>(s);
    return n;
}

std::size_t complex_size(const std::vector<int>& shape) {
    std::size_t n = 1;
    for (std::size_t i = 0; i + 1 < shape.size(); ++i)
        n *= static_cast<std::size_t>(shape[i]);
    return n * (static_cast<std::size_t>(shape.back()) / 2 + 1);
}

void forward_r2c(const std::vector<int>& shape, const double* in,
                 std::complex<double>* out) {
    PlanPair& p = plans_for(shape);
    fftw_execute_dft_r2c(p.fwd, const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
}

void inverse_c2r(const std::vector<int>& shape, const std::complex<double>* in,
                 double* out) {
    PlanPair& p = plans_for(shape);
    // c2r destroys its input for multidimensional transforms; copy first.
    std::vector<std::complex<double>> tmp(in, in + complex_size(shape));
    fftw_execute_dft_c2r(p.inv, reinterpret_cast<fftw_complex*>(tmp.data()),
                         out);
}

} // namespace mfshe::fft
