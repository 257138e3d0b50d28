// Times the OpenMP kernels against their serial reference paths. Both paths
// run the same per-item work from the same derived seeds and must agree
// bit-for-bit; the table reports wall time and speedup.
//
//   ./mfshe_bench [--quick]
#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mfshe/covariance.hpp"
#include "mfshe/exec.hpp"
#include "mfshe/feynman_kac.hpp"
#include "mfshe/field_samplers.hpp"
#include "mfshe/pam.hpp"
#include "mfshe/rng.hpp"

using namespace mfshe;

namespace {

double wall() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct Row {
    const char* name;
    double serial_s;
    double parallel_s;
    bool identical;
};

void print_row(const Row& r) {
    std::printf("%-28s %10.3fs %10.3fs %8.2fx   %s\n", r.name, r.serial_s,
                r.parallel_s, r.serial_s / r.parallel_s,
                r.identical ? "bit-identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const double scale = quick ? 0.05 : 1.0;
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#endif
    std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "openmp",
                "speedup");

    // Block-independent field sampling (embedding FFT filtering per block).
    {
        const ModelParams p(2.0, 0.5, 1, 1.0);
        field::LatticeSpec lat;
        lat.d = 1;
        lat.origin = {1.0};
        lat.spacing = 1.0;
        lat.shape = {static_cast<std::int64_t>(262144 * scale) + 4096};
        double t0 = wall();
        const auto a = field::sample_field_block_independent(
            lat, p, 2048, 42, ExecPolicy::Serial);
        double t1 = wall();
        const auto b = field::sample_field_block_independent(
            lat, p, 2048, 42, ExecPolicy::Parallel);
        double t2 = wall();
        print_row({"field block sampling", t1 - t0, t2 - t1,
                   a.values == b.values});
    }

    // Feynman-Kac path ensemble.
    {
        const ModelParams p(1.5, 0.5, 1, 0.25);
        const auto n_paths = static_cast<std::int64_t>(200000 * scale) + 1000;
        double t0 = wall();
        const auto a =
            pam::fk_moment(3, p, n_paths, 2e-3, 1e4, 7, ExecPolicy::Serial);
        double t1 = wall();
        const auto b =
            pam::fk_moment(3, p, n_paths, 2e-3, 1e4, 7, ExecPolicy::Parallel);
        double t2 = wall();
        print_row({"feynman-kac paths", t1 - t0, t2 - t1,
                   a.value == b.value && a.stderr_ == b.stderr_});
    }

    // PAM replica ensemble (tail curve).
    {
        const ModelParams p(1.5, 0.5, 1, 0.25);
        pam::PamConfig cfg(p, 32.0, 128,
                           0.5 * pam::stability_dt_bound(p, 32.0, 128), 9);
        const auto replicas = static_cast<std::int64_t>(4000 * scale) + 200;
        const std::vector<double> zs{0.5, 1.0, 1.5, 2.0};
        double t0 = wall();
        const auto a =
            pam::tail_probability(cfg, zs, replicas, ExecPolicy::Serial);
        double t1 = wall();
        const auto b =
            pam::tail_probability(cfg, zs, replicas, ExecPolicy::Parallel);
        double t2 = wall();
        bool same = true;
        for (std::size_t i = 0; i < a.size(); ++i)
            same = same && a[i].probability == b[i].probability;
        print_row({"pam replica ensemble", t1 - t0, t2 - t1, same});
    }

    // Box-sup tail (exact sampler replicas).
    {
        const ModelParams p(2.0, 0.5, 1, 1.0);
        const auto replicas = static_cast<std::int64_t>(20000 * scale) + 1000;
        const std::vector<double> lam{2.0, 2.5, 3.0};
        double t0 = wall();
        const auto a = field::sup_box_tail(p, 2.0, lam, replicas, 0.02, 11,
                                           ExecPolicy::Serial);
        double t1 = wall();
        const auto b = field::sup_box_tail(p, 2.0, lam, replicas, 0.02, 11,
                                           ExecPolicy::Parallel);
        double t2 = wall();
        bool same = true;
        for (std::size_t i = 0; i < a.size(); ++i)
            same = same && a[i].probability == b[i].probability;
        print_row({"sup-box tail replicas", t1 - t0, t2 - t1, same});
    }
    return 0;
}
