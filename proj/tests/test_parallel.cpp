#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

// The OpenMP paths must reproduce the serial reference bit-for-bit: every
// ensemble member draws from a seed derived from its index and results
// reduce in a fixed order, so the schedule cannot matter.

#include "mfshe/experiments.hpp"
#include "mfshe/feynman_kac.hpp"
#include "mfshe/field_samplers.hpp"
#include "mfshe/pam.hpp"
#include "mfshe/picard.hpp"

using namespace mfshe;

TEST_CASE("fk moment: serial == parallel") {
    const ModelParams p(1.5, 0.5, 1, 0.25);
    const auto a = pam::fk_moment(3, p, 4000, 1e-3, 1e2, 7, ExecPolicy::Serial);
    const auto b =
        pam::fk_moment(3, p, 4000, 1e-3, 1e2, 7, ExecPolicy::Parallel);
    CHECK(a.value == b.value);
    CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("tail probability: serial == parallel") {
    const ModelParams p(1.5, 0.5, 1, 0.25);
    pam::PamConfig cfg(p, 16.0, 64,
                       0.5 * pam::stability_dt_bound(p, 16.0, 64), 5);
    const std::vector<double> zs{0.0, 0.5, 1.0};
    const auto a = pam::tail_probability(cfg, zs, 400, ExecPolicy::Serial);
    const auto b = pam::tail_probability(cfg, zs, 400, ExecPolicy::Parallel);
    for (std::size_t i = 0; i < zs.size(); ++i) {
        CHECK(a[i].probability == b[i].probability);
        CHECK(a[i].stderr_ == b[i].stderr_);
    }
}

TEST_CASE("block-independent field: serial == parallel") {
    const ModelParams p(2.0, 0.5, 1, 1.0);
    field::LatticeSpec lat;
    lat.d = 1;
    lat.origin = {10.0};
    lat.spacing = 1.0;
    lat.shape = {1000};
    const auto a =
        field::sample_field_block_independent(lat, p, 128, 3, ExecPolicy::Serial);
    const auto b = field::sample_field_block_independent(lat, p, 128, 3,
                                                         ExecPolicy::Parallel);
    CHECK(a.values == b.values);
}

TEST_CASE("sup-box tail: serial == parallel") {
    const ModelParams p(2.0, 0.5, 1, 1.0);
    const std::vector<double> lams{2.0, 2.5};
    const auto a =
        field::sup_box_tail(p, 1.0, lams, 2000, 0.02, 11, ExecPolicy::Serial);
    const auto b =
        field::sup_box_tail(p, 1.0, lams, 2000, 0.02, 11, ExecPolicy::Parallel);
    for (std::size_t i = 0; i < lams.size(); ++i)
        CHECK(a[i].probability == b[i].probability);
}

TEST_CASE("linear dimension table: serial == parallel") {
    const ModelParams p(2.0, 0.5, 1, 1.0);
    const auto a = harness::linear_dimension_table(p, 6, 9, {0.5}, 2, 512, 13,
                                                   ExecPolicy::Serial);
    const auto b = harness::linear_dimension_table(p, 6, 9, {0.5}, 2, 512, 13,
                                                   ExecPolicy::Parallel);
    REQUIRE(a.size() == b.size());
    CHECK(a[0].fit.estimate == b[0].fit.estimate);
    CHECK(a[0].mean_counts == b[0].mean_counts);
}

TEST_CASE("coupling error: serial == parallel") {
    const ModelParams p(1.5, 0.5, 1, 0.25);
    pam::PamConfig cfg(p, 64.0, 128,
                       pam::stability_dt_bound(p, 64.0, 128), 7);
    const pam::PicardSpec spec(4.0, 2, p);
    const auto a = pam::coupling_error(spec, cfg, 60, 5, ExecPolicy::Serial);
    const auto b = pam::coupling_error(spec, cfg, 60, 5, ExecPolicy::Parallel);
    CHECK(a.mean_square_gap == b.mean_square_gap);
    CHECK(a.stderr_ == b.stderr_);
}
