// Acceptance suite: one test case per criterion, reference settings pinned
// in the runners; prints one pass/fail line per criterion.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>

#include "mfshe/acceptance.hpp"

using namespace mfshe::acceptance;

namespace {

Options reference_options() {
    Options opt;
    opt.seed = 20240817;
    return opt;
}

bool report(const CriterionResult& r) {
    std::printf("[criterion %2d] %-4s %s: %s\n", r.index,
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    return r.pass;
}

} // namespace

TEST_CASE("criterion 1: variance law") {
    CHECK(report(variance_law(reference_options())));
}

TEST_CASE("criterion 2: structure-function exponent") {
    CHECK(report(structure_function_exponent(reference_options())));
}

TEST_CASE("criterion 3: correlation decay") {
    CHECK(report(correlation_decay(reference_options())));
}

TEST_CASE("criterion 4: linear dimension law") {
    CHECK(report(linear_dimension_law(reference_options())));
}

TEST_CASE("criterion 5: limsup constant") {
    CHECK(report(limsup_constant(reference_options())));
}

TEST_CASE("criterion 6: estimator ground truth") {
    CHECK(report(estimator_ground_truth(reference_options())));
}

TEST_CASE("criterion 7: pam mean and second moment") {
    CHECK(report(pam_mean_second_moment(reference_options())));
}

TEST_CASE("criterion 8: intermittency exponent") {
    CHECK(report(intermittency_exponent(reference_options())));
}

TEST_CASE("criterion 9: tail order") {
    CHECK(report(tail_order(reference_options())));
}

TEST_CASE("criterion 10: localization lemmas") {
    CHECK(report(localization_lemmas(reference_options())));
}

TEST_CASE("criterion 11: pam dimension bracket") {
    CHECK(report(pam_dimension_bracket(reference_options())));
}
