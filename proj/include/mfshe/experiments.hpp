#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mfshe/config.hpp"
#include "mfshe/cover.hpp"
#include "mfshe/exec.hpp"
#include "mfshe/model_params.hpp"

namespace mfshe::harness {

struct GammaRow {
    double gamma = 0.0;
    fractal::DimensionFit fit;
    // per-shell replica-averaged occupied counts, indexed by shell
    std::vector<std::pair<int, double>> mean_counts;
};

struct ShellMax {
    int n = 0;
    double max_normalized = 0.0;  // max of Z / sd(Z) over the shell patch
    double ratio = 0.0;           // max / sqrt(n)
};

// Core computations, shared by the CLI experiments and the acceptance suite.

// Linear equation: per-shell unit-spacing patches on [e^{n-1}, e^n) sampled
// block-independently; one field per (shell, replica) thresholded at every
// gamma. Returns the (gamma, dimension fit) table.
std::vector<GammaRow> linear_dimension_table(
    const ModelParams& model, int shell_min, int shell_max,
    const std::vector<double>& gammas, int replicas, std::int64_t block,
    std::uint64_t seed, ExecPolicy policy = ExecPolicy::Parallel);

// Per-shell maxima of the normalized field.
std::vector<ShellMax> limsup_table(const ModelParams& model, int shell_min,
                                   int shell_max, std::int64_t block,
                                   std::uint64_t seed,
                                   ExecPolicy policy = ExecPolicy::Parallel);

// PAM: per-shell unit-spacing torus patches, spectral-noise simulation to
// the model horizon, peaks under the pam gauge.
std::vector<GammaRow> pam_dimension_table(const ModelParams& model,
                                          int shell_min, int shell_max,
                                          const std::vector<double>& gammas,
                                          int replicas, std::uint64_t seed,
                                          ExecPolicy policy = ExecPolicy::Parallel);

// Pilot tail run calibrating a gamma grid that spans dimension drops
// targets*d under the pam gauge (deterministic given the seed).
std::vector<double> calibrate_pam_gammas(const ModelParams& model,
                                         const std::vector<double>& targets,
                                         std::uint64_t seed,
                                         ExecPolicy policy = ExecPolicy::Parallel);

struct RunRecord {
    std::string config_hash;
    std::map<std::string, double> timings_sec;
    std::vector<std::string> artifacts;
    std::vector<GammaRow> dimension_table;
    std::vector<ShellMax> maxima;
    std::map<std::string, double> stats;
    bool failed = false;
    std::string failure;
};

RunRecord run_linear_dimension_experiment(const ExperimentConfig& cfg);
RunRecord run_linear_limsup_experiment(const ExperimentConfig& cfg);
RunRecord run_pam_dimension_experiment(const ExperimentConfig& cfg);
RunRecord run_validation_suite(const ExperimentConfig& cfg);

RunRecord run_experiment(const ExperimentConfig& cfg);

// Recomputes every summary statistic from the persisted raw files and
// compares against summary.json; returns the list of mismatches (empty =
// verified).
std::vector<std::string> verify_run(const std::string& run_dir);

// Human-readable rendering of a run directory's summary.
std::string report_run(const std::string& run_dir);

std::string config_hash(const ExperimentConfig& cfg);

} // namespace mfshe::harness
