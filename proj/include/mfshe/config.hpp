#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfshe/model_params.hpp"

namespace mfshe::harness {

enum class ExperimentKind {
    LinearDimension,
    LinearLimsup,
    PamDimension,
    Validation,
};

const char* kind_name(ExperimentKind k);

// Experiment configuration, file form: INI-style sections [experiment],
// [model], [sampler], [shells], [gauge], [output]. Unknown sections or keys
// are errors; the file round-trips losslessly through save().
struct ExperimentConfig {
    // [experiment]
    ExperimentKind kind = ExperimentKind::LinearDimension;
    std::string id = "run";
    std::uint64_t seed = 1;

    // [model]
    double alpha = 2.0;
    double beta = 0.5;
    int d = 1;
    double t = 1.0;

    // [sampler]
    std::string scheme = "block-independent";
    std::int64_t block = 4096;
    double spacing = 1.0;
    int grid_n = 512;          // pam
    double torus_side = 64.0;  // pam
    double dt = 0.0;           // pam; 0 = auto from the stability rule

    // [shells]
    int shell_min = 6;
    int shell_max = 12;
    int replicas = 8;

    // [gauge]
    std::string gauge_kind = "linear-she";
    std::vector<double> gammas;  // empty for pam = pilot-calibrated

    // [output]
    std::string out_dir = "out";
    int workers = 0;  // 0 = library default

    ModelParams model() const { return ModelParams(alpha, beta, d, t); }

    // Throws ConfigError listing every violated requirement.
    void validate() const;

    std::string to_text() const;
    static ExperimentConfig from_text(const std::string& text);
    static ExperimentConfig load(const std::string& path);
    void save(const std::string& path) const;
};

// Applies MFSHE_SEED and MFSHE_WORKERS environment overrides.
void apply_env_overrides(ExperimentConfig& cfg);

} // namespace mfshe::harness
