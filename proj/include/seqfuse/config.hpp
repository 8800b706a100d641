#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "seqfuse/experiment.hpp"

namespace seqfuse {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Declarative mirror of one scheme entry. Optional fields that stay unset
// are resolved later: a missing uniform lambda becomes the minimax
// threshold, missing LTS levels are calibrated to target_period.
struct SchemeConfig {
    Scheme kind = Scheme::Centralized;
    std::optional<int> block_length;
    std::optional<double> lambda;
    double quantizer_resolution = 1e-3;
    std::optional<double> level_a;
    std::optional<double> level_b;
    std::optional<double> target_period;
    std::optional<TruthPoint> calibration_reference;
    double calibration_tolerance = 0.05;
    std::int64_t calibration_emissions = 4000;
};

// Declarative mirror of an experiment run, schema-validated before any
// computation. Unknown keys anywhere in the document are rejected.
struct RunConfig {
    ModelKind model_kind = ModelKind::MeanShift;
    double sigma2 = 1.0;
    ParameterInterval gamma_set;
    ParameterInterval theta_set;
    std::vector<SchemeConfig> schemes;
    bool compare = false;
    int sensors = 1;
    TruthPoint truth;
    std::optional<double> probe_gamma;
    std::optional<double> probe_theta;
    SweepAxis axis = SweepAxis::Alpha;
    std::vector<double> grid;
    double target_alpha = 1e-2;
    double target_beta = 1e-2;
    ThresholdSource threshold_source = ThresholdSource::Asymptotic;
    double explicit_a = 0;
    double explicit_b = 0;
    std::int64_t calibration_budget = 20000;
    int calibration_rounds = 2;
    std::int64_t replications = 1000;
    std::uint64_t seed = 1;
    std::int64_t cap = 10000000;
    int threads = 1;
    std::string output_path;
    bool output_json = false;
};

RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

TestingProblem problem_from_config(const RunConfig& config);

// Computes everything the declarative config left open (minimax quantizer,
// LTS level calibration) and expands to one ExperimentSpec per scheme.
struct ResolvedRun {
    std::vector<ExperimentSpec> specs;
    bool compare = false;
    std::string output_path;
    bool output_json = false;
};

ResolvedRun resolve_run(const RunConfig& config, int threads_override = 0);

}  // namespace seqfuse
