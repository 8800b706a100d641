#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqfuse/calibrate.hpp"
#include "seqfuse/model.hpp"
#include "seqfuse/scheme.hpp"

namespace seqfuse {

enum class SweepAxis { Alpha, Beta, TruthValue, Sensors };

enum class ThresholdSource { Asymptotic, Explicit, Calibrated };

// Declarative description of one Monte Carlo sweep: a model, a scheme, a
// truth point, an axis with its grid, and the replication/seeding setup.
// Error rates are measured under worst-case boundary probes: the sweep's own
// truth plus an opposite-hypothesis probe (defaulting to the endpoint of the
// opposite interval nearest the other set).
struct ExperimentSpec {
    TestingProblem problem;
    SchemeParams scheme;
    int sensors = 1;
    TruthPoint truth;
    std::optional<double> h0_probe;
    std::optional<double> h1_probe;
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
};

// Aggregated result of one grid point. Means exclude censored replications;
// censored counts both measurement batches. error_flag marks a point whose
// censored fraction exceeded 1% (or that censored entirely).
struct McSummary {
    int point_index = 0;
    std::string point_label;
    Scheme scheme = Scheme::Centralized;
    SchemeParams scheme_used;
    int sensors = 1;
    double target_alpha = 0;
    double target_beta = 0;
    double threshold_a = 0;
    double threshold_b = 0;
    TruthPoint truth;
    std::int64_t replications = 0;
    double mean_stopping_time = 0;
    double stderr_stopping_time = 0;
    ErrorRate alpha;
    ErrorRate beta;
    double mean_messages = 0;
    double mean_period = 0;
    std::int64_t censored = 0;
    double predicted_size = 0;
    bool calibration_warning = false;
    bool error_flag = false;
    std::string error_note;
};

// The per-point configuration a sweep point resolves to: the swept value
// substituted into targets/truth/sensors and the thresholds derived from the
// configured source (including Monte Carlo calibration when requested).
struct PointResolution {
    double target_alpha = 0;
    double target_beta = 0;
    TruthPoint truth;
    int sensors = 1;
    double threshold_a = 0;
    double threshold_b = 0;
    bool calibration_warning = false;
    std::string label;
};

PointResolution resolve_point_setup(const ExperimentSpec& spec, int point_index);

// Runs one grid point: a measurement batch under the spec's truth and an
// opposite-hypothesis probe batch for the other error rate, each of
// spec.replications independent trajectories on streams keyed by
// (seed, point, batch, replication, sensor).
McSummary run_point(const ExperimentSpec& spec, int point_index);

// One summary per grid point.
std::vector<McSummary> run_sweep(const ExperimentSpec& spec);

struct SchemeRatios {
    int point_index = 0;
    double stopping_time_lts_vs_centralized = 0;
    double stopping_time_uniform_vs_centralized = 0;
    double messages_lts_vs_centralized = 0;
    double messages_uniform_vs_centralized = 0;
};

struct CompareReport {
    std::vector<McSummary> rows;  // one per (point, scheme), scheme-major order
    std::vector<SchemeRatios> ratios;
};

// Joint run of three specs (centralized, uniform, lts) that share the model,
// sensor count, grid, and error targets; throws std::invalid_argument when
// they do not.
CompareReport compare_schemes(const ExperimentSpec& centralized, const ExperimentSpec& uniform,
                              const ExperimentSpec& lts);

}  // namespace seqfuse
