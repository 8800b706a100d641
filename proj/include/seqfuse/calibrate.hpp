#pragma once

#include <cstdint>
#include <stdexcept>

#include "seqfuse/model.hpp"
#include "seqfuse/runner.hpp"
#include "seqfuse/scheme.hpp"

namespace seqfuse {

// Asymptotic performance of a scheme at thresholds (A, B): expected sample
// sizes under each hypothesis and the log error probabilities. The size
// under the truth's own hypothesis is evaluated at truth.value; the opposite
// side at the nearest point of its interval, which is the worst case for
// both models.
struct AsymptoticPrediction {
    Scheme scheme = Scheme::Centralized;
    double expected_size_h0 = 0;
    double expected_size_h1 = 0;
    double log_alpha = 0;
    double log_beta = 0;

    double expected_size(Hypothesis h) const {
        return h == Hypothesis::H0 ? expected_size_h0 : expected_size_h1;
    }
};

AsymptoticPrediction predict(const TestingProblem& problem, const SchemeParams& scheme,
                             const TruthPoint& truth, int sensors, double threshold_a,
                             double threshold_b);

// Empirical rate with a Wilson 95% confidence interval.
struct ErrorRate {
    double rate = 0;
    double ci_lo = 0;
    double ci_hi = 0;
    std::int64_t errors = 0;
    std::int64_t trials = 0;
};

ErrorRate wilson_interval(std::int64_t errors, std::int64_t trials);

struct CalibrationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Monte Carlo estimate of the mean inter-communication period of one LTS
// sensor under `reference`, from `emissions` complete local decisions.
double estimate_mean_period(const TestingProblem& problem, double level_a, double level_b,
                            const TruthPoint& reference, std::uint64_t seed,
                            std::int64_t emissions = 4000);

struct LocalCalibration {
    double level_a = 0;
    double level_b = 0;
    double estimated_period = 0;
};

// Finds symmetric local thresholds (a = b) whose mean inter-communication
// period under `reference` matches `target_period` to the relative
// tolerance, by bisection on a. Deterministic given the seed. Throws
// CalibrationError when the bracket or the tolerance cannot be reached
// within the iteration cap.
LocalCalibration calibrate_local_thresholds(const TestingProblem& problem,
                                            const TruthPoint& reference, double target_period,
                                            std::uint64_t seed, double tolerance = 0.05,
                                            std::int64_t emissions = 4000,
                                            int max_iterations = 80);

struct GlobalCalibration {
    double threshold_a = 0;
    double threshold_b = 0;
    ErrorRate alpha;
    ErrorRate beta;
    bool warning = false;
};

// Refines (A, B) from the asymptotic starting point -log(target) so that the
// achieved error rates match the targets: one slope -1 step on
// log-empirical-error, then secant steps from the previous two evaluations.
// budget == 0 returns the asymptotic thresholds unrefined; a target finer
// than the budget can resolve returns them with the warning flag set.
GlobalCalibration calibrate_global_thresholds(const TestingProblem& problem,
                                              const SchemeParams& scheme, int sensors,
                                              const TruthPoint& h0_probe,
                                              const TruthPoint& h1_probe, double target_alpha,
                                              double target_beta, const StreamKey& base_key,
                                              std::int64_t budget, std::int64_t cap,
                                              int rounds = 2, int threads = 1);

}  // namespace seqfuse
