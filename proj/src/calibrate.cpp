#include "seqfuse/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "seqfuse/lts.hpp"
#include "seqfuse/numerics.hpp"
#include "seqfuse/uniform.hpp"

namespace seqfuse {

namespace {

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

// Per-sample information rate of the scheme at a truth point: the raw-sample
// KL infimum for centralized/LTS/SPRT, the quantized Bernoulli KL per sample
// for the uniform scheme.
double information_rate(const TestingProblem& problem, const SchemeParams& scheme,
                        const TruthPoint& truth) {
    if (scheme.scheme == Scheme::Uniform)
        return inf_quantized_kl(problem, truth, *scheme.block_length, *scheme.lambda) /
               static_cast<double>(*scheme.block_length);
    return inf_kl(problem, truth);
}

}  // namespace

AsymptoticPrediction predict(const TestingProblem& problem, const SchemeParams& scheme,
                             const TruthPoint& truth, int sensors, double threshold_a,
                             double threshold_b) {
    if (scheme.scheme == Scheme::Uniform && (!scheme.block_length || !scheme.lambda))
        throw std::invalid_argument("predict: uniform scheme requires T0 and lambda");
    problem.validate_truth(truth);
    if (sensors < 1)
        throw std::invalid_argument("predict: sensor count must be >= 1");

    TruthPoint own = truth;
    TruthPoint paired{truth.hypothesis == Hypothesis::H0 ? Hypothesis::H1 : Hypothesis::H0,
                      clamp(truth.value, problem.opposite_set_of(truth.hypothesis))};
    const TruthPoint& h0 = own.hypothesis == Hypothesis::H0 ? own : paired;
    const TruthPoint& h1 = own.hypothesis == Hypothesis::H1 ? own : paired;

    AsymptoticPrediction pred;
    pred.scheme = scheme.scheme;
    pred.expected_size_h0 = threshold_b / (information_rate(problem, scheme, h0) * sensors);
    pred.expected_size_h1 = threshold_a / (information_rate(problem, scheme, h1) * sensors);
    pred.log_alpha = -threshold_a;
    pred.log_beta = -threshold_b;
    return pred;
}

ErrorRate wilson_interval(std::int64_t errors, std::int64_t trials) {
    ErrorRate r;
    r.errors = errors;
    r.trials = trials;
    if (trials <= 0) {
        r.rate = r.ci_lo = r.ci_hi = quiet_nan();
        return r;
    }
    const double z = 1.959963984540054;  // 95%
    double n = static_cast<double>(trials);
    double phat = static_cast<double>(errors) / n;
    double z2 = z * z;
    double denom = 1 + z2 / n;
    double center = (phat + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    r.rate = phat;
    r.ci_lo = std::max(0.0, center - half);
    r.ci_hi = std::min(1.0, center + half);
    return r;
}

double estimate_mean_period(const TestingProblem& problem, double level_a, double level_b,
                            const TruthPoint& reference, std::uint64_t seed,
                            std::int64_t emissions) {
    problem.validate_truth(reference);
    if (emissions < 1)
        throw std::invalid_argument("estimate_mean_period: need at least one emission");
    CounterRng rng(seed, 0xCA11Bu);
    LtsSensor sensor(problem, 0, level_a, level_b);
    std::int64_t done = 0;
    std::int64_t last_emission_time = 0;
    const std::int64_t sample_cap = emissions * 1000000;
    while (done < emissions) {
        auto emission = sensor.push(sample(problem, reference, rng));
        if (emission) {
            ++done;
            last_emission_time = sensor.time();
        }
        if (sensor.time() >= sample_cap)
            throw CalibrationError("estimate_mean_period: sensor never crossed its levels");
    }
    return static_cast<double>(last_emission_time) / static_cast<double>(done);
}

LocalCalibration calibrate_local_thresholds(const TestingProblem& problem,
                                            const TruthPoint& reference, double target_period,
                                            std::uint64_t seed, double tolerance,
                                            std::int64_t emissions, int max_iterations) {
    if (!(target_period >= 1))
        throw std::invalid_argument("calibrate_local_thresholds: target period must be >= 1");
    if (!(tolerance > 0))
        throw std::invalid_argument("calibrate_local_thresholds: tolerance must be positive");

    auto estimate = [&](double a) {
        return estimate_mean_period(problem, a, a, reference, seed, emissions);
    };

    double lo = 1e-4;
    double period_lo = estimate(lo);
    if (std::fabs(period_lo - target_period) <= tolerance * target_period)
        return {lo, lo, period_lo};

    double hi = std::max(0.25, target_period * inf_kl(problem, reference));
    double period_hi = estimate(hi);
    int budget = max_iterations;
    while (period_hi < target_period && budget-- > 0) {
        hi *= 2;
        period_hi = estimate(hi);
    }
    if (period_hi < target_period)
        throw CalibrationError("calibrate_local_thresholds: could not bracket the target");

    // The mean period grows monotonically with the level, so plain bisection
    // on the Monte Carlo estimate converges; noise is well below the
    // tolerance at the default emission count.
    for (int it = 0; it < max_iterations; ++it) {
        double mid = 0.5 * (lo + hi);
        double period = estimate(mid);
        if (std::fabs(period - target_period) <= tolerance * target_period)
            return {mid, mid, period};
        if (period < target_period)
            lo = mid;
        else
            hi = mid;
    }
    throw CalibrationError("calibrate_local_thresholds: bisection did not reach tolerance");
}

namespace {

struct RateEvaluation {
    std::int64_t errors = 0;
    std::int64_t trials = 0;
    double log_rate_adj = 0;  // log of continuity-corrected rate
};

RateEvaluation evaluate_error_rate(const TestingProblem& problem, const SchemeParams& scheme,
                                   int sensors, double threshold_a, double threshold_b,
                                   const TruthPoint& probe, Hypothesis wrong_decision,
                                   const StreamKey& base_key, std::uint64_t batch,
                                   std::int64_t budget, std::int64_t cap, int threads) {
    std::vector<unsigned char> outcome(static_cast<std::size_t>(budget), 0);
    parallel_for(budget, threads, [&](std::int64_t i) {
        StreamKey key = base_key;
        key.batch = batch;
        key.replication = static_cast<std::uint64_t>(i);
        RepOutcome rep = run_replication(problem, scheme, sensors, threshold_a, threshold_b,
                                         probe, key, cap);
        if (rep.verdict.censored)
            outcome[static_cast<std::size_t>(i)] = 2;
        else if (rep.verdict.decision == wrong_decision)
            outcome[static_cast<std::size_t>(i)] = 1;
    });
    RateEvaluation eval;
    for (unsigned char o : outcome) {
        if (o == 2)
            continue;
        ++eval.trials;
        if (o == 1)
            ++eval.errors;
    }
    eval.log_rate_adj = std::log((static_cast<double>(eval.errors) + 0.5) /
                                 (static_cast<double>(eval.trials) + 1.0));
    return eval;
}

}  // namespace

GlobalCalibration calibrate_global_thresholds(const TestingProblem& problem,
                                              const SchemeParams& scheme, int sensors,
                                              const TruthPoint& h0_probe,
                                              const TruthPoint& h1_probe, double target_alpha,
                                              double target_beta, const StreamKey& base_key,
                                              std::int64_t budget, std::int64_t cap,
                                              int rounds, int threads) {
    scheme.validate();
    if (!(target_alpha > 0 && target_alpha < 1 && target_beta > 0 && target_beta < 1))
        throw std::invalid_argument("calibrate_global_thresholds: targets must lie in (0, 1)");

    GlobalCalibration result;
    result.threshold_a = -std::log(target_alpha);
    result.threshold_b = -std::log(target_beta);
    if (budget == 0) {
        result.alpha = wilson_interval(0, 0);
        result.beta = wilson_interval(0, 0);
        return result;
    }

    // A target below the Monte Carlo resolution cannot be matched: return
    // the asymptotic thresholds and flag it.
    double min_target = std::min(target_alpha, target_beta);
    if (min_target * static_cast<double>(budget) < 5.0)
        result.warning = true;

    const std::uint64_t kCalibrationBatchBase = 1000;
    double log_ta = std::log(target_alpha);
    double log_tb = std::log(target_beta);
    double prev_a = 0, prev_la = 0, prev_b = 0, prev_lb = 0;
    bool have_prev = false;

    int refine_rounds = result.warning ? 0 : rounds;
    for (int round = 0; round < refine_rounds; ++round) {
        std::uint64_t batch = kCalibrationBatchBase + 2 * static_cast<std::uint64_t>(round);
        RateEvaluation ae = evaluate_error_rate(problem, scheme, sensors, result.threshold_a,
                                                result.threshold_b, h0_probe, Hypothesis::H1,
                                                base_key, batch, budget, cap, threads);
        RateEvaluation be = evaluate_error_rate(problem, scheme, sensors, result.threshold_a,
                                                result.threshold_b, h1_probe, Hypothesis::H0,
                                                base_key, batch + 1, budget, cap, threads);
        double slope_a = -1.0, slope_b = -1.0;
        if (have_prev) {
            if (std::fabs(result.threshold_a - prev_a) > 1e-9)
                slope_a = (ae.log_rate_adj - prev_la) / (result.threshold_a - prev_a);
            if (std::fabs(result.threshold_b - prev_b) > 1e-9)
                slope_b = (be.log_rate_adj - prev_lb) / (result.threshold_b - prev_b);
            slope_a = std::clamp(slope_a, -3.0, -0.2);
            slope_b = std::clamp(slope_b, -3.0, -0.2);
        }
        prev_a = result.threshold_a;
        prev_la = ae.log_rate_adj;
        prev_b = result.threshold_b;
        prev_lb = be.log_rate_adj;
        have_prev = true;

        double step_a = std::clamp((log_ta - ae.log_rate_adj) / slope_a, -2.0, 2.0);
        double step_b = std::clamp((log_tb - be.log_rate_adj) / slope_b, -2.0, 2.0);
        result.threshold_a = std::max(0.1, result.threshold_a + step_a);
        result.threshold_b = std::max(0.1, result.threshold_b + step_b);
    }

    std::uint64_t batch = kCalibrationBatchBase + 2 * static_cast<std::uint64_t>(refine_rounds);
    RateEvaluation ae = evaluate_error_rate(problem, scheme, sensors, result.threshold_a,
                                            result.threshold_b, h0_probe, Hypothesis::H1,
                                            base_key, batch, budget, cap, threads);
    RateEvaluation be = evaluate_error_rate(problem, scheme, sensors, result.threshold_a,
                                            result.threshold_b, h1_probe, Hypothesis::H0,
                                            base_key, batch + 1, budget, cap, threads);
    result.alpha = wilson_interval(ae.errors, ae.trials);
    result.beta = wilson_interval(be.errors, be.trials);
    return result;
}

}  // namespace seqfuse
