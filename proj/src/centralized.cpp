#include "seqfuse/centralized.hpp"

#include <stdexcept>

namespace seqfuse {

CentralizedEngine::CentralizedEngine(TestingProblem problem, int sensors, double threshold_a,
                                     double threshold_b)
    : problem_(std::move(problem)), sensors_(sensors), threshold_a_(threshold_a),
      threshold_b_(threshold_b) {
    if (sensors < 1)
        throw std::invalid_argument("CentralizedEngine: sensor count must be >= 1");
    if (!(threshold_a > 0 && threshold_b > 0))
        throw std::invalid_argument("CentralizedEngine: thresholds must be positive");
}

CentralizedEngine::StepOutcome CentralizedEngine::step(std::span<const double> samples) {
    if (stopped_)
        throw std::logic_error("CentralizedEngine::step called after stopping");
    if (static_cast<int>(samples.size()) != sensors_)
        throw std::invalid_argument("CentralizedEngine::step: expected one sample per sensor");

    for (double y : samples)
        pooled_ = accumulate(problem_, pooled_, y);
    ++time_;

    // The clamped MLE makes incremental updates of the GLLR incorrect, so it
    // is recomputed from the pooled statistic (O(1) per step).
    double statistic = gllr(problem_, pooled_);

    StepOutcome out{statistic, std::nullopt};
    if (statistic >= threshold_a_ || statistic <= -threshold_b_) {
        stopped_ = true;
        out.verdict = Verdict{
            statistic >= threshold_a_ ? Hypothesis::H1 : Hypothesis::H0,
            time_,
            time_ * sensors_,
            false,
        };
    }
    return out;
}

Verdict run_centralized(const TestingProblem& problem, int sensors, double threshold_a,
                        double threshold_b, const TruthPoint& truth,
                        std::span<CounterRng> rngs, std::int64_t cap,
                        std::vector<TraceEvent>* trace) {
    if (static_cast<int>(rngs.size()) != sensors)
        throw std::invalid_argument("run_centralized: need one rng stream per sensor");
    if (cap < 1)
        throw std::invalid_argument("run_centralized: cap must be >= 1");
    problem.validate_truth(truth);

    CentralizedEngine engine(problem, sensors, threshold_a, threshold_b);
    std::vector<double> samples(sensors);
    for (std::int64_t t = 1; t <= cap; ++t) {
        for (int l = 0; l < sensors; ++l)
            samples[l] = sample(problem, truth, rngs[l]);
        auto out = engine.step(samples);
        if (trace)
            trace->push_back({t, -1, 0, out.statistic, out.statistic});
        if (out.verdict)
            return *out.verdict;
    }
    double statistic = gllr(problem, engine.pooled());
    return Verdict{statistic >= 0 ? Hypothesis::H1 : Hypothesis::H0, cap, cap * sensors, true};
}

}  // namespace seqfuse
