#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "seqfuse/model.hpp"
#include "seqfuse/verdict.hpp"

namespace seqfuse {

// Centralized GSPRT: all L sensors report raw samples each instant, the
// fusion center pools them into one sufficient statistic and stops as soon
// as the pooled GLLR leaves (-B, A). Thresholds are closed: >= A decides H1,
// <= -B decides H0.
class CentralizedEngine {
public:
    CentralizedEngine(TestingProblem problem, int sensors, double threshold_a,
                      double threshold_b);

    struct StepOutcome {
        double statistic = 0;
        std::optional<Verdict> verdict;
    };

    // Feed one sampling instant (exactly L samples). Throws std::logic_error
    // after the engine has stopped, std::invalid_argument on a wrong count.
    StepOutcome step(std::span<const double> samples);

    const TestingProblem& problem() const { return problem_; }
    int sensors() const { return sensors_; }
    std::int64_t time() const { return time_; }
    const SuffStat& pooled() const { return pooled_; }
    bool stopped() const { return stopped_; }

private:
    TestingProblem problem_;
    int sensors_;
    double threshold_a_;
    double threshold_b_;
    SuffStat pooled_;
    std::int64_t time_ = 0;
    bool stopped_ = false;
};

// Drives a fresh engine with i.i.d. samples under `truth` until it stops or
// `cap` sampling instants have elapsed. Each sample counts as one
// full-precision transmission, so messages_sent = L * stopping_time.
Verdict run_centralized(const TestingProblem& problem, int sensors, double threshold_a,
                        double threshold_b, const TruthPoint& truth,
                        std::span<CounterRng> rngs, std::int64_t cap,
                        std::vector<TraceEvent>* trace = nullptr);

}  // namespace seqfuse
