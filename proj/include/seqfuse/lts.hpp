#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "seqfuse/model.hpp"
#include "seqfuse/verdict.hpp"

namespace seqfuse {

// One-bit message of the level-triggered scheme: the local decision of a
// repeated GSPRT at a sensor, stamped with the global sampling instant.
struct Message {
    int sensor = 0;
    std::int64_t time = 0;
    int bit = 0;  // +1 or -1
};

// A sensor running a repeated local GSPRT with thresholds (-b, a). After
// each emission the local memory is reset, so successive decisions are i.i.d.
class LtsSensor {
public:
    LtsSensor(TestingProblem problem, int id, double level_a, double level_b);

    struct Emission {
        Message message;
        double local_gllr = 0;  // the overshot local GLLR at emission
        std::int64_t period = 0;  // samples since the previous emission
    };

    // Ingest one sample; returns the emission if a local decision was made.
    std::optional<Emission> push(double y);

    const SuffStat& stat() const { return stat_; }
    int id() const { return id_; }
    std::int64_t time() const { return time_; }

private:
    TestingProblem problem_;
    int id_;
    double level_a_;
    double level_b_;
    SuffStat stat_;
    std::int64_t time_ = 0;
    std::int64_t last_emission_time_ = 0;
};

// Fusion statistic of the LTS scheme: the lattice random walk that adds a
// for every +1 message and subtracts b for every -1 message. The value is
// derived from integer message counts, so it lies on {r*a - s*b} exactly.
class LtsFusion {
public:
    LtsFusion(double level_a, double level_b, double threshold_a, double threshold_b);

    struct StepOutcome {
        double statistic = 0;
        std::optional<Verdict> verdict;
    };

    // Deliver one message and re-test (closed thresholds). Throws
    // std::logic_error after the fusion has stopped.
    StepOutcome ingest(const Message& msg);

    double statistic() const {
        return static_cast<double>(plus_count_) * level_a_ -
               static_cast<double>(minus_count_) * level_b_;
    }
    std::int64_t messages_received() const { return plus_count_ + minus_count_; }
    std::int64_t plus_count() const { return plus_count_; }
    std::int64_t minus_count() const { return minus_count_; }
    bool stopped() const { return stopped_; }

private:
    double level_a_;
    double level_b_;
    double threshold_a_;
    double threshold_b_;
    std::int64_t plus_count_ = 0;
    std::int64_t minus_count_ = 0;
    bool stopped_ = false;
};

// Per-run diagnostics: inter-communication periods and local decision
// counts, from which local error rates are estimated (the +1 fraction
// estimates the local type-I error under an H0 truth; the -1 fraction the
// local type-II error under an H1 truth).
struct LtsDiagnostics {
    std::vector<std::vector<std::int64_t>> periods;  // per sensor
    std::int64_t plus_messages = 0;
    std::int64_t minus_messages = 0;
    double sum_overshoot_plus = 0;   // local GLLR minus a over +1 emissions
    double sum_overshoot_minus = 0;  // -(local GLLR) minus b over -1 emissions

    double mean_period() const;
    double plus_fraction() const;
};

// Synchronous-clock LTS simulation: at each global instant every sensor
// ingests one fresh sample; same-instant emissions are delivered to the
// fusion in ascending sensor-index order with a threshold check after each
// message.
std::pair<Verdict, LtsDiagnostics> simulate_lts(const TestingProblem& problem, int sensors,
                                                double level_a, double level_b,
                                                double threshold_a, double threshold_b,
                                                const TruthPoint& truth,
                                                std::span<CounterRng> rngs, std::int64_t cap,
                                                std::vector<TraceEvent>* trace = nullptr);

// Exact Bernoulli LLR of a message sequence given the local error
// probabilities; diagnostic reference for how well the lattice walk
// approximates it when alpha ~ e^-a and beta ~ e^-b.
double reference_exact_fusion_llr(std::span<const Message> messages, double alpha_tilde,
                                  double beta_tilde);

}  // namespace seqfuse
