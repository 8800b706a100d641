#include "seqfuse/lts.hpp"

#include <cmath>
#include <stdexcept>

namespace seqfuse {

LtsSensor::LtsSensor(TestingProblem problem, int id, double level_a, double level_b)
    : problem_(std::move(problem)), id_(id), level_a_(level_a), level_b_(level_b) {
    if (!(level_a > 0 && level_b > 0))
        throw std::invalid_argument("LtsSensor: local thresholds must be positive");
}

std::optional<LtsSensor::Emission> LtsSensor::push(double y) {
    stat_ = accumulate(problem_, stat_, y);
    ++time_;
    double local = gllr(problem_, stat_);
    if (local > -level_b_ && local < level_a_)
        return std::nullopt;

    Emission emission{
        Message{id_, time_, local >= level_a_ ? +1 : -1},
        local,
        time_ - last_emission_time_,
    };
    last_emission_time_ = time_;
    stat_ = SuffStat{};
    return emission;
}

LtsFusion::LtsFusion(double level_a, double level_b, double threshold_a, double threshold_b)
    : level_a_(level_a), level_b_(level_b), threshold_a_(threshold_a),
      threshold_b_(threshold_b) {
    if (!(level_a > 0 && level_b > 0 && threshold_a > 0 && threshold_b > 0))
        throw std::invalid_argument("LtsFusion: thresholds must be positive");
}

LtsFusion::StepOutcome LtsFusion::ingest(const Message& msg) {
    if (stopped_)
        throw std::logic_error("LtsFusion::ingest called after stopping");
    if (msg.bit == 1) ++plus_count_;
    else if (msg.bit == -1) ++minus_count_;
    else throw std::invalid_argument("LtsFusion::ingest: message bit must be +1 or -1");

    double v = statistic();
    StepOutcome out{v, std::nullopt};
    if (v >= threshold_a_ || v <= -threshold_b_) {
        stopped_ = true;
        out.verdict = Verdict{
            v >= threshold_a_ ? Hypothesis::H1 : Hypothesis::H0,
            msg.time,
            messages_received(),
            false,
        };
    }
    return out;
}

double LtsDiagnostics::mean_period() const {
    std::int64_t count = 0, total = 0;
    for (const auto& sensor_periods : periods) {
        count += static_cast<std::int64_t>(sensor_periods.size());
        for (std::int64_t tau : sensor_periods)
            total += tau;
    }
    return count > 0 ? static_cast<double>(total) / static_cast<double>(count) : 0.0;
}

double LtsDiagnostics::plus_fraction() const {
    std::int64_t total = plus_messages + minus_messages;
    return total > 0 ? static_cast<double>(plus_messages) / static_cast<double>(total) : 0.0;
}

std::pair<Verdict, LtsDiagnostics> simulate_lts(const TestingProblem& problem, int sensors,
                                                double level_a, double level_b,
                                                double threshold_a, double threshold_b,
                                                const TruthPoint& truth,
                                                std::span<CounterRng> rngs, std::int64_t cap,
                                                std::vector<TraceEvent>* trace) {
    if (static_cast<int>(rngs.size()) != sensors)
        throw std::invalid_argument("simulate_lts: need one rng stream per sensor");
    if (sensors < 1 || cap < 1)
        throw std::invalid_argument("simulate_lts: need sensors >= 1 and cap >= 1");
    problem.validate_truth(truth);

    std::vector<LtsSensor> sensor_states;
    sensor_states.reserve(static_cast<std::size_t>(sensors));
    for (int l = 0; l < sensors; ++l)
        sensor_states.emplace_back(problem, l, level_a, level_b);

    LtsFusion fusion(level_a, level_b, threshold_a, threshold_b);
    LtsDiagnostics diag;
    diag.periods.resize(static_cast<std::size_t>(sensors));

    for (std::int64_t t = 1; t <= cap; ++t) {
        for (int l = 0; l < sensors; ++l) {
            auto emission = sensor_states[l].push(sample(problem, truth, rngs[l]));
            if (!emission)
                continue;
            diag.periods[l].push_back(emission->period);
            if (emission->message.bit == 1) {
                ++diag.plus_messages;
                diag.sum_overshoot_plus += emission->local_gllr - level_a;
            } else {
                ++diag.minus_messages;
                diag.sum_overshoot_minus += -emission->local_gllr - level_b;
            }
            auto out = fusion.ingest(emission->message);
            if (trace)
                trace->push_back({t, l, emission->message.bit, out.statistic,
                                  emission->local_gllr});
            if (out.verdict)
                return {*out.verdict, std::move(diag)};
        }
    }
    double v = fusion.statistic();
    Verdict censored{v >= 0 ? Hypothesis::H1 : Hypothesis::H0, cap, fusion.messages_received(),
                     true};
    return {censored, std::move(diag)};
}

double reference_exact_fusion_llr(std::span<const Message> messages, double alpha_tilde,
                                  double beta_tilde) {
    if (!(alpha_tilde > 0 && alpha_tilde < 1 && beta_tilde > 0 && beta_tilde < 1))
        throw std::domain_error("reference_exact_fusion_llr: error rates must lie in (0, 1)");
    double plus_term = std::log((1 - beta_tilde) / alpha_tilde);
    double minus_term = std::log(beta_tilde / (1 - alpha_tilde));
    double llr = 0;
    for (const Message& msg : messages)
        llr += msg.bit == 1 ? plus_term : minus_term;
    return llr;
}

}  // namespace seqfuse
