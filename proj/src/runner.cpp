#include "seqfuse/runner.hpp"

#include <stdexcept>

#include "seqfuse/centralized.hpp"
#include "seqfuse/lts.hpp"
#include "seqfuse/uniform.hpp"

namespace seqfuse {

std::string to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::Centralized: return "centralized";
        case Scheme::Uniform: return "uniform";
        case Scheme::Lts: return "lts";
        case Scheme::SimpleSprt: return "simple-sprt";
    }
    return "?";
}

void SchemeParams::validate() const {
    if (scheme == Scheme::Uniform) {
        if (!block_length || *block_length < 1)
            throw std::invalid_argument("uniform scheme requires a block length T0 >= 1");
        if (!lambda)
            throw std::invalid_argument("uniform scheme requires a quantizer threshold lambda");
    }
    if (scheme == Scheme::Lts) {
        if (!level_a || !level_b || !(*level_a > 0) || !(*level_b > 0))
            throw std::invalid_argument("lts scheme requires positive local thresholds a, b");
    }
}

RepOutcome run_replication(const TestingProblem& problem, const SchemeParams& scheme,
                           int sensors, double threshold_a, double threshold_b,
                           const TruthPoint& truth, const StreamKey& key, std::int64_t cap) {
    scheme.validate();
    std::vector<CounterRng> rngs;
    rngs.reserve(static_cast<std::size_t>(sensors));
    for (int l = 0; l < sensors; ++l)
        rngs.push_back(make_stream(key, static_cast<std::uint64_t>(l)));

    switch (scheme.scheme) {
        case Scheme::Centralized: {
            Verdict v = run_centralized(problem, sensors, threshold_a, threshold_b, truth,
                                        rngs, cap);
            return {v, static_cast<double>(v.messages_sent), v.messages_sent};
        }
        case Scheme::Uniform: {
            Verdict v = run_uniform(problem, sensors, *scheme.block_length, *scheme.lambda,
                                    threshold_a, threshold_b, truth, rngs, cap);
            return {v, static_cast<double>(v.messages_sent) * *scheme.block_length,
                    v.messages_sent};
        }
        case Scheme::Lts: {
            auto [v, diag] = simulate_lts(problem, sensors, *scheme.level_a, *scheme.level_b,
                                          threshold_a, threshold_b, truth, rngs, cap);
            double sum = 0;
            std::int64_t count = 0;
            for (const auto& periods : diag.periods) {
                count += static_cast<std::int64_t>(periods.size());
                for (std::int64_t tau : periods)
                    sum += static_cast<double>(tau);
            }
            return {v, sum, count};
        }
        case Scheme::SimpleSprt:
            break;
    }
    throw std::invalid_argument("run_replication: scheme is not simulatable");
}

}  // namespace seqfuse
