#pragma once

#include <cstdint>

#include "seqfuse/model.hpp"

namespace seqfuse {

// Outcome of one sequential test replication. stopping_time counts global
// sampling instants (each instant yields one sample per sensor). A censored
// verdict means the sampling cap was reached before either threshold was
// crossed; its decision is the sign of the running statistic at the cap and
// must not enter error-rate estimates.
struct Verdict {
    Hypothesis decision = Hypothesis::H0;
    std::int64_t stopping_time = 0;
    std::int64_t messages_sent = 0;
    bool censored = false;
};

// Event record for single-trajectory tracing (--trace in the CLI).
struct TraceEvent {
    std::int64_t time = 0;
    int sensor = -1;       // -1 for fusion-level / centralized events
    int bit = 0;           // +1/-1 for messages, 0 otherwise
    double statistic = 0;  // fusion statistic after the event
    double local = 0;      // local GLLR at emission where applicable
};

}  // namespace seqfuse
