#pragma once

#include <cstdint>
#include <vector>

#include "seqfuse/model.hpp"
#include "seqfuse/rng.hpp"
#include "seqfuse/scheme.hpp"
#include "seqfuse/verdict.hpp"

namespace seqfuse {

// One replication of any scheme, with per-sensor rng streams derived from
// the key. sum_periods / n_periods carry the inter-communication periods
// (per raw sample for centralized, the block length for uniform, measured
// for LTS) so that mean periods aggregate the same way for every scheme.
struct RepOutcome {
    Verdict verdict;
    double sum_periods = 0;
    std::int64_t n_periods = 0;
};

RepOutcome run_replication(const TestingProblem& problem, const SchemeParams& scheme,
                           int sensors, double threshold_a, double threshold_b,
                           const TruthPoint& truth, const StreamKey& key, std::int64_t cap);

// Deterministic replication loop: every index writes only to its own slot,
// so the result is identical for any thread count. threads <= 1 runs the
// plain serial loop that the tests use as the reference implementation.
template <typename Fn>
void parallel_for(std::int64_t n, int threads, Fn&& fn) {
    if (threads <= 1) {
        for (std::int64_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (std::int64_t i = 0; i < n; ++i)
        fn(i);
#else
    for (std::int64_t i = 0; i < n; ++i)
        fn(i);
#endif
}

}  // namespace seqfuse
