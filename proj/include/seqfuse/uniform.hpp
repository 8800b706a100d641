#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "seqfuse/model.hpp"
#include "seqfuse/verdict.hpp"

namespace seqfuse {

// One sensor of the uniform-sampling scheme: accumulates a block of T0
// samples into the sufficient statistic and quantizes it to a single bit.
class UniformSensor {
public:
    UniformSensor(TestingProblem problem, int block_length, double lambda);

    // Feed one sample; returns the emitted bit at the end of each block,
    // std::nullopt in between. Ties (statistic exactly lambda) emit -1.
    std::optional<int> push(double y);

    const SuffStat& block() const { return block_; }
    int block_length() const { return block_length_; }

private:
    TestingProblem problem_;
    int block_length_;
    double lambda_;
    SuffStat block_;
};

// Quantize one complete block (exactly T0 samples) to a bit in {+1, -1}.
int quantize_block(const TestingProblem& problem, int block_length, double lambda,
                   std::span<const double> samples);

// Constrained MLE of the parameter over `interval` from the Bernoulli bit
// counts. r1 counts +1 bits, r0 counts -1 bits. Boundary counts (r0 == 0 or
// r1 == 0) map to the corresponding interval endpoint.
double bernoulli_mle(const TestingProblem& problem, int block_length, double lambda,
                     std::int64_t r0, std::int64_t r1, const ParameterInterval& interval);

// Fusion center of the uniform-sampling scheme: a GSPRT on the received bit
// counts. Stopping times are recorded in raw sampling instants (multiples of
// the block length).
class BernoulliFusion {
public:
    BernoulliFusion(TestingProblem problem, int sensors, int block_length, double lambda,
                    double threshold_a, double threshold_b);

    struct StepOutcome {
        double statistic = 0;
        std::optional<Verdict> verdict;
    };

    // Ingest the bits of one transmission period (any count, normally L) and
    // re-test. An empty span leaves the state unchanged.
    StepOutcome step(std::span<const int> bits);

    // GLLR of the accumulated bit counts; requires at least one bit.
    double statistic() const;

    std::int64_t r0() const { return r0_; }
    std::int64_t r1() const { return r1_; }
    bool stopped() const { return stopped_; }

private:
    TestingProblem problem_;
    int sensors_;
    int block_length_;
    double lambda_;
    double threshold_a_;
    double threshold_b_;
    std::int64_t r0_ = 0;
    std::int64_t r1_ = 0;
    std::int64_t blocks_ = 0;
    bool stopped_ = false;
};

// GLLR of Bernoulli counts under quantized-bit probabilities: the sup over
// the alternative interval minus the sup over the null interval, each solved
// by the closed-form constrained MLE.
double bernoulli_gllr(const TestingProblem& problem, int block_length, double lambda,
                      std::int64_t r0, std::int64_t r1);

// KL divergence between the bit distributions at parameters `from.value` and
// `to` (not divided by the block length).
double quantized_kl(const TestingProblem& problem, const TruthPoint& from, double to,
                    int block_length, double lambda);

// Infimum of quantized_kl over the interval opposite to `fixed`.
double inf_quantized_kl(const TestingProblem& problem, const TruthPoint& fixed,
                        int block_length, double lambda);

// Minimax quantizer threshold: the lambda maximizing the worst-case
// quantized KL divergence over the two parameter sets. Inner minimization is
// exact at interval endpoints (the divergence is monotone in each parameter
// for both models); a positive inner_grid adds a safety grid inside the
// intervals. The outer search is a coarse grid plus golden-section
// refinement down to `resolution`.
double minimax_lambda(const TestingProblem& problem, int block_length, double resolution,
                      int inner_grid = 0);

// Full uniform-scheme replication under `truth`: per-sensor block
// quantization, batch delivery at block boundaries, fusion test after each
// batch. messages_sent counts transmitted bits.
Verdict run_uniform(const TestingProblem& problem, int sensors, int block_length,
                    double lambda, double threshold_a, double threshold_b,
                    const TruthPoint& truth, std::span<CounterRng> rngs, std::int64_t cap,
                    std::vector<TraceEvent>* trace = nullptr);

}  // namespace seqfuse
