#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "seqfuse/calibrate.hpp"
#include "seqfuse/lts.hpp"

using namespace seqfuse;

namespace {

TestingProblem paper_mean_shift() {
    return TestingProblem::mean_shift({0, 0}, {0.4, 2.0}, 1.0);
}

std::vector<CounterRng> streams(int sensors, std::uint64_t seed, std::uint64_t salt) {
    std::vector<CounterRng> rngs;
    for (int l = 0; l < sensors; ++l)
        rngs.emplace_back(seed, salt, static_cast<std::uint64_t>(l));
    return rngs;
}

}  // namespace

TEST_SUITE("lts") {
    TEST_CASE("sensor emits local decisions and resets") {
        LtsSensor sensor(paper_mean_shift(), 0, 0.4, 0.4);
        auto quiet = sensor.push(0.0);
        CHECK(!quiet.has_value());
        CHECK(sensor.stat().n == 1);

        LtsSensor eager(paper_mean_shift(), 0, 0.4, 0.4);
        auto emission = eager.push(1.0);
        REQUIRE(emission.has_value());
        CHECK(emission->message.bit == 1);
        CHECK(emission->message.time == 1);
        CHECK(emission->local_gllr == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(eager.stat().n == 0);
        CHECK(eager.stat().acc == 0.0);
    }

    TEST_CASE("epsilon thresholds emit the sign of the one-sample gllr") {
        LtsSensor sensor(paper_mean_shift(), 0, 1e-9, 1e-9);
        auto first = sensor.push(0.0);
        REQUIRE(first.has_value());
        CHECK(first->message.bit == -1);
        auto second = sensor.push(1.0);
        REQUIRE(second.has_value());
        CHECK(second->message.bit == 1);
        CHECK(second->period == 1);
    }

    TEST_CASE("fusion walks the lattice") {
        LtsFusion fusion(3.0, 3.0, 100.0, 100.0);
        fusion.ingest({0, 1, 1});
        auto out = fusion.ingest({0, 2, 1});
        CHECK(out.statistic == 6.0);
        auto back = fusion.ingest({0, 3, -1});
        CHECK(back.statistic == 3.0);
        auto zero = fusion.ingest({0, 4, -1});
        CHECK(zero.statistic == 0.0);
    }

    TEST_CASE("fusion stops on a closed threshold and rejects further input") {
        LtsFusion fusion(3.0, 3.0, 5.0, 5.0);
        CHECK(!fusion.ingest({0, 1, 1}).verdict.has_value());
        auto out = fusion.ingest({0, 2, 1});
        REQUIRE(out.verdict.has_value());
        CHECK(out.verdict->decision == Hypothesis::H1);
        CHECK(out.verdict->stopping_time == 2);
        CHECK(out.verdict->messages_sent == 2);
        CHECK_THROWS_AS(fusion.ingest({0, 3, 1}), std::logic_error);
    }

    TEST_CASE("fusion statistic always sits on the signed lattice") {
        LtsFusion fusion(1.3, 0.9, 1e9, 1e9);
        CounterRng rng(8);
        std::int64_t plus = 0, minus = 0;
        for (std::int64_t n = 1; n <= 500; ++n) {
            int bit = rng.next_uniform() < 0.5 ? 1 : -1;
            (bit == 1 ? plus : minus) += 1;
            double v = fusion.ingest({0, n, bit}).statistic;
            CHECK(v == static_cast<double>(plus) * 1.3 - static_cast<double>(minus) * 0.9);
        }
    }

    TEST_CASE("one sensor with a dominant global threshold mirrors the local decision") {
        auto problem = TestingProblem::mean_shift({0, 0}, {0.7, 0.7}, 1.0);
        for (int seed = 0; seed < 50; ++seed) {
            auto rngs = streams(1, seed, 21);
            auto [verdict, diag] = simulate_lts(problem, 1, 2.0, 2.0, 1.5, 1.5,
                                                {Hypothesis::H1, 0.7}, rngs, 100000);
            REQUIRE(!verdict.censored);
            CHECK(verdict.messages_sent == 1);
            CHECK(diag.plus_messages + diag.minus_messages == 1);
            CHECK(verdict.decision ==
                  (diag.plus_messages == 1 ? Hypothesis::H1 : Hypothesis::H0));
        }
    }

    TEST_CASE("simulation is deterministic for a fixed seed") {
        auto problem = paper_mean_shift();
        auto run = [&](std::uint64_t seed) {
            auto rngs = streams(3, seed, 77);
            std::vector<TraceEvent> trace;
            auto [verdict, diag] = simulate_lts(problem, 3, 1.2, 1.2, 6.0, 6.0,
                                                {Hypothesis::H1, 0.4}, rngs, 1000000, &trace);
            return std::make_tuple(verdict.stopping_time, verdict.messages_sent,
                                   verdict.decision == Hypothesis::H1, trace.size(),
                                   diag.plus_messages);
        };
        CHECK(run(5) == run(5));
        CHECK(run(5) != run(6));
    }

    TEST_CASE("mean stopping time tracks the asymptotic prediction with calibrated levels") {
        auto problem = paper_mean_shift();
        LocalCalibration local = calibrate_local_thresholds(problem, {Hypothesis::H1, 0.4},
                                                            10.0, 2024, 0.05);
        const double A = 9.2103;
        const int L = 2, reps = 10000;
        double total_time = 0, total_messages = 0, total_periods = 0;
        std::int64_t period_count = 0;
        for (int rep = 0; rep < reps; ++rep) {
            auto rngs = streams(L, rep, 1234);
            auto [verdict, diag] = simulate_lts(problem, L, local.level_a, local.level_b, A, A,
                                                {Hypothesis::H1, 0.4}, rngs, 1000000);
            REQUIRE(!verdict.censored);
            total_time += static_cast<double>(verdict.stopping_time);
            total_messages += static_cast<double>(verdict.messages_sent);
            for (const auto& periods : diag.periods) {
                period_count += static_cast<std::int64_t>(periods.size());
                for (std::int64_t tau : periods)
                    total_periods += static_cast<double>(tau);
            }
        }
        double mean_time = total_time / reps;
        CHECK(std::fabs(mean_time - 57.6) / 57.6 < 0.30);

        // Renewal identity: messages per sensor track T / E[tau].
        double mean_messages_per_sensor = total_messages / reps / L;
        double mean_period = total_periods / static_cast<double>(period_count);
        double renewal = mean_time / mean_period;
        CHECK(std::fabs(mean_messages_per_sensor - renewal) / renewal < 0.20);
    }

    TEST_CASE("local type-i error rate decays with the local threshold") {
        auto problem = paper_mean_shift();
        const double a = 4.0;
        LtsSensor sensor(problem, 0, a, a);
        CounterRng rng(606);
        std::int64_t plus = 0, total = 0;
        while (total < 20000) {
            auto emission = sensor.push(sample(problem, {Hypothesis::H0, 0.0}, rng));
            if (emission) {
                ++total;
                if (emission->message.bit == 1)
                    ++plus;
            }
        }
        double alpha_tilde = static_cast<double>(plus) / static_cast<double>(total);
        CHECK(alpha_tilde <= std::exp(-a * (1 - 0.3)));
    }

    TEST_CASE("exact fusion llr reference") {
        std::vector<Message> none;
        CHECK(reference_exact_fusion_llr(none, 0.1, 0.1) == 0.0);

        double a = 3.0, b = 5.0;
        double alpha = std::exp(-a), beta = std::exp(-b);
        std::vector<Message> one{{0, 1, 1}};
        CHECK(reference_exact_fusion_llr(one, alpha, beta) ==
              doctest::Approx(a + std::log(1 - beta)).epsilon(1e-12));

        std::vector<Message> mixed{{0, 1, 1}, {0, 2, -1}, {1, 2, 1}};
        double expected = 2 * std::log((1 - beta) / alpha) + std::log(beta / (1 - alpha));
        CHECK(reference_exact_fusion_llr(mixed, alpha, beta) ==
              doctest::Approx(expected).epsilon(1e-12));

        CHECK_THROWS_AS(reference_exact_fusion_llr(one, 0.0, 0.5), std::domain_error);
        CHECK_THROWS_AS(reference_exact_fusion_llr(one, 0.5, 1.0), std::domain_error);
    }

    TEST_CASE("lattice walk approximates the exact llr within the per-message bound") {
        auto problem = paper_mean_shift();
        double a = 2.0, b = 2.0;
        double alpha = std::exp(-a), beta = std::exp(-b);
        auto rngs = streams(2, 99, 31);
        std::vector<TraceEvent> trace;
        auto [verdict, diag] = simulate_lts(problem, 2, a, b, 20.0, 20.0,
                                            {Hypothesis::H1, 0.4}, rngs, 1000000, &trace);
        std::vector<Message> messages;
        double v = 0;
        for (const TraceEvent& e : trace) {
            messages.push_back({e.sensor, e.time, e.bit});
            v = e.statistic;
        }
        REQUIRE(!messages.empty());
        double exact = reference_exact_fusion_llr(messages, alpha, beta);
        double bound = static_cast<double>(messages.size()) *
                       (std::fabs(std::log(1 - beta)) + std::fabs(std::log(1 - alpha)));
        CHECK(std::fabs(v - exact) <= bound + 1e-9);
    }
}
