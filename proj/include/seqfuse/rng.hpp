#pragma once

#include <cmath>
#include <cstdint>

namespace seqfuse {

// Counter-based splittable generator (SplitMix64 core). A stream is
// identified by up to five 64-bit key words; streams with distinct keys
// are independent for simulation purposes. State advances by a fixed
// increment per draw, so a stream is a pure function of (key, counter) —
// this is what makes replication-parallel runs order-independent.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t k0, std::uint64_t k1 = 0, std::uint64_t k2 = 0,
                        std::uint64_t k3 = 0, std::uint64_t k4 = 0) {
        state_ = mix(0x9E3779B97F4A7C15ull ^ k0);
        state_ = mix(state_ + 0xBF58476D1CE4E5B9ull * (k1 + 1));
        state_ = mix(state_ + 0x94D049BB133111EBull * (k2 + 1));
        state_ = mix(state_ + 0xD6E8FEB86659FD93ull * (k3 + 1));
        state_ = mix(state_ + 0xA0761D6478BD642Full * (k4 + 1));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    // Uniform on the open interval (0, 1): (i + 0.5) / 2^53.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller (cosine branch, no cache).
    double next_normal() {
        double u1 = next_uniform();
        double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.28318530717958647692 * u2);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

// Key layout used by the experiment driver: one stream per
// (seed, point, batch, replication, sensor) tuple.
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t point = 0;
    std::uint64_t batch = 0;
    std::uint64_t replication = 0;
};

inline CounterRng make_stream(const StreamKey& key, std::uint64_t sensor) {
    return CounterRng(key.seed, key.point, key.batch, key.replication, sensor);
}

}  // namespace seqfuse
