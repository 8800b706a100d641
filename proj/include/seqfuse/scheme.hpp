#pragma once

#include <optional>
#include <string>

namespace seqfuse {

enum class Scheme { Centralized, Uniform, Lts, SimpleSprt };

std::string to_string(Scheme scheme);

// Per-scheme parameters. Uniform needs a block length and a quantizer
// threshold; LTS needs local thresholds. validate() throws
// std::invalid_argument when a required field is missing.
struct SchemeParams {
    Scheme scheme = Scheme::Centralized;
    std::optional<int> block_length;
    std::optional<double> lambda;
    std::optional<double> level_a;
    std::optional<double> level_b;

    void validate() const;
};

}  // namespace seqfuse
