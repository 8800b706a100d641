#pragma once

#include <span>
#include <string>
#include <vector>

#include "seqfuse/experiment.hpp"

namespace seqfuse {

// Shortest-faithful decimal at 12 significant digits via std::to_chars;
// locale-independent by construction.
std::string format_double(double value);

// Fixed CSV schema for sweep results. Fields that do not apply to a scheme
// (a/b for non-LTS, T0/lambda for non-uniform) are left empty.
extern const char* const kSummaryCsvHeader;

std::string summary_csv_row(const McSummary& summary);

std::string summaries_to_csv(std::span<const McSummary> summaries);

std::string summaries_to_json(std::span<const McSummary> summaries);

// Event-log CSV for single-trajectory traces.
extern const char* const kTraceCsvHeader;
std::string trace_to_csv(std::span<const TraceEvent> events);

}  // namespace seqfuse
