#include "seqfuse/report.hpp"

#include <charconv>
#include <sstream>

#include <json.hpp>

namespace seqfuse {

std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

namespace {

std::string format_truth(const TruthPoint& truth) {
    return (truth.hypothesis == Hypothesis::H0 ? std::string("H0:") : std::string("H1:")) +
           format_double(truth.value);
}

}  // namespace

const char* const kSummaryCsvHeader =
    "point_id,scheme,L,target_alpha,target_beta,A,B,a,b,T0,lambda,truth,mean_T,stderr_T,"
    "emp_alpha,alpha_ci_lo,alpha_ci_hi,emp_beta,beta_ci_lo,beta_ci_hi,mean_messages,mean_tau,"
    "censored,pred_T";

std::string summary_csv_row(const McSummary& s) {
    std::ostringstream row;
    row << s.point_index << ',' << to_string(s.scheme) << ',' << s.sensors << ','
        << format_double(s.target_alpha) << ',' << format_double(s.target_beta) << ','
        << format_double(s.threshold_a) << ',' << format_double(s.threshold_b) << ',';
    if (s.scheme == Scheme::Lts) {
        row << format_double(*s.scheme_used.level_a) << ','
            << format_double(*s.scheme_used.level_b) << ',';
    } else {
        row << ",,";
    }
    if (s.scheme == Scheme::Uniform) {
        row << *s.scheme_used.block_length << ',' << format_double(*s.scheme_used.lambda) << ',';
    } else {
        row << ",,";
    }
    row << format_truth(s.truth) << ',' << format_double(s.mean_stopping_time) << ','
        << format_double(s.stderr_stopping_time) << ',' << format_double(s.alpha.rate) << ','
        << format_double(s.alpha.ci_lo) << ',' << format_double(s.alpha.ci_hi) << ','
        << format_double(s.beta.rate) << ',' << format_double(s.beta.ci_lo) << ','
        << format_double(s.beta.ci_hi) << ',' << format_double(s.mean_messages) << ','
        << format_double(s.mean_period) << ',' << s.censored << ','
        << format_double(s.predicted_size);
    return row.str();
}

std::string summaries_to_csv(std::span<const McSummary> summaries) {
    std::string out = kSummaryCsvHeader;
    out += '\n';
    for (const McSummary& s : summaries) {
        out += summary_csv_row(s);
        out += '\n';
    }
    return out;
}

std::string summaries_to_json(std::span<const McSummary> summaries) {
    nlohmann::json arr = nlohmann::json::array();
    for (const McSummary& s : summaries) {
        nlohmann::json row{
            {"point_id", s.point_index},
            {"point_label", s.point_label},
            {"scheme", to_string(s.scheme)},
            {"L", s.sensors},
            {"target_alpha", s.target_alpha},
            {"target_beta", s.target_beta},
            {"A", s.threshold_a},
            {"B", s.threshold_b},
            {"truth", format_truth(s.truth)},
            {"replications", s.replications},
            {"mean_T", s.mean_stopping_time},
            {"stderr_T", s.stderr_stopping_time},
            {"emp_alpha", s.alpha.rate},
            {"alpha_ci_lo", s.alpha.ci_lo},
            {"alpha_ci_hi", s.alpha.ci_hi},
            {"emp_beta", s.beta.rate},
            {"beta_ci_lo", s.beta.ci_lo},
            {"beta_ci_hi", s.beta.ci_hi},
            {"mean_messages", s.mean_messages},
            {"mean_tau", s.mean_period},
            {"censored", s.censored},
            {"pred_T", s.predicted_size},
            {"error", s.error_flag},
        };
        if (s.scheme == Scheme::Lts) {
            row["a"] = *s.scheme_used.level_a;
            row["b"] = *s.scheme_used.level_b;
        }
        if (s.scheme == Scheme::Uniform) {
            row["T0"] = *s.scheme_used.block_length;
            row["lambda"] = *s.scheme_used.lambda;
        }
        arr.push_back(std::move(row));
    }
    return arr.dump(2) + "\n";
}

const char* const kTraceCsvHeader = "time,sensor,bit,fusion_statistic,local_gllr";

std::string trace_to_csv(std::span<const TraceEvent> events) {
    std::string out = kTraceCsvHeader;
    out += '\n';
    for (const TraceEvent& e : events) {
        out += std::to_string(e.time);
        out += ',';
        out += std::to_string(e.sensor);
        out += ',';
        out += std::to_string(e.bit);
        out += ',';
        out += format_double(e.statistic);
        out += ',';
        out += format_double(e.local);
        out += '\n';
    }
    return out;
}

}  // namespace seqfuse
