#include "seqfuse/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "seqfuse/runner.hpp"

namespace seqfuse {

namespace {

std::string axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Alpha: return "alpha";
        case SweepAxis::Beta: return "beta";
        case SweepAxis::TruthValue: return "truth";
        case SweepAxis::Sensors: return "L";
    }
    return "?";
}

TruthPoint opposite_probe(const ExperimentSpec& spec, Hypothesis h) {
    const auto& interval = spec.problem.set_of(h);
    if (h == Hypothesis::H0 && spec.h0_probe)
        return {h, *spec.h0_probe};
    if (h == Hypothesis::H1 && spec.h1_probe)
        return {h, *spec.h1_probe};
    // Worst case for the error constraint: the endpoint facing the other set.
    const auto& other = spec.problem.opposite_set_of(h);
    double value = interval.hi < other.lo ? interval.hi : interval.lo;
    return {h, value};
}

}  // namespace

PointResolution resolve_point_setup(const ExperimentSpec& spec, int point_index) {
    if (spec.grid.empty())
        throw std::invalid_argument("experiment: sweep grid must be nonempty");
    if (point_index < 0 || point_index >= static_cast<int>(spec.grid.size()))
        throw std::invalid_argument("experiment: point index outside the grid");
    double g = spec.grid[static_cast<std::size_t>(point_index)];

    PointResolution setup;
    setup.target_alpha = spec.target_alpha;
    setup.target_beta = spec.target_beta;
    setup.truth = spec.truth;
    setup.sensors = spec.sensors;
    switch (spec.axis) {
        case SweepAxis::Alpha: setup.target_alpha = g; break;
        case SweepAxis::Beta: setup.target_beta = g; break;
        case SweepAxis::TruthValue: setup.truth.value = g; break;
        case SweepAxis::Sensors:
            setup.sensors = static_cast<int>(g);
            if (setup.sensors < 1 || static_cast<double>(setup.sensors) != g)
                throw std::invalid_argument("experiment: sensor grid values must be positive integers");
            break;
    }
    spec.problem.validate_truth(setup.truth);
    if (!(setup.target_alpha > 0 && setup.target_alpha < 1 && setup.target_beta > 0 &&
          setup.target_beta < 1))
        throw std::invalid_argument("experiment: error targets must lie in (0, 1)");
    setup.label = axis_name(spec.axis) + "=" + std::to_string(g);

    switch (spec.threshold_source) {
        case ThresholdSource::Explicit:
            if (spec.axis == SweepAxis::Alpha || spec.axis == SweepAxis::Beta)
                throw std::invalid_argument(
                    "experiment: explicit thresholds cannot be combined with an error sweep");
            setup.threshold_a = spec.explicit_a;
            setup.threshold_b = spec.explicit_b;
            break;
        case ThresholdSource::Asymptotic:
            setup.threshold_a = -std::log(setup.target_alpha);
            setup.threshold_b = -std::log(setup.target_beta);
            break;
        case ThresholdSource::Calibrated: {
            StreamKey key{spec.seed, static_cast<std::uint64_t>(point_index), 0, 0};
            GlobalCalibration cal = calibrate_global_thresholds(
                spec.problem, spec.scheme, setup.sensors,
                opposite_probe(spec, Hypothesis::H0), opposite_probe(spec, Hypothesis::H1),
                setup.target_alpha, setup.target_beta, key, spec.calibration_budget, spec.cap,
                spec.calibration_rounds, spec.threads);
            setup.threshold_a = cal.threshold_a;
            setup.threshold_b = cal.threshold_b;
            setup.calibration_warning = cal.warning;
            break;
        }
    }
    if (!(setup.threshold_a > 0 && setup.threshold_b > 0))
        throw std::invalid_argument("experiment: thresholds must be positive");
    return setup;
}

namespace {

struct BatchAggregate {
    std::int64_t decided = 0;
    std::int64_t errors = 0;
    std::int64_t censored = 0;
    double sum_time = 0;
    double sum_time_sq = 0;
    double sum_messages = 0;
    double sum_periods = 0;
    std::int64_t n_periods = 0;
};

// One measurement batch: `replications` runs under `truth`, deterministic
// aggregation in replication order.
BatchAggregate run_batch(const ExperimentSpec& spec, const PointResolution& setup,
                         const TruthPoint& truth, Hypothesis wrong_decision, int point_index,
                         std::uint64_t batch_id) {
    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(spec.replications));
    parallel_for(spec.replications, spec.threads, [&](std::int64_t i) {
        StreamKey key{spec.seed, static_cast<std::uint64_t>(point_index), batch_id,
                      static_cast<std::uint64_t>(i)};
        outcomes[static_cast<std::size_t>(i)] =
            run_replication(spec.problem, spec.scheme, setup.sensors, setup.threshold_a,
                            setup.threshold_b, truth, key, spec.cap);
    });

    BatchAggregate agg;
    for (const RepOutcome& rep : outcomes) {
        if (rep.verdict.censored) {
            ++agg.censored;
            continue;
        }
        ++agg.decided;
        double t = static_cast<double>(rep.verdict.stopping_time);
        agg.sum_time += t;
        agg.sum_time_sq += t * t;
        agg.sum_messages += static_cast<double>(rep.verdict.messages_sent);
        agg.sum_periods += rep.sum_periods;
        agg.n_periods += rep.n_periods;
        if (rep.verdict.decision == wrong_decision)
            ++agg.errors;
    }
    return agg;
}

}  // namespace

McSummary run_point(const ExperimentSpec& spec, int point_index) {
    spec.scheme.validate();
    if (spec.replications < 1)
        throw std::invalid_argument("experiment: replications must be >= 1");
    PointResolution setup = resolve_point_setup(spec, point_index);

    // Batch 0 measures sample sizes and the truth-side error rate; batch 1
    // probes the opposite hypothesis for the other error rate.
    Hypothesis truth_h = setup.truth.hypothesis;
    Hypothesis other_h = truth_h == Hypothesis::H0 ? Hypothesis::H1 : Hypothesis::H0;
    Hypothesis truth_wrong = other_h;
    TruthPoint probe = opposite_probe(spec, other_h);

    BatchAggregate main = run_batch(spec, setup, setup.truth, truth_wrong, point_index, 0);
    BatchAggregate opp = run_batch(spec, setup, probe, truth_h, point_index, 1);

    McSummary s;
    s.point_index = point_index;
    s.point_label = setup.label;
    s.scheme = spec.scheme.scheme;
    s.scheme_used = spec.scheme;
    s.sensors = setup.sensors;
    s.target_alpha = setup.target_alpha;
    s.target_beta = setup.target_beta;
    s.threshold_a = setup.threshold_a;
    s.threshold_b = setup.threshold_b;
    s.truth = setup.truth;
    s.replications = spec.replications;
    s.calibration_warning = setup.calibration_warning;

    if (main.decided > 0) {
        double n = static_cast<double>(main.decided);
        s.mean_stopping_time = main.sum_time / n;
        double var = 0;
        if (main.decided > 1)
            var = std::max(0.0, (main.sum_time_sq - n * s.mean_stopping_time * s.mean_stopping_time) /
                                    (n - 1));
        s.stderr_stopping_time = std::sqrt(var / n);
        s.mean_messages = main.sum_messages / n;
        s.mean_period = main.n_periods > 0
                            ? main.sum_periods / static_cast<double>(main.n_periods)
                            : 0.0;
    }

    const BatchAggregate& h0_batch = truth_h == Hypothesis::H0 ? main : opp;
    const BatchAggregate& h1_batch = truth_h == Hypothesis::H1 ? main : opp;
    s.alpha = wilson_interval(h0_batch.errors, h0_batch.decided);
    s.beta = wilson_interval(h1_batch.errors, h1_batch.decided);
    s.censored = main.censored + opp.censored;

    // Predictions follow the targets when thresholds are derived from them,
    // and the explicit thresholds otherwise.
    double pred_a = setup.threshold_a, pred_b = setup.threshold_b;
    if (spec.threshold_source != ThresholdSource::Explicit) {
        pred_a = -std::log(setup.target_alpha);
        pred_b = -std::log(setup.target_beta);
    }
    s.predicted_size =
        predict(spec.problem, spec.scheme, setup.truth, setup.sensors, pred_a, pred_b)
            .expected_size(truth_h);

    if (main.decided == 0) {
        s.error_flag = true;
        s.error_note = "all replications censored";
    } else if (static_cast<double>(main.censored) >
               0.01 * static_cast<double>(spec.replications)) {
        s.error_flag = true;
        s.error_note = "censored fraction exceeds 1%";
    }
    return s;
}

std::vector<McSummary> run_sweep(const ExperimentSpec& spec) {
    std::vector<McSummary> out;
    out.reserve(spec.grid.size());
    for (int i = 0; i < static_cast<int>(spec.grid.size()); ++i)
        out.push_back(run_point(spec, i));
    return out;
}

CompareReport compare_schemes(const ExperimentSpec& centralized, const ExperimentSpec& uniform,
                              const ExperimentSpec& lts) {
    if (centralized.scheme.scheme != Scheme::Centralized ||
        uniform.scheme.scheme != Scheme::Uniform || lts.scheme.scheme != Scheme::Lts)
        throw std::invalid_argument("compare_schemes: expects (centralized, uniform, lts)");
    auto same_shape = [&](const ExperimentSpec& a, const ExperimentSpec& b) {
        return a.sensors == b.sensors && a.grid == b.grid && a.axis == b.axis &&
               a.target_alpha == b.target_alpha && a.target_beta == b.target_beta &&
               a.problem.kind() == b.problem.kind();
    };
    if (!same_shape(centralized, uniform) || !same_shape(centralized, lts))
        throw std::invalid_argument("compare_schemes: specs must share model, L, grid and targets");

    CompareReport report;
    std::vector<McSummary> c = run_sweep(centralized);
    std::vector<McSummary> u = run_sweep(uniform);
    std::vector<McSummary> l = run_sweep(lts);
    for (std::size_t i = 0; i < c.size(); ++i) {
        SchemeRatios r;
        r.point_index = static_cast<int>(i);
        r.stopping_time_lts_vs_centralized = l[i].mean_stopping_time / c[i].mean_stopping_time;
        r.stopping_time_uniform_vs_centralized =
            u[i].mean_stopping_time / c[i].mean_stopping_time;
        r.messages_lts_vs_centralized = l[i].mean_messages / c[i].mean_messages;
        r.messages_uniform_vs_centralized = u[i].mean_messages / c[i].mean_messages;
        report.ratios.push_back(r);
    }
    report.rows = std::move(c);
    report.rows.insert(report.rows.end(), u.begin(), u.end());
    report.rows.insert(report.rows.end(), l.begin(), l.end());
    return report;
}

}  // namespace seqfuse
