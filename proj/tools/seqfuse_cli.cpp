#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqfuse/centralized.hpp"
#include "seqfuse/config.hpp"
#include "seqfuse/experiment.hpp"
#include "seqfuse/lts.hpp"
#include "seqfuse/report.hpp"
#include "seqfuse/uniform.hpp"

namespace {

using namespace seqfuse;

struct ModelArgs {
    std::string kind = "mean_shift";
    double sigma2 = 1.0;
    std::vector<double> gamma;
    std::vector<double> theta;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", kind, "Model kind: mean_shift or variance")
            ->check(CLI::IsMember({"mean_shift", "variance"}));
        cmd->add_option("--sigma2", sigma2, "Noise variance (mean_shift only)");
        cmd->add_option("--gamma", gamma, "Null parameter interval: lo hi")
            ->expected(2)
            ->required();
        cmd->add_option("--theta", theta, "Alternative parameter interval: lo hi")
            ->expected(2)
            ->required();
    }

    TestingProblem build() const {
        ParameterInterval g{gamma[0], gamma[1]};
        ParameterInterval t{theta[0], theta[1]};
        if (kind == "mean_shift")
            return TestingProblem::mean_shift(g, t, sigma2);
        return TestingProblem::variance(g, t);
    }
};

void print_metric(const std::string& name, double value) {
    std::cout << name << ',' << format_double(value) << '\n';
}

int cmd_kl(const ModelArgs& model_args, double theta_value, std::optional<double> gamma_value,
           std::optional<int> block_length, std::optional<double> lambda) {
    TestingProblem problem = model_args.build();
    double gv = gamma_value.value_or(clamp(theta_value, problem.null_set()));
    // The parameter values are not required to lie inside the intervals:
    // pointwise divergences are well-defined for any pair, and the inf rows
    // still minimize over the configured intervals.
    TruthPoint theta_point{Hypothesis::H1, theta_value};
    TruthPoint gamma_point{Hypothesis::H0, gv};

    print_metric("raw_kl_f_to_h", kl_divergence(problem, theta_point, gv));
    print_metric("raw_kl_h_to_f", kl_divergence(problem, gamma_point, theta_value));
    print_metric("inf_raw_kl_from_theta", inf_kl(problem, theta_point));
    print_metric("inf_raw_kl_from_gamma", inf_kl(problem, gamma_point));
    if (block_length && lambda) {
        int T0 = *block_length;
        double per = static_cast<double>(T0);
        print_metric("quantized_kl_f_to_h_per_sample",
                     quantized_kl(problem, theta_point, gv, T0, *lambda) / per);
        print_metric("quantized_kl_h_to_f_per_sample",
                     quantized_kl(problem, gamma_point, theta_value, T0, *lambda) / per);
        print_metric("inf_quantized_from_theta_per_sample",
                     inf_quantized_kl(problem, theta_point, T0, *lambda) / per);
        print_metric("inf_quantized_from_gamma_per_sample",
                     inf_quantized_kl(problem, gamma_point, T0, *lambda) / per);
    }
    return 0;
}

int cmd_quantizer(const ModelArgs& model_args, int block_length, double resolution,
                  int inner_grid) {
    TestingProblem problem = model_args.build();
    double lambda = minimax_lambda(problem, block_length, resolution, inner_grid);
    double worst = std::numeric_limits<double>::infinity();
    for (double theta : {problem.alt_set().lo, problem.alt_set().hi})
        for (double gamma : {problem.null_set().lo, problem.null_set().hi})
            worst = std::min(worst, quantized_kl(problem, TruthPoint{Hypothesis::H1, theta},
                                                 gamma, block_length, lambda));
    print_metric("lambda_star", lambda);
    print_metric("lambda_per_sample", lambda / block_length);
    print_metric("worst_case_kl", worst);
    return 0;
}

int cmd_predict(const ModelArgs& model_args, const std::string& scheme_name,
                const std::string& hypothesis, double truth_value, int sensors,
                std::optional<double> A, std::optional<double> B, std::optional<double> alpha,
                std::optional<double> beta, std::optional<int> block_length,
                std::optional<double> lambda) {
    TestingProblem problem = model_args.build();
    SchemeParams scheme;
    if (scheme_name == "centralized") scheme.scheme = Scheme::Centralized;
    else if (scheme_name == "uniform") scheme.scheme = Scheme::Uniform;
    else if (scheme_name == "lts") scheme.scheme = Scheme::Lts;
    else scheme.scheme = Scheme::SimpleSprt;
    scheme.block_length = block_length;
    scheme.lambda = lambda;

    double threshold_a = A ? *A : (alpha ? -std::log(*alpha) : 0);
    double threshold_b = B ? *B : (beta ? -std::log(*beta) : 0);
    if (!(threshold_a > 0 && threshold_b > 0))
        throw std::invalid_argument("predict: provide --A/--B or --alpha/--beta");

    TruthPoint truth{hypothesis == "H0" ? Hypothesis::H0 : Hypothesis::H1, truth_value};
    AsymptoticPrediction pred = predict(problem, scheme, truth, sensors, threshold_a, threshold_b);
    print_metric("expected_size_h0", pred.expected_size_h0);
    print_metric("expected_size_h1", pred.expected_size_h1);
    print_metric("log_alpha", pred.log_alpha);
    print_metric("log_beta", pred.log_beta);
    return 0;
}

void warn_threshold_regime(const McSummary& s) {
    if (s.scheme != Scheme::Lts)
        return;
    double a = *s.scheme_used.level_a, b = *s.scheme_used.level_b;
    if (s.threshold_a / a < 5 || s.threshold_b / b < 5)
        std::cerr << "warning: point " << s.point_index << " has A/a = "
                  << format_double(s.threshold_a / a) << ", B/b = "
                  << format_double(s.threshold_b / b)
                  << "; the asymptotic regime expects both well above 1\n";
}

int cmd_run(const std::string& config_path, int threads_override) {
    RunConfig config = load_run_config(config_path);
    ResolvedRun run = resolve_run(config, threads_override);

    std::vector<McSummary> rows;
    std::vector<SchemeRatios> ratios;
    if (run.compare) {
        const ExperimentSpec* centralized = nullptr;
        const ExperimentSpec* uniform = nullptr;
        const ExperimentSpec* lts = nullptr;
        for (const auto& spec : run.specs) {
            if (spec.scheme.scheme == Scheme::Centralized) centralized = &spec;
            if (spec.scheme.scheme == Scheme::Uniform) uniform = &spec;
            if (spec.scheme.scheme == Scheme::Lts) lts = &spec;
        }
        if (!centralized || !uniform || !lts)
            throw ConfigError("compare mode needs one centralized, one uniform and one lts scheme");
        CompareReport report = compare_schemes(*centralized, *uniform, *lts);
        rows = std::move(report.rows);
        ratios = std::move(report.ratios);
    } else {
        rows = run_sweep(run.specs.front());
    }

    for (const McSummary& s : rows)
        warn_threshold_regime(s);

    std::ofstream out(run.output_path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open output file: " + run.output_path);
    out << (run.output_json ? summaries_to_json(rows) : summaries_to_csv(rows));
    out.close();

    std::cout << kSummaryCsvHeader << '\n';
    for (const McSummary& s : rows)
        std::cout << summary_csv_row(s) << '\n';
    for (const SchemeRatios& r : ratios)
        std::cout << "ratio,point=" << r.point_index
                  << ",T_lts/T_c=" << format_double(r.stopping_time_lts_vs_centralized)
                  << ",T_u/T_c=" << format_double(r.stopping_time_uniform_vs_centralized)
                  << ",msg_lts/msg_c=" << format_double(r.messages_lts_vs_centralized)
                  << ",msg_u/msg_c=" << format_double(r.messages_uniform_vs_centralized)
                  << '\n';

    for (const McSummary& s : rows) {
        if (s.error_flag) {
            std::cerr << "error: point " << s.point_index << " (" << to_string(s.scheme)
                      << "): " << s.error_note << '\n';
            return 3;
        }
    }
    return 0;
}

int cmd_calibrate(const std::string& config_path, int threads_override) {
    RunConfig config = load_run_config(config_path);
    ResolvedRun run = resolve_run(config, threads_override);

    for (const ExperimentSpec& spec : run.specs) {
        std::string prefix = to_string(spec.scheme.scheme);
        if (spec.scheme.scheme == Scheme::Lts) {
            print_metric(prefix + ".a", *spec.scheme.level_a);
            print_metric(prefix + ".b", *spec.scheme.level_b);
        }
        if (spec.scheme.scheme == Scheme::Uniform)
            print_metric(prefix + ".lambda", *spec.scheme.lambda);
        PointResolution setup = resolve_point_setup(spec, 0);
        print_metric(prefix + ".A", setup.threshold_a);
        print_metric(prefix + ".B", setup.threshold_b);
        if (setup.calibration_warning)
            std::cerr << "warning: " << prefix
                      << ": target below Monte Carlo resolution; asymptotic thresholds kept\n";
    }
    return 0;
}

int cmd_trace(const std::string& config_path) {
    RunConfig config = load_run_config(config_path);
    if (config.replications != 1)
        throw ConfigError("trace: config must set replications to 1");
    if (config.grid.size() != 1)
        throw ConfigError("trace: config must have a single grid point");
    if (config.compare)
        throw ConfigError("trace: compare mode is not traceable");

    ResolvedRun run = resolve_run(config);
    const ExperimentSpec& spec = run.specs.front();
    PointResolution setup = resolve_point_setup(spec, 0);

    std::vector<CounterRng> rngs;
    for (int l = 0; l < setup.sensors; ++l)
        rngs.push_back(make_stream(StreamKey{spec.seed, 0, 0, 0}, static_cast<std::uint64_t>(l)));

    std::vector<TraceEvent> events;
    switch (spec.scheme.scheme) {
        case Scheme::Centralized:
            run_centralized(spec.problem, setup.sensors, setup.threshold_a, setup.threshold_b,
                            setup.truth, rngs, spec.cap, &events);
            break;
        case Scheme::Uniform:
            run_uniform(spec.problem, setup.sensors, *spec.scheme.block_length,
                        *spec.scheme.lambda, setup.threshold_a, setup.threshold_b, setup.truth,
                        rngs, spec.cap, &events);
            break;
        case Scheme::Lts:
            simulate_lts(spec.problem, setup.sensors, *spec.scheme.level_a,
                         *spec.scheme.level_b, setup.threshold_a, setup.threshold_b,
                         setup.truth, rngs, spec.cap, &events);
            break;
        default:
            throw ConfigError("trace: scheme is not simulatable");
    }

    std::ofstream out(run.output_path, std::ios::binary);
    if (!out)
        throw ConfigError("cannot open output file: " + run.output_path);
    out << trace_to_csv(events);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-sensor sequential composite hypothesis test simulator"};
    app.require_subcommand(1);

    ModelArgs kl_model, quantizer_model, predict_model;

    auto* kl = app.add_subcommand("kl", "Raw and quantized KL divergence table");
    kl_model.attach(kl);
    double kl_theta_value = 0;
    std::optional<double> kl_gamma_value;
    std::optional<int> kl_T0;
    std::optional<double> kl_lambda;
    kl->add_option("--theta-value", kl_theta_value, "Alternative parameter value")->required();
    kl->add_option("--gamma-value", kl_gamma_value, "Null parameter value");
    kl->add_option("--T0", kl_T0, "Block length for quantized divergences");
    kl->add_option("--lambda", kl_lambda, "Quantizer threshold for quantized divergences");

    auto* quantizer = app.add_subcommand("quantizer", "Minimax quantizer threshold");
    quantizer_model.attach(quantizer);
    int q_T0 = 1;
    double q_resolution = 1e-3;
    int q_inner_grid = 0;
    quantizer->add_option("--T0", q_T0, "Block length")->required();
    quantizer->add_option("--resolution", q_resolution, "Threshold resolution");
    quantizer->add_option("--inner-grid", q_inner_grid, "Extra inner minimization grid points");

    auto* predict_cmd = app.add_subcommand("predict", "Asymptotic expected sample sizes");
    predict_model.attach(predict_cmd);
    std::string p_scheme = "centralized";
    std::string p_hypothesis = "H1";
    double p_value = 0;
    int p_sensors = 1;
    std::optional<double> p_A, p_B, p_alpha, p_beta, p_lambda;
    std::optional<int> p_T0;
    predict_cmd->add_option("--scheme", p_scheme)
        ->check(CLI::IsMember({"centralized", "uniform", "lts", "simple-sprt"}));
    predict_cmd->add_option("--hypothesis", p_hypothesis)->check(CLI::IsMember({"H0", "H1"}));
    predict_cmd->add_option("--value", p_value, "Truth parameter value")->required();
    predict_cmd->add_option("--L", p_sensors, "Sensor count")->required();
    predict_cmd->add_option("--A", p_A, "Upper threshold");
    predict_cmd->add_option("--B", p_B, "Lower threshold magnitude");
    predict_cmd->add_option("--alpha", p_alpha, "Type-I target (A = -log alpha)");
    predict_cmd->add_option("--beta", p_beta, "Type-II target (B = -log beta)");
    predict_cmd->add_option("--T0", p_T0, "Uniform block length");
    predict_cmd->add_option("--lambda", p_lambda, "Uniform quantizer threshold");

    auto* calibrate_cmd = app.add_subcommand("calibrate", "Resolve scheme parameters and thresholds");
    std::string cal_config;
    int cal_threads = 0;
    calibrate_cmd->add_option("--config", cal_config, "Run configuration file")->required();
    calibrate_cmd->add_option("--threads", cal_threads, "Worker thread override");

    auto* run_cmd = app.add_subcommand("run", "Execute a Monte Carlo sweep");
    std::string run_config;
    int run_threads = 0;
    run_cmd->add_option("--config", run_config, "Run configuration file")->required();
    run_cmd->add_option("--threads", run_threads, "Worker thread override");

    auto* trace_cmd = app.add_subcommand("trace", "Single-trajectory event log");
    std::string trace_config;
    trace_cmd->add_option("--config", trace_config, "Run configuration file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (kl->parsed())
            return cmd_kl(kl_model, kl_theta_value, kl_gamma_value, kl_T0, kl_lambda);
        if (quantizer->parsed())
            return cmd_quantizer(quantizer_model, q_T0, q_resolution, q_inner_grid);
        if (predict_cmd->parsed())
            return cmd_predict(predict_model, p_scheme, p_hypothesis, p_value, p_sensors, p_A,
                               p_B, p_alpha, p_beta, p_T0, p_lambda);
        if (calibrate_cmd->parsed())
            return cmd_calibrate(cal_config, cal_threads);
        if (run_cmd->parsed())
            return cmd_run(run_config, run_threads);
        if (trace_cmd->parsed())
            return cmd_trace(trace_config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const CalibrationError& e) {
        std::cerr << "calibration error: " << e.what() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
