#include "seqfuse/config.hpp"

#include <fstream>
#include <set>

#include "seqfuse/uniform.hpp"

namespace seqfuse {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::set<std::string>& required, const std::string& context) {
    if (!obj.is_object())
        throw ConfigError(context + ": expected an object");
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ConfigError(context + ": unknown key '" + item.key() + "'");
    for (const auto& key : required)
        if (!obj.contains(key))
            throw ConfigError(context + ": missing key '" + key + "'");
}

double get_number(const json& obj, const std::string& key, const std::string& context) {
    if (!obj.at(key).is_number())
        throw ConfigError(context + ": '" + key + "' must be a number");
    return obj.at(key).get<double>();
}

std::int64_t get_integer(const json& obj, const std::string& key, const std::string& context) {
    if (!obj.at(key).is_number_integer())
        throw ConfigError(context + ": '" + key + "' must be an integer");
    return obj.at(key).get<std::int64_t>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& context) {
    if (!obj.at(key).is_string())
        throw ConfigError(context + ": '" + key + "' must be a string");
    return obj.at(key).get<std::string>();
}

ParameterInterval get_interval(const json& obj, const std::string& key,
                               const std::string& context) {
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(context + ": '" + key + "' must be [lo, hi]");
    return ParameterInterval{v[0].get<double>(), v[1].get<double>()};
}

TruthPoint parse_truth(const json& obj, const std::string& context) {
    require_keys(obj, {"hypothesis", "value"}, {"hypothesis", "value"}, context);
    std::string h = get_string(obj, "hypothesis", context);
    if (h != "H0" && h != "H1")
        throw ConfigError(context + ": hypothesis must be 'H0' or 'H1'");
    return TruthPoint{h == "H0" ? Hypothesis::H0 : Hypothesis::H1,
                      get_number(obj, "value", context)};
}

SchemeConfig parse_scheme(const json& obj, const std::string& context) {
    require_keys(obj,
                 {"kind", "T0", "lambda", "resolution", "a", "b", "target_period", "reference",
                  "tolerance", "emissions"},
                 {"kind"}, context);
    SchemeConfig scheme;
    std::string kind = get_string(obj, "kind", context);
    if (kind == "centralized") {
        scheme.kind = Scheme::Centralized;
    } else if (kind == "uniform") {
        scheme.kind = Scheme::Uniform;
        if (!obj.contains("T0"))
            throw ConfigError(context + ": uniform scheme requires 'T0'");
        scheme.block_length = static_cast<int>(get_integer(obj, "T0", context));
        if (obj.contains("lambda"))
            scheme.lambda = get_number(obj, "lambda", context);
        if (obj.contains("resolution"))
            scheme.quantizer_resolution = get_number(obj, "resolution", context);
    } else if (kind == "lts") {
        scheme.kind = Scheme::Lts;
        if (obj.contains("a")) scheme.level_a = get_number(obj, "a", context);
        if (obj.contains("b")) scheme.level_b = get_number(obj, "b", context);
        if (obj.contains("target_period"))
            scheme.target_period = get_number(obj, "target_period", context);
        if (obj.contains("reference"))
            scheme.calibration_reference = parse_truth(obj.at("reference"), context + ".reference");
        if (obj.contains("tolerance"))
            scheme.calibration_tolerance = get_number(obj, "tolerance", context);
        if (obj.contains("emissions"))
            scheme.calibration_emissions = get_integer(obj, "emissions", context);
        bool has_levels = scheme.level_a && scheme.level_b;
        if (!has_levels && !scheme.target_period)
            throw ConfigError(context + ": lts scheme needs either {a, b} or target_period");
        if (has_levels && scheme.target_period)
            throw ConfigError(context + ": lts scheme takes {a, b} or target_period, not both");
    } else {
        throw ConfigError(context + ": unknown scheme kind '" + kind + "'");
    }
    return scheme;
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
    require_keys(doc,
                 {"model", "scheme", "schemes", "L", "truth", "probes", "sweep", "targets",
                  "thresholds", "replications", "seed", "cap", "threads", "output"},
                 {"model", "L", "truth", "sweep", "targets", "thresholds", "replications",
                  "seed", "cap", "output"},
                 "config");

    RunConfig config;

    const json& model = doc.at("model");
    require_keys(model, {"kind", "sigma2", "gamma", "theta"}, {"kind", "gamma", "theta"},
                 "model");
    std::string kind = get_string(model, "kind", "model");
    if (kind == "mean_shift") {
        config.model_kind = ModelKind::MeanShift;
        config.sigma2 = model.contains("sigma2") ? get_number(model, "sigma2", "model") : 1.0;
    } else if (kind == "variance") {
        config.model_kind = ModelKind::Variance;
        if (model.contains("sigma2"))
            throw ConfigError("model: 'sigma2' does not apply to the variance model");
    } else {
        throw ConfigError("model: unknown kind '" + kind + "'");
    }
    config.gamma_set = get_interval(model, "gamma", "model");
    config.theta_set = get_interval(model, "theta", "model");

    if (doc.contains("scheme") == doc.contains("schemes"))
        throw ConfigError("config: provide exactly one of 'scheme' or 'schemes'");
    if (doc.contains("scheme")) {
        config.schemes.push_back(parse_scheme(doc.at("scheme"), "scheme"));
    } else {
        const json& arr = doc.at("schemes");
        if (!arr.is_array() || arr.empty())
            throw ConfigError("schemes: expected a nonempty array");
        for (std::size_t i = 0; i < arr.size(); ++i)
            config.schemes.push_back(parse_scheme(arr[i], "schemes[" + std::to_string(i) + "]"));
        config.compare = true;
    }

    config.sensors = static_cast<int>(get_integer(doc, "L", "config"));
    if (config.sensors < 1)
        throw ConfigError("config: L must be >= 1");
    config.truth = parse_truth(doc.at("truth"), "truth");

    if (doc.contains("probes")) {
        const json& probes = doc.at("probes");
        require_keys(probes, {"gamma", "theta"}, {}, "probes");
        if (probes.contains("gamma"))
            config.probe_gamma = get_number(probes, "gamma", "probes");
        if (probes.contains("theta"))
            config.probe_theta = get_number(probes, "theta", "probes");
    }

    const json& sweep = doc.at("sweep");
    require_keys(sweep, {"axis", "grid"}, {"axis", "grid"}, "sweep");
    std::string axis = get_string(sweep, "axis", "sweep");
    if (axis == "alpha") config.axis = SweepAxis::Alpha;
    else if (axis == "beta") config.axis = SweepAxis::Beta;
    else if (axis == "truth") config.axis = SweepAxis::TruthValue;
    else if (axis == "L") config.axis = SweepAxis::Sensors;
    else throw ConfigError("sweep: unknown axis '" + axis + "'");
    const json& grid = sweep.at("grid");
    if (!grid.is_array() || grid.empty())
        throw ConfigError("sweep: grid must be a nonempty array");
    for (const auto& g : grid) {
        if (!g.is_number())
            throw ConfigError("sweep: grid entries must be numbers");
        config.grid.push_back(g.get<double>());
    }

    const json& targets = doc.at("targets");
    require_keys(targets, {"alpha", "beta"}, {"alpha", "beta"}, "targets");
    config.target_alpha = get_number(targets, "alpha", "targets");
    config.target_beta = get_number(targets, "beta", "targets");

    const json& thresholds = doc.at("thresholds");
    require_keys(thresholds, {"source", "A", "B", "budget", "rounds"}, {"source"}, "thresholds");
    std::string source = get_string(thresholds, "source", "thresholds");
    if (source == "asymptotic") {
        config.threshold_source = ThresholdSource::Asymptotic;
    } else if (source == "explicit") {
        config.threshold_source = ThresholdSource::Explicit;
        config.explicit_a = get_number(thresholds, "A", "thresholds");
        config.explicit_b = get_number(thresholds, "B", "thresholds");
    } else if (source == "calibrated") {
        config.threshold_source = ThresholdSource::Calibrated;
        if (thresholds.contains("budget"))
            config.calibration_budget = get_integer(thresholds, "budget", "thresholds");
        if (thresholds.contains("rounds"))
            config.calibration_rounds = static_cast<int>(get_integer(thresholds, "rounds", "thresholds"));
    } else {
        throw ConfigError("thresholds: unknown source '" + source + "'");
    }

    config.replications = get_integer(doc, "replications", "config");
    if (config.replications < 1)
        throw ConfigError("config: replications must be >= 1");
    std::int64_t seed = get_integer(doc, "seed", "config");
    if (seed < 0)
        throw ConfigError("config: seed must be nonnegative");
    config.seed = static_cast<std::uint64_t>(seed);
    config.cap = get_integer(doc, "cap", "config");
    if (config.cap < 1)
        throw ConfigError("config: cap must be >= 1");
    if (doc.contains("threads")) {
        config.threads = static_cast<int>(get_integer(doc, "threads", "config"));
        if (config.threads < 1)
            throw ConfigError("config: threads must be >= 1");
    }

    const json& output = doc.at("output");
    require_keys(output, {"path", "format"}, {"path", "format"}, "output");
    config.output_path = get_string(output, "path", "output");
    std::string format = get_string(output, "format", "output");
    if (format == "csv") config.output_json = false;
    else if (format == "json") config.output_json = true;
    else throw ConfigError("output: format must be 'csv' or 'json'");

    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_run_config(doc);
}

TestingProblem problem_from_config(const RunConfig& config) {
    try {
        if (config.model_kind == ModelKind::MeanShift)
            return TestingProblem::mean_shift(config.gamma_set, config.theta_set, config.sigma2);
        return TestingProblem::variance(config.gamma_set, config.theta_set);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
}

ResolvedRun resolve_run(const RunConfig& config, int threads_override) {
    TestingProblem problem = problem_from_config(config);
    try {
        problem.validate_truth(config.truth);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("truth: ") + e.what());
    }
    if (config.compare && config.schemes.size() != 3)
        throw ConfigError("schemes: compare mode expects exactly three schemes");

    ResolvedRun run;
    run.compare = config.compare;
    run.output_path = config.output_path;
    run.output_json = config.output_json;

    for (const SchemeConfig& sc : config.schemes) {
        SchemeParams params;
        params.scheme = sc.kind;
        if (sc.kind == Scheme::Uniform) {
            params.block_length = sc.block_length;
            params.lambda = sc.lambda ? *sc.lambda
                                      : minimax_lambda(problem, *sc.block_length,
                                                       sc.quantizer_resolution);
        } else if (sc.kind == Scheme::Lts) {
            if (sc.level_a && sc.level_b) {
                params.level_a = sc.level_a;
                params.level_b = sc.level_b;
            } else {
                // Default calibration reference: the alternative interval
                // endpoint facing the null set.
                TruthPoint reference = sc.calibration_reference.value_or(
                    TruthPoint{Hypothesis::H1, problem.alt_set().lo});
                LocalCalibration local = calibrate_local_thresholds(
                    problem, reference, *sc.target_period, config.seed,
                    sc.calibration_tolerance, sc.calibration_emissions);
                params.level_a = local.level_a;
                params.level_b = local.level_b;
            }
        }
        params.validate();

        ExperimentSpec spec{
            .problem = problem,
            .scheme = params,
            .sensors = config.sensors,
            .truth = config.truth,
            .h0_probe = config.probe_gamma,
            .h1_probe = config.probe_theta,
            .axis = config.axis,
            .grid = config.grid,
            .target_alpha = config.target_alpha,
            .target_beta = config.target_beta,
            .threshold_source = config.threshold_source,
            .explicit_a = config.explicit_a,
            .explicit_b = config.explicit_b,
            .calibration_budget = config.calibration_budget,
            .calibration_rounds = config.calibration_rounds,
            .replications = config.replications,
            .seed = config.seed,
            .cap = config.cap,
            .threads = threads_override > 0 ? threads_override : config.threads,
        };
        run.specs.push_back(std::move(spec));
    }
    return run;
}

}  // namespace seqfuse
