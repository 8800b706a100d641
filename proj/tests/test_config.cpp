#include <doctest.h>

#include <json.hpp>

#include "seqfuse/config.hpp"
#include "seqfuse/report.hpp"

using namespace seqfuse;
using nlohmann::json;

namespace {

json minimal_config() {
    return json{
        {"model", {{"kind", "mean_shift"}, {"sigma2", 1.0}, {"gamma", {0.0, 0.0}}, {"theta", {0.4, 2.0}}}},
        {"scheme", {{"kind", "centralized"}}},
        {"L", 2},
        {"truth", {{"hypothesis", "H1"}, {"value", 0.4}}},
        {"sweep", {{"axis", "alpha"}, {"grid", {1e-2}}}},
        {"targets", {{"alpha", 1e-2}, {"beta", 1e-2}}},
        {"thresholds", {{"source", "asymptotic"}}},
        {"replications", 50},
        {"seed", 7},
        {"cap", 100000},
        {"output", {{"path", "out.csv"}, {"format", "csv"}}},
    };
}

}  // namespace

TEST_SUITE("config") {
    TEST_CASE("minimal config parses and resolves") {
        RunConfig config = parse_run_config(minimal_config());
        CHECK(config.sensors == 2);
        CHECK(config.grid.size() == 1);
        CHECK(!config.compare);
        ResolvedRun run = resolve_run(config);
        REQUIRE(run.specs.size() == 1);
        CHECK(run.specs[0].scheme.scheme == Scheme::Centralized);
        auto rows = run_sweep(run.specs[0]);
        CHECK(rows.size() == 1);
    }

    TEST_CASE("unknown keys are rejected everywhere") {
        json bad = minimal_config();
        bad["extra"] = 1;
        CHECK_THROWS_AS(parse_run_config(bad), ConfigError);

        bad = minimal_config();
        bad["model"]["noise"] = 2.0;
        CHECK_THROWS_AS(parse_run_config(bad), ConfigError);

        bad = minimal_config();
        bad["scheme"]["T1"] = 3;
        CHECK_THROWS_AS(parse_run_config(bad), ConfigError);
    }

    TEST_CASE("missing and malformed fields are rejected") {
        json bad = minimal_config();
        bad.erase("targets");
        CHECK_THROWS_AS(parse_run_config(bad), ConfigError);

        bad = minimal_config();
        bad["sweep"]["grid"] = json::array();
        CHECK_THROWS_AS(parse_run_config(bad), ConfigError);

        bad = minimal_config();
        bad["replications"] = 0;
        CHECK_THROWS_AS(parse_run_config(bad), ConfigError);

        bad = minimal_config();
        bad["model"]["kind"] = "poisson";
        CHECK_THROWS_AS(parse_run_config(bad), ConfigError);

        bad = minimal_config();
        bad["truth"]["value"] = 0.1;  // outside the alternative interval
        RunConfig parsed = parse_run_config(bad);
        CHECK_THROWS_AS(resolve_run(parsed), ConfigError);
    }

    TEST_CASE("scheme constraints") {
        json cfg = minimal_config();
        cfg["scheme"] = {{"kind", "uniform"}};
        CHECK_THROWS_AS(parse_run_config(cfg), ConfigError);

        cfg["scheme"] = {{"kind", "lts"}};
        CHECK_THROWS_AS(parse_run_config(cfg), ConfigError);

        cfg["scheme"] = {{"kind", "lts"}, {"a", 1.0}, {"b", 1.0}, {"target_period", 10.0}};
        CHECK_THROWS_AS(parse_run_config(cfg), ConfigError);

        cfg["scheme"] = {{"kind", "lts"}, {"a", 1.0}, {"b", 1.0}};
        CHECK_NOTHROW(parse_run_config(cfg));
    }

    TEST_CASE("compare mode expects one scheme entry per scheme") {
        json cfg = minimal_config();
        cfg.erase("scheme");
        cfg["schemes"] = json::array({
            {{"kind", "centralized"}},
            {{"kind", "uniform"}, {"T0", 1}, {"lambda", 0.32}},
            {{"kind", "lts"}, {"a", 1.2}, {"b", 1.2}},
        });
        RunConfig config = parse_run_config(cfg);
        CHECK(config.compare);
        ResolvedRun run = resolve_run(config);
        CHECK(run.specs.size() == 3);
    }

    TEST_CASE("uniform lambda defaults to the minimax threshold") {
        json cfg = minimal_config();
        cfg["scheme"] = {{"kind", "uniform"}, {"T0", 1}};
        ResolvedRun run = resolve_run(parse_run_config(cfg));
        REQUIRE(run.specs.size() == 1);
        REQUIRE(run.specs[0].scheme.lambda.has_value());
        CHECK(*run.specs[0].scheme.lambda >= 0.30);
        CHECK(*run.specs[0].scheme.lambda <= 0.34);
    }

    TEST_CASE("csv schema is fixed and numbers are locale independent") {
        std::string header = kSummaryCsvHeader;
        CHECK(header ==
              "point_id,scheme,L,target_alpha,target_beta,A,B,a,b,T0,lambda,truth,mean_T,"
              "stderr_T,emp_alpha,alpha_ci_lo,alpha_ci_hi,emp_beta,beta_ci_lo,beta_ci_hi,"
              "mean_messages,mean_tau,censored,pred_T");
        CHECK(format_double(0.08) == "0.08");
        CHECK(format_double(1.0 / 3.0) == "0.333333333333");
        CHECK(format_double(57.5644) == "57.5644");
    }

    TEST_CASE("json output re-parses with the expected fields") {
        RunConfig config = parse_run_config(minimal_config());
        ResolvedRun run = resolve_run(config);
        auto rows = run_sweep(run.specs[0]);
        std::string text = summaries_to_json(rows);
        json parsed = json::parse(text);
        REQUIRE(parsed.is_array());
        REQUIRE(parsed.size() == 1);
        for (const char* key : {"point_id", "scheme", "L", "target_alpha", "target_beta", "A",
                                "B", "truth", "mean_T", "stderr_T", "emp_alpha", "emp_beta",
                                "mean_messages", "mean_tau", "censored", "pred_T"})
            CHECK(parsed[0].contains(key));
    }
}
