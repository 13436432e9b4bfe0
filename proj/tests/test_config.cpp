#include "stoconv/config.hpp"
#include "stoconv/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace stoconv;
using nlohmann::json;

namespace {

json small_config()
{
    return json::parse(R"({
        "schema_version": 1,
        "horizon": 1.0,
        "operator": {"rule": "dirichlet_laplacian", "modes": 8},
        "noise": {"type": "diagonal", "scale": 1.0, "decay": 2.0},
        "grids": [4, 8, 16],
        "projections": {"N": [2, 4, 8]},
        "policy": {"kind": "identity"},
        "p": [2],
        "gamma": [0.0],
        "eta": [0.25],
        "rho": [0.25],
        "replications": 200,
        "seed": 3
    })");
}

} // namespace

TEST_CASE("config parsing and validation")
{
    const ExperimentConfig cfg = config_from_json(small_config());
    CHECK(cfg.grids.size() == 3);
    CHECK(cfg.n_modes.back() == 8);
    CHECK(config_from_json(config_to_json(cfg)).grids[2].steps == 16);

    json bad = small_config();
    bad["gamma"] = {0.7};
    CHECK_THROWS_WITH_AS(config_from_json(bad), doctest::Contains("gamma"), ConfigError);
    bad = small_config();
    bad["schema_version"] = 2;
    CHECK_THROWS_WITH_AS(config_from_json(bad), doctest::Contains("schema_version"), ConfigError);
    bad = small_config();
    bad["projections"]["N"] = {9};
    CHECK_THROWS_WITH_AS(config_from_json(bad), doctest::Contains("N"), ConfigError);
    bad = small_config();
    bad["policy"] = {{"kind", "sometimes"}};
    CHECK_THROWS_WITH_AS(config_from_json(bad), doctest::Contains("policy"), ConfigError);
    bad = small_config();
    bad["replications"] = "many";
    CHECK_THROWS_WITH_AS(config_from_json(bad), doctest::Contains("replications"), ConfigError);
}

TEST_CASE("convergence report structure")
{
    ExperimentConfig cfg = config_from_json(small_config());
    const Report report = run_convergence_study(cfg);
    int temporal = 0;
    int fits = 0;
    for (const auto& row : report.rows) {
        temporal += row.experiment == "temporal";
        fits += row.experiment == "temporal_fit";
        CHECK_FALSE(row.quantity.empty());
        CHECK((row.verdict == "pass" || row.verdict == "fail" || row.verdict == "info"));
    }
    CHECK(temporal == 3);
    CHECK(fits == 1);

    cfg.grids.resize(1);
    const Report single = run_convergence_study(cfg);
    for (const auto& row : single.rows) {
        CHECK(row.experiment != "temporal_fit");
    }
    CHECK_FALSE(single.warnings.empty());
}

TEST_CASE("bounds audit edge cases")
{
    json j = small_config();
    j["grids"] = {8};
    j["projections"]["N"] = {8};
    j["noise"]["scale"] = 0.0;
    const Report zero = run_bounds_audit(config_from_json(j));
    CHECK(zero.passed());
    for (const auto& row : zero.rows) {
        CHECK((row.empirical == 0.0 || row.empirical == 1.0));
    }

    j["noise"]["scale"] = 1.0;
    j["epsilon"] = 10.0;
    const Report above = run_bounds_audit(config_from_json(j));
    CHECK(above.passed());
    bool saw_inf = false;
    for (const auto& row : above.rows) {
        if (row.experiment == "exp_moment") {
            saw_inf = std::isinf(row.theoretical);
        }
    }
    CHECK(saw_inf);
    CHECK_FALSE(above.warnings.empty());
}

TEST_CASE("reports are reproducible")
{
    const ExperimentConfig cfg = config_from_json(small_config());
    std::ostringstream a;
    std::ostringstream b;
    write_csv(run_convergence_study(cfg), a);
    ExperimentConfig threaded = cfg;
    threaded.threads = 3;
    write_csv(run_convergence_study(threaded), b);
    CHECK(a.str() == b.str());
}

TEST_CASE("implied spatial slope")
{
    CHECK(implied_spatial_slope(2.0, 0.0) == -1.25);
    CHECK(implied_spatial_slope(1.0, 0.25) == -0.5);
}
