// Acceptance suite: one PASS/FAIL line per criterion, every tolerance pinned
// below. Runs the shipped configs in-process and the CLI binary for the
// byte-for-byte determinism check.

#include "stoconv/config.hpp"
#include "stoconv/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

using namespace stoconv;
namespace fs = std::filesystem;

namespace {

constexpr double slope_low = -0.60;
constexpr double slope_high = -0.40;
constexpr double min_r_squared = 0.98;
constexpr double temporal_seconds = 300.0;
constexpr double spatial_slope_window = 0.1;
constexpr std::size_t exp_replications = 100000;
constexpr std::size_t audit_replications = 10000;

const fs::path source_dir = STOCONV_SOURCE_DIR;
const fs::path cli_path = STOCONV_CLI_PATH;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string param(const ReportRow& row, const std::string& key)
{
    std::istringstream in(row.parameters);
    std::string item;
    while (std::getline(in, item, ';')) {
        if (item.rfind(key + "=", 0) == 0) {
            return item.substr(key.size() + 1);
        }
    }
    return {};
}

std::vector<ReportRow> select(const Report& r, const std::string& experiment,
                              const std::string& quantity = {})
{
    std::vector<ReportRow> out;
    for (const auto& row : r.rows) {
        if (row.experiment == experiment && (quantity.empty() || row.quantity == quantity)) {
            out.push_back(row);
        }
    }
    return out;
}

const ReportRow* oracle(const Report& r, const std::string& name)
{
    for (const auto& row : r.rows) {
        if (row.experiment == "oracle" && row.quantity == name) {
            return &row;
        }
    }
    return nullptr;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

bool all_pass(const std::vector<ReportRow>& rows)
{
    return !rows.empty() &&
           std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.verdict == "pass"; });
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome oracle_outcome(const Report& st, std::initializer_list<const char*> names)
{
    Outcome o{true, {}};
    for (const char* name : names) {
        const ReportRow* row = oracle(st, name);
        if (row == nullptr) {
            return {false, fmt::format("missing oracle {}", name)};
        }
        o.pass = o.pass && row->verdict == "pass";
        o.detail += fmt::format("{}={:.3g} (tol {:.3g}) ", name, row->empirical, row->theoretical);
    }
    return o;
}

} // namespace

int main()
{
    std::vector<std::pair<int, Outcome>> results;
    auto report = [&](int id, Outcome o) {
        std::cout << fmt::format("criterion {:>2}: {}  {}\n", id, o.pass ? "PASS" : "FAIL", o.detail)
                  << std::flush;
        results.emplace_back(id, std::move(o));
    };

    // temporal and spatial sweeps
    const ExperimentConfig conv_cfg = load_config(source_dir / "configs/convergence.json");
    const auto conv_start = std::chrono::steady_clock::now();
    const Report conv = run_convergence_study(conv_cfg);
    const double conv_seconds = seconds_since(conv_start);
    {
        const auto fits = select(conv, "temporal_fit", "slope_vs_M");
        Outcome o;
        if (fits.size() != 1) {
            o = {false, "no temporal fit row"};
        } else {
            const double slope = fits[0].empirical;
            const double r2 = std::stod(param(fits[0], "r_squared"));
            o.pass = slope >= slope_low && slope <= slope_high && r2 >= min_r_squared &&
                     conv_seconds < temporal_seconds;
            o.detail = fmt::format("slope {:.4f} in [{}, {}], r^2 {:.4f} >= {}, {:.1f}s < {}s", slope,
                                   slope_low, slope_high, r2, min_r_squared, conv_seconds,
                                   temporal_seconds);
        }
        report(1, o);
    }
    {
        const auto tails = select(conv, "spatial", "tail_hs_vs_reference");
        std::set<std::pair<std::size_t, std::string>> seen;
        for (const auto& row : tails) {
            seen.emplace(row.modes, param(row, "eta"));
        }
        bool covered = true;
        for (std::size_t n : {2, 4, 8, 16, 32}) {
            for (const char* eta : {"0.1", "0.25", "0.4"}) {
                covered = covered && seen.count({n, eta}) == 1;
            }
        }
        const auto fits = select(conv, "spatial_fit", "slope_vs_lambda_next");
        Outcome o;
        if (fits.size() != 1) {
            o = {false, "no spatial fit row"};
        } else {
            const double gap = std::abs(fits[0].empirical - fits[0].theoretical);
            o.pass = covered && all_pass(tails) && gap <= spatial_slope_window;
            o.detail = fmt::format("{} tail checks {}, slope vs |lambda_(N+1)| {:.4f} vs implied {:.4f} "
                                   "(|diff| {:.4f} <= {})",
                                   tails.size(), all_pass(tails) && covered ? "hold" : "FAIL",
                                   fits[0].empirical, fits[0].theoretical, gap, spatial_slope_window);
        }
        report(2, o);
    }

    // bounds audit
    ExperimentConfig exp_cfg = load_config(source_dir / "configs/bounds_audit.json");
    exp_cfg.replications = exp_replications;
    exp_cfg.gamma = {0.0};
    exp_cfg.rho = {0.1};
    {
        const auto start = std::chrono::steady_clock::now();
        const auto rows = select(run_bounds_audit(exp_cfg), "exp_moment");
        Outcome o;
        o.pass = rows.size() == 1 && rows[0].verdict == "pass";
        if (!rows.empty()) {
            o.detail = fmt::format("E exp = {:.6f} + 3*{:.2e} <= {:.6f}, R={}, {:.1f}s", rows[0].empirical,
                                   rows[0].std_error, rows[0].theoretical, exp_replications,
                                   seconds_since(start));
        }
        report(3, o);
    }
    ExperimentConfig audit_cfg = load_config(source_dir / "configs/bounds_audit.json");
    audit_cfg.replications = audit_replications;
    const Report audit = run_bounds_audit(audit_cfg);
    {
        const auto rows = select(audit, "moment");
        std::set<std::string> gammas;
        std::string detail;
        for (const auto& row : rows) {
            gammas.insert(param(row, "gamma"));
            detail += fmt::format("gamma={}: {:.4f} <= {:.2f}; ", param(row, "gamma"), row.empirical,
                                  row.theoretical);
        }
        report(4, {all_pass(rows) && gammas.count("0") == 1 && gammas.count("0.25") == 1, detail});
    }
    {
        const auto rows = select(audit, "holder");
        std::set<std::string> rhos;
        std::string detail;
        for (const auto& row : rows) {
            if (param(row, "gamma") == "0") {
                rhos.insert(param(row, "rho"));
            }
            detail += fmt::format("(gamma={},rho={}) {:.3f} <= {:.1f}; ", param(row, "gamma"),
                                  param(row, "rho"), row.empirical, row.theoretical);
        }
        report(5, {all_pass(rows) && rhos.size() == 3, detail});
    }

    // oracle suites
    const ExperimentConfig st_cfg = load_config(source_dir / "configs/selftest.json");
    const Report st = run_selftest(st_cfg);
    report(6, oracle_outcome(st, {"psi_prime_finite_difference", "psi_double_prime_finite_difference",
                                  "ito_drift_half_trace_identity"}));
    report(7, oracle_outcome(st, {"covariance_vs_quadrature_max_z", "sampler_covariance_max_z"}));
    {
        Outcome o = oracle_outcome(st, {"ito_representation_gap_at_256"});
        for (const auto& row : select(st, "oracle", "ito_representation_gap")) {
            o.detail += fmt::format("S={}:{:.2e} ", param(row, "substeps"), row.empirical);
        }
        report(8, o);
    }
    report(9, oracle_outcome(st, {"bernoulli_truncation_defect", "identity_truncation_defect"}));

    // byte-identical reruns through the CLI
    {
        const fs::path work = fs::temp_directory_path() / fmt::format("stoconv_acceptance_{}", ::getpid());
        fs::create_directories(work);
        Outcome o{true, {}};
        for (const char* command : {"selftest", "convergence"}) {
            const std::string config = (source_dir / "configs" / (std::string(command) + ".json")).string();
            std::vector<std::string> outputs;
            for (int run = 0; run < 2; ++run) {
                const fs::path out = work / fmt::format("{}_{}.csv", command, run);
                const std::string cmd = fmt::format("\"{}\" {} --config \"{}\" --seed 424242 --out \"{}\" > /dev/null 2>&1",
                                                    cli_path.string(), command, config, out.string());
                const int status = std::system(cmd.c_str());
                o.detail += fmt::format("{}#{} exit {}; ", command, run, status);
                outputs.push_back(slurp(out));
            }
            const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
            o.pass = o.pass && same;
            o.detail += fmt::format("{}: {} bytes {}; ", command, outputs[0].size(),
                                    same ? "identical" : "DIFFER");
        }
        fs::remove_all(work);
        report(10, o);
    }

    const auto failed = std::count_if(results.begin(), results.end(),
                                      [](const auto& r) { return !r.second.pass; });
    std::cout << fmt::format("{} of {} criteria passed\n", results.size() - failed, results.size());
    return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
