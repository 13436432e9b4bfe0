#pragma once

#include "stoconv/config.hpp"
#include "stoconv/scheme.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace stoconv {

/// One line of an experiment report. `verdict` is "pass", "fail", or "info";
/// bound rows pass when empirical + 3 std_error <= theoretical.
struct ReportRow {
    std::string experiment;
    std::string quantity;
    std::size_t steps = 0;   // M, 0 when not applicable
    std::size_t modes = 0;   // N, 0 when not applicable
    std::string parameters;  // "key=value;key=value"
    double empirical = 0.0;
    double std_error = 0.0;
    double theoretical = 0.0;
    double margin = 0.0;
    std::string verdict = "info";
};

struct Report {
    std::string command;
    std::uint64_t seed = 0;
    std::vector<ReportRow> rows;
    std::vector<std::string> warnings;
    nlohmann::json config;

    bool passed() const;
    std::size_t failures() const;
};

/// Built-in configuration for one subcommand (same names as the CLI).
ExperimentConfig default_config(const std::string& command);

/// Temporal sweep over the configured grids (N fixed at its largest value)
/// with error-bound comparison and log-log fit, plus the closed-form spatial
/// tail sweep over N and the spectral tail-norm checks.
Report run_convergence_study(const ExperimentConfig& cfg);

/// Empirical moment and Hölder statistics of the scheme, plus exponential moments,
/// against their closed-form bounds.
Report run_bounds_audit(const ExperimentConfig& cfg);

/// Oracle suites: finite differences for psi', psi'', the drift identity, the
/// increment covariance against quadrature and sampling, the mild Itô
/// representation, and the Bernoulli truncation defect.
Report run_selftest(const ExperimentConfig& cfg);

/// Closed-form sup_t (E ||(-A)^gamma (I - P_N) O_t||^2)^{1/2} of the exact convolution.
double spatial_tail_error(const SpectralOperator& op, const NoiseOperator& noise,
                          std::size_t n_keep, double gamma, double horizon);

/// Slope of log(spatial tail error) against log|lambda_{N+1}| implied by
/// lambda_n ~ n^2 and b_n ~ n^{-decay}.
double implied_spatial_slope(double decay, double gamma);

void write_csv(const Report& report, std::ostream& out);
nlohmann::json summary_json(const Report& report);

/// Columns t, mode, scheme, exact; modes are 1-based.
void write_trajectory_csv(const CoupledTrajectory& path, std::ostream& out);

} // namespace stoconv
