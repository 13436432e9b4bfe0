#pragma once

#include "stoconv/noise.hpp"
#include "stoconv/scheme.hpp"
#include "stoconv/spectral.hpp"
#include "stoconv/time_grid.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stoconv {

/// Raised for invalid experiment configurations; the message names the field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int config_schema_version = 1;

struct OperatorSpec {
    std::string rule = "dirichlet_laplacian"; // or "explicit"
    std::size_t modes = 64;
    std::vector<double> eigenvalues;          // used when rule == "explicit"
};

struct NoiseSpec {
    std::string type = "diagonal";            // or "dense"
    double scale = 1.0;                       // b_n = scale * n^{-decay}
    double decay = 2.0;
    std::size_t u_modes = 0;                  // 0: same as the operator
    std::filesystem::path matrix_file;        // CSV, one H-mode per row
};

struct GridSpec {
    std::string type = "uniform";             // or "explicit"
    std::size_t steps = 1;
    std::vector<double> nodes;
};

struct PolicySpec {
    std::string kind = "identity";            // identity | bernoulli | norm_threshold
    std::optional<double> q;                  // fixed drop probability
    std::optional<double> rate_constant;      // q = min(1, c (T/M)^{max(p,2) rho})
    double rho = 0.0;
    double threshold = 0.0;
    double exponent = 0.0;
};

struct ExperimentConfig {
    int schema_version = config_schema_version;
    double horizon = 1.0;
    OperatorSpec op;
    NoiseSpec noise;
    std::vector<GridSpec> grids;
    std::vector<std::size_t> n_modes;         // kept H-modes N (prefix sets)
    std::vector<std::size_t> k_modes;         // kept U-modes K (prefix sets)
    PolicySpec policy;
    std::vector<double> p{2.0};
    double beta = 0.0;
    std::vector<double> gamma{0.0};
    std::vector<double> eta{0.25};
    std::vector<double> rho{0.25};
    std::optional<double> epsilon;            // default: half of eps_max
    std::size_t holder_pairs = 20;
    std::size_t replications = 1000;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    std::filesystem::path output = "stoconv_report.csv";

    // selftest sizes
    std::size_t selftest_trials = 100;
    std::size_t selftest_quadrature_paths = 10000;
    std::size_t selftest_quadrature_substeps = 4096;
    std::size_t selftest_sampler_draws = 100000;
    std::size_t selftest_representation_paths = 2000;

    /// Rejects out-of-range values with a ConfigError naming the field.
    void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

SpectralOperator make_operator(const ExperimentConfig& cfg);
NoiseOperator make_noise(const ExperimentConfig& cfg, std::size_t h_modes);
TimeGrid make_grid(const GridSpec& spec, double horizon);
TruncationPolicy make_policy(const ExperimentConfig& cfg, const TimeGrid& grid);

/// Dense matrix from CSV, one row per line.
Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path);

} // namespace stoconv
