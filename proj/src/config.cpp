#include "stoconv/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace stoconv {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what)
{
    throw ConfigError("config field '" + field + "': " + what);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback)
{
    if (!j.contains(key) || j.at(key).is_null()) {
        return fallback;
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(key, e.what());
    }
}

// Accepts a scalar or a list.
template <typename T>
std::vector<T> list_or(const json& j, const char* key, std::vector<T> fallback)
{
    if (!j.contains(key) || j.at(key).is_null()) {
        return fallback;
    }
    const json& v = j.at(key);
    try {
        if (v.is_array()) {
            return v.get<std::vector<T>>();
        }
        return {v.get<T>()};
    } catch (const json::exception& e) {
        fail(key, e.what());
    }
}

GridSpec grid_from_json(const json& g)
{
    GridSpec spec;
    if (g.is_number_integer()) {
        spec.steps = g.get<std::size_t>();
        return spec;
    }
    spec.type = get_or<std::string>(g, "type", "uniform");
    if (spec.type == "uniform") {
        spec.steps = get_or<std::size_t>(g, "M", 0);
    } else if (spec.type == "explicit") {
        spec.nodes = get_or<std::vector<double>>(g, "nodes", {});
        spec.steps = spec.nodes.empty() ? 0 : spec.nodes.size() - 1;
    } else {
        fail("grids.type", "unknown grid type '" + spec.type + "'");
    }
    return spec;
}

} // namespace

void ExperimentConfig::validate() const
{
    if (schema_version != config_schema_version) {
        fail("schema_version", "unsupported version " + std::to_string(schema_version));
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        fail("horizon", "must be positive");
    }
    if (op.rule == "dirichlet_laplacian") {
        if (op.modes == 0) {
            fail("operator.modes", "must be positive");
        }
    } else if (op.rule == "explicit") {
        if (op.eigenvalues.empty()) {
            fail("operator.eigenvalues", "must be a nonempty list");
        }
    } else {
        fail("operator.rule", "unknown rule '" + op.rule + "'");
    }
    if (noise.type != "diagonal" && noise.type != "dense") {
        fail("noise.type", "unknown type '" + noise.type + "'");
    }
    if (grids.empty()) {
        fail("grids", "at least one grid is required");
    }
    for (const auto& g : grids) {
        if (g.steps == 0) {
            fail("grids", "every grid needs M >= 1");
        }
    }
    if (n_modes.empty()) {
        fail("projections.N", "at least one N is required");
    }
    const std::size_t n_max = op.rule == "explicit" ? op.eigenvalues.size() : op.modes;
    for (std::size_t n : n_modes) {
        if (n > n_max) {
            fail("projections.N", "N = " + std::to_string(n) + " exceeds the " +
                                      std::to_string(n_max) + " operator modes");
        }
    }
    const std::size_t k_max = noise.type == "diagonal" && noise.u_modes != 0 ? noise.u_modes : 0;
    for (std::size_t k : k_modes) {
        if (k_max != 0 && k > k_max) {
            fail("projections.K", "K = " + std::to_string(k) + " exceeds noise.u_modes");
        }
    }
    if (p.empty() || gamma.empty() || eta.empty() || rho.empty()) {
        fail(p.empty() ? "p" : gamma.empty() ? "gamma" : eta.empty() ? "eta" : "rho",
             "must not be empty");
    }
    for (double v : p) {
        if (!(v >= 1.0)) {
            fail("p", "moment orders must be at least 1");
        }
    }
    if (!(beta >= 0.0)) {
        fail("beta", "must be nonnegative");
    }
    for (double g : gamma) {
        if (!(g >= 0.0 && g < 0.5 + beta)) {
            fail("gamma", "must lie in [0, 1/2 + beta)");
        }
    }
    // pairs with eta >= 1/2 + beta - gamma are skipped per gamma by the studies
    for (double e : eta) {
        if (!(e >= 0.0 && e < 0.5 + beta)) {
            fail("eta", "must lie in [0, 1/2 + beta)");
        }
    }
    for (double r : rho) {
        if (!(r >= 0.0 && r < 0.5)) {
            fail("rho", "must lie in [0, 1/2)");
        }
    }
    if (epsilon && !(*epsilon >= 0.0)) {
        fail("epsilon", "must be nonnegative");
    }
    if (replications < 2) {
        fail("replications", "must be at least 2");
    }
    if (threads == 0) {
        fail("threads", "must be at least 1");
    }
    if (policy.kind == "bernoulli") {
        if (!policy.q && !policy.rate_constant) {
            fail("policy", "bernoulli needs 'q' or 'rate_constant'");
        }
        if (policy.q && !(*policy.q >= 0.0 && *policy.q <= 1.0)) {
            fail("policy.q", "must lie in [0, 1]");
        }
    } else if (policy.kind == "norm_threshold") {
        if (!(policy.threshold > 0.0)) {
            fail("policy.threshold", "must be positive");
        }
    } else if (policy.kind != "identity") {
        fail("policy.kind", "unknown policy '" + policy.kind + "'");
    }
}

ExperimentConfig config_from_json(const json& j, const std::filesystem::path& base_dir)
{
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    ExperimentConfig cfg;
    cfg.schema_version = get_or<int>(j, "schema_version", config_schema_version);
    cfg.horizon = get_or<double>(j, "horizon", cfg.horizon);

    if (j.contains("operator")) {
        const json& o = j.at("operator");
        if (o.contains("eigenvalues")) {
            cfg.op.rule = "explicit";
            cfg.op.eigenvalues = get_or<std::vector<double>>(o, "eigenvalues", {});
            cfg.op.modes = cfg.op.eigenvalues.size();
        } else {
            cfg.op.rule = get_or<std::string>(o, "rule", cfg.op.rule);
            cfg.op.modes = get_or<std::size_t>(o, "modes", cfg.op.modes);
        }
    }
    if (j.contains("noise")) {
        const json& n = j.at("noise");
        cfg.noise.type = get_or<std::string>(n, "type", cfg.noise.type);
        cfg.noise.scale = get_or<double>(n, "scale", cfg.noise.scale);
        cfg.noise.decay = get_or<double>(n, "decay", cfg.noise.decay);
        cfg.noise.u_modes = get_or<std::size_t>(n, "u_modes", 0);
        const auto file = get_or<std::string>(n, "matrix_file", "");
        if (!file.empty()) {
            std::filesystem::path path(file);
            cfg.noise.matrix_file = path.is_relative() ? base_dir / path : path;
        }
    }
    if (j.contains("grids")) {
        for (const json& g : j.at("grids")) {
            cfg.grids.push_back(grid_from_json(g));
        }
    } else if (j.contains("M")) {
        for (std::size_t m : list_or<std::size_t>(j, "M", {})) {
            cfg.grids.push_back(GridSpec{"uniform", m, {}});
        }
    }
    const std::size_t n_max = cfg.op.rule == "explicit" ? cfg.op.eigenvalues.size() : cfg.op.modes;
    if (j.contains("projections")) {
        const json& pj = j.at("projections");
        cfg.n_modes = list_or<std::size_t>(pj, "N", {});
        cfg.k_modes = list_or<std::size_t>(pj, "K", {});
    }
    if (cfg.n_modes.empty()) {
        cfg.n_modes = {n_max};
    }
    if (j.contains("policy")) {
        const json& pj = j.at("policy");
        cfg.policy.kind = get_or<std::string>(pj, "kind", cfg.policy.kind);
        if (pj.contains("q")) {
            cfg.policy.q = get_or<double>(pj, "q", 0.0);
        }
        if (pj.contains("rate_constant")) {
            cfg.policy.rate_constant = get_or<double>(pj, "rate_constant", 1.0);
        }
        cfg.policy.rho = get_or<double>(pj, "rho", 0.0);
        cfg.policy.threshold = get_or<double>(pj, "threshold", 0.0);
        cfg.policy.exponent = get_or<double>(pj, "exponent", 0.0);
    }
    cfg.p = list_or<double>(j, "p", cfg.p);
    cfg.beta = get_or<double>(j, "beta", cfg.beta);
    cfg.gamma = list_or<double>(j, "gamma", cfg.gamma);
    cfg.eta = list_or<double>(j, "eta", cfg.eta);
    cfg.rho = list_or<double>(j, "rho", cfg.rho);
    if (j.contains("epsilon") && !j.at("epsilon").is_null()) {
        cfg.epsilon = get_or<double>(j, "epsilon", 0.0);
    }
    cfg.holder_pairs = get_or<std::size_t>(j, "holder_pairs", cfg.holder_pairs);
    cfg.replications = get_or<std::size_t>(j, "replications", cfg.replications);
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
    cfg.threads = get_or<std::size_t>(j, "threads", cfg.threads);
    cfg.output = get_or<std::string>(j, "output", cfg.output.string());
    if (j.contains("selftest")) {
        const json& s = j.at("selftest");
        cfg.selftest_trials = get_or<std::size_t>(s, "trials", cfg.selftest_trials);
        cfg.selftest_quadrature_paths =
            get_or<std::size_t>(s, "quadrature_paths", cfg.selftest_quadrature_paths);
        cfg.selftest_quadrature_substeps =
            get_or<std::size_t>(s, "quadrature_substeps", cfg.selftest_quadrature_substeps);
        cfg.selftest_sampler_draws =
            get_or<std::size_t>(s, "sampler_draws", cfg.selftest_sampler_draws);
        cfg.selftest_representation_paths =
            get_or<std::size_t>(s, "representation_paths", cfg.selftest_representation_paths);
    }
    if (cfg.grids.empty()) {
        cfg.grids.push_back(GridSpec{"uniform", 64, {}});
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(j, path.parent_path());
}

nlohmann::json config_to_json(const ExperimentConfig& cfg)
{
    json j;
    j["schema_version"] = cfg.schema_version;
    j["horizon"] = cfg.horizon;
    if (cfg.op.rule == "explicit") {
        j["operator"] = {{"eigenvalues", cfg.op.eigenvalues}};
    } else {
        j["operator"] = {{"rule", cfg.op.rule}, {"modes", cfg.op.modes}};
    }
    json n = {{"type", cfg.noise.type}};
    if (cfg.noise.type == "diagonal") {
        n["scale"] = cfg.noise.scale;
        n["decay"] = cfg.noise.decay;
        n["u_modes"] = cfg.noise.u_modes;
    } else {
        n["matrix_file"] = cfg.noise.matrix_file.string();
    }
    j["noise"] = n;
    json grids = json::array();
    for (const auto& g : cfg.grids) {
        if (g.type == "uniform") {
            grids.push_back({{"type", "uniform"}, {"M", g.steps}});
        } else {
            grids.push_back({{"type", "explicit"}, {"nodes", g.nodes}});
        }
    }
    j["grids"] = grids;
    j["projections"] = {{"N", cfg.n_modes}, {"K", cfg.k_modes}};
    json pol = {{"kind", cfg.policy.kind}};
    if (cfg.policy.q) {
        pol["q"] = *cfg.policy.q;
    }
    if (cfg.policy.rate_constant) {
        pol["rate_constant"] = *cfg.policy.rate_constant;
        pol["rho"] = cfg.policy.rho;
    }
    if (cfg.policy.kind == "norm_threshold") {
        pol["threshold"] = cfg.policy.threshold;
        pol["exponent"] = cfg.policy.exponent;
    }
    j["policy"] = pol;
    j["p"] = cfg.p;
    j["beta"] = cfg.beta;
    j["gamma"] = cfg.gamma;
    j["eta"] = cfg.eta;
    j["rho"] = cfg.rho;
    j["epsilon"] = cfg.epsilon ? json(*cfg.epsilon) : json(nullptr);
    j["holder_pairs"] = cfg.holder_pairs;
    j["replications"] = cfg.replications;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    return j;
}

SpectralOperator make_operator(const ExperimentConfig& cfg)
{
    if (cfg.op.rule == "explicit") {
        return SpectralOperator(cfg.op.eigenvalues);
    }
    return SpectralOperator::dirichlet_laplacian(cfg.op.modes);
}

NoiseOperator make_noise(const ExperimentConfig& cfg, std::size_t h_modes)
{
    if (cfg.noise.type == "dense") {
        Eigen::MatrixXd b = read_matrix_csv(cfg.noise.matrix_file);
        if (static_cast<std::size_t>(b.rows()) != h_modes) {
            fail("noise.matrix_file", "matrix has " + std::to_string(b.rows()) +
                                          " rows but the operator has " +
                                          std::to_string(h_modes) + " modes");
        }
        return NoiseOperator(std::move(b), cfg.beta);
    }
    const std::size_t u_modes = cfg.noise.u_modes == 0 ? h_modes : cfg.noise.u_modes;
    return NoiseOperator::diagonal(h_modes, u_modes, cfg.noise.scale, cfg.noise.decay, cfg.beta);
}

TimeGrid make_grid(const GridSpec& spec, double horizon)
{
    if (spec.type == "explicit") {
        TimeGrid grid = TimeGrid::from_nodes(spec.nodes);
        if (grid.horizon() != horizon) {
            fail("grids.nodes", "last node must equal the horizon");
        }
        return grid;
    }
    return TimeGrid::uniform(horizon, spec.steps);
}

TruncationPolicy make_policy(const ExperimentConfig& cfg, const TimeGrid& grid)
{
    const auto& spec = cfg.policy;
    if (spec.kind == "bernoulli") {
        if (spec.q) {
            return TruncationPolicy::bernoulli(*spec.q);
        }
        const double p = std::max(cfg.p.front(), 2.0);
        const double q = std::min(1.0, *spec.rate_constant * std::pow(grid.mesh(), p * spec.rho));
        return TruncationPolicy::bernoulli(q);
    }
    if (spec.kind == "norm_threshold") {
        return TruncationPolicy::norm_threshold(spec.threshold, spec.exponent);
    }
    return TruncationPolicy::identity();
}

Eigen::MatrixXd read_matrix_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        fail("noise.matrix_file", "cannot open " + path.string());
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                fail("noise.matrix_file", "non-numeric entry '" + cell + "'");
            }
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            fail("noise.matrix_file", "ragged rows");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        fail("noise.matrix_file", "empty matrix");
    }
    Eigen::MatrixXd b(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return b;
}

} // namespace stoconv
