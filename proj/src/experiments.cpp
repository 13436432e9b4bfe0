#include "stoconv/experiments.hpp"

#include "stoconv/bounds.hpp"
#include "stoconv/estimators.hpp"
#include "stoconv/montecarlo.hpp"
#include "stoconv/oracles.hpp"
#include "stoconv/taming.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

namespace stoconv {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// stream tags for per-cell seed derivation
enum : std::uint64_t {
    tag_temporal = 1,
    tag_defect = 2,
    tag_pairs = 3,
    tag_audit = 4,
    tag_selftest = 5,
};

std::string num(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    return fmt::format("{:.10g}", v);
}

ReportRow bound_row(std::string experiment, std::string quantity, std::size_t steps,
                    std::size_t modes, std::string parameters, const McEstimate& est,
                    double theoretical)
{
    ReportRow row;
    row.experiment = std::move(experiment);
    row.quantity = std::move(quantity);
    row.steps = steps;
    row.modes = modes;
    row.parameters = std::move(parameters);
    row.empirical = est.value;
    row.std_error = est.std_error;
    row.theoretical = theoretical;
    row.margin = theoretical - (est.value + 3.0 * est.std_error);
    row.verdict = row.margin >= 0.0 ? "pass" : "fail";
    return row;
}

ReportRow oracle_row(const OracleResult& r, std::string parameters = {})
{
    ReportRow row;
    row.experiment = "oracle";
    row.quantity = r.name;
    row.parameters = std::move(parameters);
    row.empirical = r.measured;
    row.std_error = 0.0;
    row.theoretical = r.tolerance;
    row.margin = r.tolerance - r.measured;
    row.verdict = r.pass ? "pass" : "fail";
    return row;
}

std::size_t kept_u_modes(const ExperimentConfig& cfg, const NoiseOperator& noise)
{
    if (cfg.k_modes.empty()) {
        return noise.u_modes();
    }
    return *std::max_element(cfg.k_modes.begin(), cfg.k_modes.end());
}

std::vector<std::pair<std::size_t, std::size_t>> random_node_pairs(std::size_t steps,
                                                                   std::size_t count,
                                                                   std::uint64_t seed)
{
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    const std::size_t total = steps * (steps + 1) / 2;
    if (count >= total) {
        for (std::size_t t = 1; t <= steps; ++t) {
            for (std::size_t s = 0; s < t; ++s) {
                pairs.emplace_back(s, t);
            }
        }
        return pairs;
    }
    RandomStream stream(seed);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    const auto nodes = static_cast<double>(steps + 1);
    while (pairs.size() < count) {
        auto a = static_cast<std::size_t>(stream.uniform() * nodes);
        auto b = static_cast<std::size_t>(stream.uniform() * nodes);
        a = std::min(a, steps);
        b = std::min(b, steps);
        if (a == b) {
            continue;
        }
        const auto pair = std::minmax(a, b);
        if (seen.insert(pair).second) {
            pairs.emplace_back(pair.first, pair.second);
        }
    }
    return pairs;
}

Eigen::MatrixXd column_block(const Eigen::MatrixXd& m, std::size_t block, std::size_t width,
                             std::size_t offset = 0)
{
    return m.middleCols(static_cast<Eigen::Index>(offset + block * width),
                        static_cast<Eigen::Index>(width));
}

} // namespace

bool Report::passed() const
{
    return failures() == 0;
}

std::size_t Report::failures() const
{
    return static_cast<std::size_t>(
        std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return r.verdict == "fail"; }));
}

ExperimentConfig default_config(const std::string& command)
{
    ExperimentConfig cfg;
    cfg.op.modes = 64;
    cfg.noise.decay = 2.0;
    cfg.seed = 20240917;
    cfg.p = {2.0};
    cfg.gamma = {0.0, 0.25};
    cfg.eta = {0.1, 0.25, 0.4};
    cfg.rho = {0.1, 0.25, 0.45};
    if (command == "convergence") {
        for (std::size_t m : {8, 16, 32, 64, 128, 256, 512}) {
            cfg.grids.push_back(GridSpec{"uniform", m, {}});
        }
        cfg.n_modes = {2, 4, 8, 16, 32, 64};
        cfg.replications = 2000;
        cfg.output = "convergence.csv";
    } else if (command == "bounds-audit") {
        cfg.grids.push_back(GridSpec{"uniform", 64, {}});
        cfg.n_modes = {64};
        cfg.replications = 10000;
        cfg.output = "bounds_audit.csv";
    } else {
        cfg.grids.push_back(GridSpec{"uniform", 4, {}});
        cfg.n_modes = {4};
        cfg.output = "selftest.csv";
    }
    cfg.validate();
    return cfg;
}

double spatial_tail_error(const SpectralOperator& op, const NoiseOperator& noise,
                          std::size_t n_keep, double gamma, double horizon)
{
    // Var(O_t, n) increases in t, so the sup over [0, T] sits at T
    const Eigen::VectorXd var = convolution_variance(op, noise, horizon);
    const Eigen::VectorXd weights = op.power_weights(2.0 * gamma);
    double sum = 0.0;
    for (std::size_t n = n_keep; n < op.size(); ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        sum += weights[i] * var[i];
    }
    return std::sqrt(sum);
}

double implied_spatial_slope(double decay, double gamma)
{
    // sum_{n>N} n^{4 gamma - 2 decay - 2} ~ N^{-(2 decay + 1 - 4 gamma)}, |lambda_{N+1}| ~ N^2
    return -(2.0 * decay + 1.0 - 4.0 * gamma) / 4.0;
}

Report run_convergence_study(const ExperimentConfig& cfg)
{
    cfg.validate();
    Report report;
    report.command = "convergence";
    report.seed = cfg.seed;
    report.config = config_to_json(cfg);

    const SpectralOperator op = make_operator(cfg);
    const NoiseOperator noise = make_noise(cfg, op.size());
    const std::size_t n_time = *std::max_element(cfg.n_modes.begin(), cfg.n_modes.end());
    const std::size_t k_time = kept_u_modes(cfg, noise);
    const SchemeSetup setup = SchemeSetup::prefix(op, noise, n_time, k_time);
    const double hs_beta = hs_norm(noise, op, cfg.beta);
    const double hs_zero = hs_norm(noise, op, 0.0);
    const std::size_t n_gamma = cfg.gamma.size();

    // errors[p][gamma] = list of (M, error)
    std::vector<std::vector<std::vector<std::pair<double, double>>>> errors(
        cfg.p.size(), std::vector<std::vector<std::pair<double, double>>>(n_gamma));

    for (std::size_t g = 0; g < cfg.grids.size(); ++g) {
        const TimeGrid grid = make_grid(cfg.grids[g], cfg.horizon);
        const TruncationPolicy policy = make_policy(cfg, grid);
        const CoupledSimulator sim(grid, setup, policy);
        const std::size_t nodes = grid.steps() + 1;

        const Eigen::MatrixXd samples = run_paths(
            cfg.replications, derive_seed(cfg.seed, tag_temporal, g), cfg.threads,
            [&](std::size_t, RandomStream& stream) {
                const CoupledTrajectory path = sim.simulate(stream);
                Eigen::VectorXd row(static_cast<Eigen::Index>(n_gamma * nodes));
                for (std::size_t c = 0; c < n_gamma; ++c) {
                    for (std::size_t k = 0; k < nodes; ++k) {
                        row[static_cast<Eigen::Index>(c * nodes + k)] =
                            fractional_norm(op, cfg.gamma[c], path.scheme[k] - path.exact[k]);
                    }
                }
                return row;
            });

        for (std::size_t pi = 0; pi < cfg.p.size(); ++pi) {
            const double p = cfg.p[pi];
            const double p_lift = std::max(p, 2.0);
            for (std::size_t c = 0; c < n_gamma; ++c) {
                const double gamma = cfg.gamma[c];
                McEstimate est = sup_node_lp(column_block(samples, c, nodes), p);
                est.seed = cfg.seed;

                double theoretical = inf;
                std::string best;
                for (double rho : cfg.rho) {
                    if (!(rho < 0.5 + cfg.beta - gamma)) {
                        continue;
                    }
                    const double defect =
                        truncation_defect(policy, grid, p_lift, rho, cfg.replications,
                                          derive_seed(cfg.seed, tag_defect, g), &setup);
                    const double c_chi = truncation_constant(defect, p_lift, rho, cfg.horizon);
                    for (double eta : cfg.eta) {
                        if (!(eta < 0.5 + cfg.beta - gamma)) {
                            continue;
                        }
                        BoundInputs in;
                        in.p = p;
                        in.beta = cfg.beta;
                        in.gamma = gamma;
                        in.eta = eta;
                        in.rho = rho;
                        in.horizon = cfg.horizon;
                        in.c_chi = c_chi;
                        in.hs_beta = hs_beta;
                        in.hs_zero = hs_zero;
                        in.sup_lambda = op.sup_eigenvalue();
                        in.mesh = grid.mesh();
                        const double tail =
                            spectral_tail_hs(op, noise, n_time, k_time, cfg.beta - eta);
                        const double bound = error_bound(in, tail);
                        if (bound < theoretical) {
                            theoretical = bound;
                            best = fmt::format(";rho={};eta={};C={}", num(rho), num(eta), num(c_chi));
                        }
                    }
                }
                report.rows.push_back(bound_row(
                    "temporal", "lp_error_grid_sup", grid.steps(), n_time,
                    fmt::format("p={};gamma={};K={}{}", num(p), num(gamma), k_time, best), est,
                    theoretical));
                errors[pi][c].emplace_back(static_cast<double>(grid.steps()), est.value);
            }
        }
    }

    for (std::size_t pi = 0; pi < cfg.p.size(); ++pi) {
        for (std::size_t c = 0; c < n_gamma; ++c) {
            const auto& points = errors[pi][c];
            const bool usable = points.size() >= 3 &&
                                std::all_of(points.begin(), points.end(),
                                            [](const auto& pt) { return pt.second > 0.0; });
            if (!usable) {
                report.warnings.push_back(fmt::format(
                    "temporal sweep for p={} gamma={} has fewer than three usable grids; no rate fit",
                    num(cfg.p[pi]), num(cfg.gamma[c])));
                continue;
            }
            const RateFit fit = fit_rate(points);
            ReportRow row;
            row.experiment = "temporal_fit";
            row.quantity = "slope_vs_M";
            row.modes = n_time;
            row.parameters = fmt::format("p={};gamma={};r_squared={}", num(cfg.p[pi]),
                                         num(cfg.gamma[c]), num(fit.r_squared));
            row.empirical = fit.slope;
            row.std_error = nan;
            row.theoretical = nan;
            row.margin = nan;
            report.rows.push_back(row);
        }
    }

    // spatial: closed-form tail of the exact convolution and tail-norm checks
    std::vector<std::size_t> spatial_n;
    for (std::size_t n : cfg.n_modes) {
        if (n < op.size()) {
            spatial_n.push_back(n);
        }
    }
    std::sort(spatial_n.begin(), spatial_n.end());
    for (std::size_t n : spatial_n) {
        for (double eta : cfg.eta) {
            const double tail = spectral_tail_hs(op, noise, n, noise.u_modes(), cfg.beta - eta);
            const double reference = spectral_tail_reference(op, noise, n, cfg.beta, eta);
            ReportRow row;
            row.experiment = "spatial";
            row.quantity = "tail_hs_vs_reference";
            row.modes = n;
            row.parameters = fmt::format("eta={};r={}", num(eta), num(cfg.beta - eta));
            row.empirical = tail;
            row.std_error = 0.0;
            row.theoretical = reference;
            row.margin = reference - tail;
            row.verdict = tail <= reference * (1.0 + 1e-12) ? "pass" : "fail";
            report.rows.push_back(row);
        }
    }
    for (double gamma : cfg.gamma) {
        std::vector<std::pair<double, double>> points;
        std::vector<std::pair<double, double>> by_n;
        for (std::size_t n : spatial_n) {
            const double err = spatial_tail_error(op, noise, n, gamma, cfg.horizon);
            ReportRow row;
            row.experiment = "spatial";
            row.quantity = "l2_tail_error";
            row.modes = n;
            row.parameters = fmt::format("gamma={};lambda_next={}", num(gamma),
                                         num(op.tail_infimum(n)));
            row.empirical = err;
            row.std_error = 0.0;
            row.theoretical = nan;
            row.margin = nan;
            report.rows.push_back(row);
            if (err > 0.0) {
                points.emplace_back(op.tail_infimum(n), err);
                by_n.emplace_back(static_cast<double>(n), err);
            }
        }
        if (points.size() < 3) {
            report.warnings.push_back(fmt::format(
                "spatial sweep for gamma={} has fewer than three usable N; no rate fit", num(gamma)));
            continue;
        }
        const RateFit fit = fit_rate(points);
        const RateFit fit_n = fit_rate(by_n);
        const bool laplacian_diagonal = cfg.op.rule == "dirichlet_laplacian" && cfg.noise.type == "diagonal";
        ReportRow row;
        row.experiment = "spatial_fit";
        row.quantity = "slope_vs_lambda_next";
        row.parameters = fmt::format("gamma={};r_squared={}", num(gamma), num(fit.r_squared));
        row.empirical = fit.slope;
        row.std_error = nan;
        row.theoretical = laplacian_diagonal ? implied_spatial_slope(cfg.noise.decay, gamma) : nan;
        row.margin = row.theoretical - row.empirical;
        report.rows.push_back(row);

        // same data against N itself; pre-asymptotic for small N
        row.quantity = "slope_vs_N";
        row.parameters = fmt::format("gamma={};r_squared={}", num(gamma), num(fit_n.r_squared));
        row.empirical = fit_n.slope;
        row.theoretical = laplacian_diagonal ? 2.0 * implied_spatial_slope(cfg.noise.decay, gamma) : nan;
        row.margin = row.theoretical - row.empirical;
        report.rows.push_back(row);
    }
    return report;
}

Report run_bounds_audit(const ExperimentConfig& cfg)
{
    cfg.validate();
    Report report;
    report.command = "bounds-audit";
    report.seed = cfg.seed;
    report.config = config_to_json(cfg);

    const SpectralOperator op = make_operator(cfg);
    const NoiseOperator noise = make_noise(cfg, op.size());
    const std::size_t k_keep = kept_u_modes(cfg, noise);
    const std::size_t n_gamma = cfg.gamma.size();

    const double eps_max = exp_moment_eps_max(hs_norm(noise, op, 0.0), cfg.horizon);
    const double eps = cfg.epsilon ? *cfg.epsilon : 0.5 * eps_max;
    if (eps >= eps_max) {
        report.warnings.push_back(fmt::format(
            "epsilon={} is at or above eps_max={}; the exponential moment bound is +inf", num(eps),
            num(eps_max)));
    }

    for (std::size_t g = 0; g < cfg.grids.size(); ++g) {
        const TimeGrid grid = make_grid(cfg.grids[g], cfg.horizon);
        const TruncationPolicy policy = make_policy(cfg, grid);
        const std::size_t nodes = grid.steps() + 1;
        const auto pairs =
            random_node_pairs(grid.steps(), cfg.holder_pairs, derive_seed(cfg.seed, tag_pairs, g));
        std::vector<double> gaps;
        for (const auto& [s, t] : pairs) {
            gaps.push_back(grid.node(t) - grid.node(s));
        }
        const std::size_t n_pairs = pairs.size();

        for (std::size_t ni = 0; ni < cfg.n_modes.size(); ++ni) {
            const std::size_t n_keep = cfg.n_modes[ni];
            const SchemeSetup setup = SchemeSetup::prefix(op, noise, n_keep, k_keep);
            const NoiseOperator projected = setup.projected_noise();
            const CoupledSimulator sim(grid, setup, policy);

            const std::size_t width = n_gamma * nodes + nodes + n_gamma * n_pairs;
            const Eigen::MatrixXd samples = run_paths(
                cfg.replications, derive_seed(cfg.seed, tag_audit, g * 4096 + ni), cfg.threads,
                [&](std::size_t, RandomStream& stream) {
                    const std::vector<StateVector> path = sim.simulate_scheme(stream);
                    Eigen::VectorXd row(static_cast<Eigen::Index>(width));
                    Eigen::Index at = 0;
                    for (double gamma : cfg.gamma) {
                        for (std::size_t k = 0; k < nodes; ++k) {
                            row[at++] = fractional_norm(op, gamma, path[k]);
                        }
                    }
                    for (std::size_t k = 0; k < nodes; ++k) {
                        row[at++] = eps * path[k].squaredNorm();
                    }
                    for (double gamma : cfg.gamma) {
                        for (const auto& [s, t] : pairs) {
                            row[at++] = fractional_norm(op, gamma, path[t] - path[s]);
                        }
                    }
                    return row;
                });

            BoundInputs base;
            base.beta = cfg.beta;
            base.horizon = cfg.horizon;
            base.hs_beta = hs_norm(projected, op, cfg.beta);
            base.hs_zero = hs_norm(projected, op, 0.0);
            base.sup_lambda = op.sup_eigenvalue();
            base.mesh = grid.mesh();

            for (double p : cfg.p) {
                for (std::size_t c = 0; c < n_gamma; ++c) {
                    BoundInputs in = base;
                    in.p = p;
                    in.gamma = cfg.gamma[c];
                    McEstimate est = sup_node_lp(column_block(samples, c, nodes), p);
                    est.seed = cfg.seed;
                    report.rows.push_back(bound_row(
                        "moment", "lp_norm_grid_sup", grid.steps(), n_keep,
                        fmt::format("p={};gamma={};beta={}", num(p), num(in.gamma), num(cfg.beta)),
                        est, moment_bound(in)));
                }
            }

            const std::size_t pair_offset = n_gamma * nodes + nodes;
            for (double p : cfg.p) {
                for (std::size_t c = 0; c < n_gamma; ++c) {
                    for (double rho : cfg.rho) {
                        const double gamma = cfg.gamma[c];
                        if (!(rho < 0.5 + cfg.beta - gamma)) {
                            report.warnings.push_back(fmt::format(
                                "skipping Hölder rho={} for gamma={}: outside [0, 1/2 + beta - gamma)",
                                num(rho), num(gamma)));
                            continue;
                        }
                        BoundInputs in = base;
                        in.p = p;
                        in.gamma = gamma;
                        in.rho = rho;
                        McEstimate est = max_holder_quotient(
                            column_block(samples, c, n_pairs, pair_offset), gaps, p, rho);
                        est.seed = cfg.seed;
                        report.rows.push_back(bound_row(
                            "holder", "max_pair_quotient", grid.steps(), n_keep,
                            fmt::format("p={};gamma={};rho={};pairs={}", num(p), num(gamma),
                                        num(rho), n_pairs),
                            est, holder_constant(in)));
                    }
                }
            }

            const ExpMomentEstimate exp_est =
                sup_node_exp_mean(column_block(samples, 0, nodes, n_gamma * nodes));
            McEstimate est = exp_est.estimate;
            est.seed = cfg.seed;
            report.rows.push_back(bound_row(
                "exp_moment", "exp_eps_norm_sq_grid_sup", grid.steps(), n_keep,
                fmt::format("eps={};eps_max={}", num(eps), num(eps_max)), est,
                exp_moment_bound(eps, base.hs_zero, cfg.horizon)));
            if (exp_est.heavy_tail) {
                report.warnings.push_back(fmt::format(
                    "exponential moment at M={} N={} is dominated by its top 0.1% of samples",
                    grid.steps(), n_keep));
            }
        }
    }
    return report;
}

Report run_selftest(const ExperimentConfig& cfg)
{
    cfg.validate();
    Report report;
    report.command = "selftest";
    report.seed = cfg.seed;
    report.config = config_to_json(cfg);
    auto seed_for = [&](std::uint64_t k) { return derive_seed(cfg.seed, tag_selftest, k); };

    report.rows.push_back(oracle_row(
        psi_prime_fd_oracle(psi_prime_apply, cfg.selftest_trials, seed_for(1)), "step=1e-05"));
    report.rows.push_back(oracle_row(
        psi_double_prime_fd_oracle(psi_double_prime_apply, cfg.selftest_trials, seed_for(2)),
        "step=1e-05"));
    report.rows.push_back(oracle_row(ito_drift_identity_oracle(cfg.selftest_trials, seed_for(3))));

    // covariance blocks on a small dense problem
    const SpectralOperator small_op({-1.0, -4.0, -9.0});
    Eigen::MatrixXd b(3, 3);
    b << 1.0, 0.3, 0.0,
         0.2, 0.5, -0.4,
         0.0, 0.1, 0.25;
    const NoiseOperator small_noise(b);
    constexpr double step = 0.5;
    const CovarianceCheck quad =
        covariance_quadrature_check(small_op, small_noise, step, cfg.selftest_quadrature_substeps,
                                    cfg.selftest_quadrature_paths, seed_for(4));
    report.rows.push_back(oracle_row(
        OracleResult{"covariance_vs_quadrature_max_z", quad.max_z_score, 5.0, quad.max_z_score <= 5.0},
        fmt::format("substeps={};paths={};entries={}", cfg.selftest_quadrature_substeps,
                    quad.samples, quad.entries)));
    const CovarianceCheck sampled =
        sampler_covariance_check(small_op, small_noise, step, cfg.selftest_sampler_draws, seed_for(5));
    report.rows.push_back(oracle_row(
        OracleResult{"sampler_covariance_max_z", sampled.max_z_score, 5.0,
                     sampled.max_z_score <= 5.0},
        fmt::format("draws={};entries={}", sampled.samples, sampled.entries)));

    // mild Itô representation, N = 4, M = 4
    {
        const SpectralOperator op = SpectralOperator::dirichlet_laplacian(4);
        const NoiseOperator noise = NoiseOperator::diagonal(4, 4, cfg.noise.scale, cfg.noise.decay);
        const SchemeSetup setup = SchemeSetup::prefix(op, noise, 4, 4);
        const TimeGrid grid = TimeGrid::uniform(cfg.horizon, 4);
        double previous = inf;
        bool monotone = true;
        double last = inf;
        for (std::size_t s : {16, 64, 256}) {
            const McEstimate gap =
                ito_representation_gap(setup, grid, TruncationPolicy::identity(), s,
                                        cfg.selftest_representation_paths, seed_for(6), cfg.threads);
            monotone = monotone && gap.value < previous;
            previous = gap.value;
            last = gap.value;
            ReportRow row;
            row.experiment = "oracle";
            row.quantity = "ito_representation_gap";
            row.steps = 4;
            row.modes = 4;
            row.parameters = fmt::format("substeps={};paths={}", s, cfg.selftest_representation_paths);
            row.empirical = gap.value;
            row.std_error = gap.std_error;
            row.theoretical = nan;
            row.margin = nan;
            report.rows.push_back(row);
        }
        report.rows.push_back(oracle_row(
            OracleResult{"ito_representation_gap_at_256", last, 0.05, monotone && last < 0.05},
            monotone ? "monotone=yes" : "monotone=no"));
    }

    // Bernoulli truncation with q = min(1, (T/M)^{p rho}) has defect T^{p rho}
    {
        const double p = 2.0;
        const double rho = 0.25;
        const double expected = std::pow(cfg.horizon, p * rho);
        double worst = 0.0;
        double identity_worst = 0.0;
        for (std::size_t m = 2; m <= 1024; m *= 2) {
            const TimeGrid grid = TimeGrid::uniform(cfg.horizon, m);
            const double q = std::min(1.0, std::pow(cfg.horizon / static_cast<double>(m), p * rho));
            const double defect =
                truncation_defect(TruncationPolicy::bernoulli(q), grid, p, rho, 1, cfg.seed);
            worst = std::max(worst, std::abs(defect - expected) / expected);
            identity_worst = std::max(
                identity_worst,
                truncation_defect(TruncationPolicy::identity(), grid, p, rho, 1, cfg.seed));
        }
        report.rows.push_back(oracle_row(
            OracleResult{"bernoulli_truncation_defect", worst, 1e-12, worst <= 1e-12},
            fmt::format("p={};rho={};M=2..1024", num(p), num(rho))));
        report.rows.push_back(oracle_row(
            OracleResult{"identity_truncation_defect", identity_worst, 0.0, identity_worst == 0.0}));
    }
    return report;
}

void write_csv(const Report& report, std::ostream& out)
{
    out << "experiment,quantity,M,N,parameters,empirical,std_error,theoretical,margin,verdict\n";
    for (const auto& r : report.rows) {
        out << r.experiment << ',' << r.quantity << ',' << r.steps << ',' << r.modes << ','
            << r.parameters << ',' << num(r.empirical) << ',' << num(r.std_error) << ','
            << num(r.theoretical) << ',' << num(r.margin) << ',' << r.verdict << '\n';
    }
}

nlohmann::json summary_json(const Report& report)
{
    nlohmann::json j;
    j["command"] = report.command;
    j["seed"] = report.seed;
    j["rows"] = report.rows.size();
    j["failures"] = report.failures();
    j["passed"] = report.passed();
    j["warnings"] = report.warnings;
    j["config"] = report.config;
    j["notes"] = {"sup over [0, T] is taken over grid nodes (grid sup)"};
    nlohmann::json fits = nlohmann::json::array();
    for (const auto& r : report.rows) {
        if (r.experiment.ends_with("_fit")) {
            fits.push_back({{"experiment", r.experiment},
                            {"quantity", r.quantity},
                            {"parameters", r.parameters},
                            {"slope", num(r.empirical)},
                            {"implied", num(r.theoretical)}});
        }
    }
    j["fits"] = fits;
    return j;
}

void write_trajectory_csv(const CoupledTrajectory& path, std::ostream& out)
{
    out << "t,mode,scheme,exact\n";
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        for (Eigen::Index n = 0; n < path.scheme[k].size(); ++n) {
            out << num(path.times[k]) << ',' << (n + 1) << ',' << num(path.scheme[k][n]) << ','
                << num(path.exact[k][n]) << '\n';
        }
    }
}

} // namespace stoconv
