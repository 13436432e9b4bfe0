#pragma once

#include "stoconv/montecarlo.hpp"
#include "stoconv/scheme.hpp"
#include "stoconv/spectral.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace stoconv {

struct RateFit {
    std::vector<std::pair<double, double>> points; // (scale, error)
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

struct ExpMomentEstimate {
    McEstimate estimate;
    /// Top 0.1% of samples carry more than half of the mean at the sup node.
    bool heavy_tail = false;
};

// Sample-matrix reductions. Rows are paths, columns are grid nodes (or node
// pairs); entries are per-path norms.

/// max over columns of (mean_i x_i^p)^{1/p}, with a delta-method standard
/// error at the maximizing column.
McEstimate sup_node_lp(const Eigen::MatrixXd& norms, double p);

/// max over columns of mean_i exp(a_i), evaluated in log-sum-exp form.
ExpMomentEstimate sup_node_exp_mean(const Eigen::MatrixXd& exponents);

/// max over pairs k of (mean_i x_ik^p)^{1/p} / gap_k^rho.
McEstimate max_holder_quotient(const Eigen::MatrixXd& norms, std::span<const double> gaps,
                               double p, double rho);

// Batch estimators over coupled trajectories. All throw on an empty batch.

/// Grid sup of (E ||(-A)^gamma (O^scheme_t - O_t)||_H^p)^{1/p}.
McEstimate lp_error_sup(std::span<const CoupledTrajectory> batch, const SpectralOperator& op,
                        double p, double gamma);

/// Grid sup of (E ||O^scheme_t||_{H_gamma}^p)^{1/p}.
McEstimate empirical_moment(std::span<const CoupledTrajectory> batch, const SpectralOperator& op,
                            double p, double gamma);

/// Grid sup of E exp(eps ||O^scheme_t||_H^2).
ExpMomentEstimate empirical_exp_moment(std::span<const CoupledTrajectory> batch, double eps);

/// max over node pairs (s, t), s < t, of (E ||O_t - O_s||_{H_gamma}^p)^{1/p} / (t - s)^rho.
McEstimate holder_quotient(std::span<const CoupledTrajectory> batch, const SpectralOperator& op,
                           double p, double gamma, double rho,
                           std::span<const std::pair<std::size_t, std::size_t>> node_pairs);

/// Least squares fit of log(error) against log(scale).
RateFit fit_rate(std::vector<std::pair<double, double>> points);

} // namespace stoconv
