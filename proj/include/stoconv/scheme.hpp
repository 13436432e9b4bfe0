#pragma once

#include "stoconv/montecarlo.hpp"
#include "stoconv/noise.hpp"
#include "stoconv/rng.hpp"
#include "stoconv/spectral.hpp"
#include "stoconv/time_grid.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace stoconv {

/// Operator and full noise together with the H-side / U-side index sets (I, J) of one
/// fully discrete approximation.
struct SchemeSetup {
    SpectralOperator op;
    NoiseOperator noise;
    ProjectionIndex h_index;
    ProjectionIndex u_index;

    SchemeSetup(SpectralOperator op, NoiseOperator noise, ProjectionIndex h_index,
                ProjectionIndex u_index);

    /// I = first n_keep H-modes, J = first k_keep U-modes.
    static SchemeSetup prefix(SpectralOperator op, NoiseOperator noise, std::size_t n_keep,
                              std::size_t k_keep);

    /// P_I B P̂_J.
    NoiseOperator projected_noise() const { return noise.projected(h_index, u_index); }
};

enum class TruncationKind { identity, bernoulli, norm_threshold };

/// Truncation process chi with values in [0, 1].
///  - identity: chi = 1;
///  - bernoulli(q): one draw at time 0, chi = 0 with probability q, else 1;
///  - norm_threshold(c, e): chi_{t_m} = 1{ ||O_{t_m}||_H <= c M^e }.
struct TruncationPolicy {
    TruncationKind kind = TruncationKind::identity;
    double q = 0.0;
    double threshold = 0.0;
    double exponent = 0.0;

    static TruncationPolicy identity() { return {}; }
    static TruncationPolicy bernoulli(double q);
    static TruncationPolicy norm_threshold(double threshold, double exponent);
};

struct SchemeState {
    double t = 0.0;
    StateVector value;
};

/// One path's realization of a truncation policy on a grid with M steps.
class PathTruncation {
public:
    PathTruncation(const TruncationPolicy& policy, std::size_t steps, RandomStream& stream);

    double operator()(const SchemeState& state) const;

private:
    TruncationKind kind_;
    double fixed_ = 1.0;
    double radius_ = 0.0;
};

/// chi at the given state for a realized path policy.
inline double chi_eval(const PathTruncation& realized, const SchemeState& state)
{
    return realized(state);
}

/// e^{hA}(O + chi * xinc / (1 + ||xinc||_H^2)). With h = t - t_m and xinc the
/// smoothed increment accumulated up to t, this is also the off-grid value.
SchemeState scheme_step(const SchemeState& state, double h, const StateVector& xinc, double chi,
                        const SpectralOperator& op);

/// Scheme path and exact convolution driven by the same Wiener increments.
struct CoupledTrajectory {
    std::vector<double> times;
    std::vector<StateVector> scheme;
    std::vector<StateVector> exact;
    std::vector<double> chi;              // chi at t_0 .. t_{M-1}
    std::vector<NoiseVector> increments;  // ΔW over each step, all K_max modes
};

/// Precomputes the per-step joint laws once and simulates any number of paths.
class CoupledSimulator {
public:
    CoupledSimulator(TimeGrid grid, SchemeSetup setup, TruncationPolicy policy);

    CoupledTrajectory simulate(RandomStream& stream) const;

    /// Scheme-only path, skipping the exact convolution.
    std::vector<StateVector> simulate_scheme(RandomStream& stream,
                                             std::vector<double>* chi_out = nullptr) const;

    const TimeGrid& grid() const { return grid_; }
    const SchemeSetup& setup() const { return setup_; }
    const NoiseOperator& projected_noise() const { return projected_; }

private:
    struct StepLaw {
        IncrementCovariance cov;
        Eigen::VectorXd decay; // e^{lambda_n h}
    };
    const StepLaw& law_for(std::size_t m) const;

    TimeGrid grid_;
    SchemeSetup setup_;
    TruncationPolicy policy_;
    NoiseOperator projected_;
    std::vector<StepLaw> laws_;
    std::vector<std::size_t> law_of_step_;
};

CoupledTrajectory simulate_coupled(const TimeGrid& grid, const SchemeSetup& setup,
                                   const TruncationPolicy& policy, RandomStream& stream);

/// sup over grid nodes of E|chi - 1|^p * M^{p rho}. Exact for identity and
/// bernoulli; Monte Carlo over `trials` scheme paths for norm_threshold, which
/// needs `setup`.
double truncation_defect(const TruncationPolicy& policy, const TimeGrid& grid, double p,
                         double rho, std::size_t trials, std::uint64_t seed,
                         const SchemeSetup* setup = nullptr);

/// Smallest C >= 1 with ||chi - 1||_{L^p} <= C |theta|^rho given a defect value.
double truncation_constant(double defect, double p, double rho, double horizon);

/// Grid-node sup of the L^2(P; H) gap between the scheme and its mild Itô
/// representation, with the stochastic and drift integrals discretized by
/// `substeps` left-point substeps per grid step on the same noise.
McEstimate ito_representation_gap(const SchemeSetup& setup, const TimeGrid& grid,
                                  const TruncationPolicy& policy, std::size_t substeps,
                                  std::size_t paths, std::uint64_t seed, std::size_t threads = 1);

} // namespace stoconv
