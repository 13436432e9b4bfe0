#pragma once

#include "stoconv/noise.hpp"
#include "stoconv/spectral.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace stoconv {

/// Outcome of one validation oracle: the worst measured discrepancy and the
/// tolerance it was held to.
struct OracleResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

using FirstDerivative = std::function<StateVector(const StateVector&, const StateVector&)>;
using SecondDerivative =
    std::function<StateVector(const StateVector&, const StateVector&, const StateVector&)>;

/// Worst relative error of `derivative` against the central difference
/// (psi(z + h u) - psi(z - h u)) / 2h over random (z, u) with ||z|| <= max_norm.
/// psi is evaluated in extended precision.
OracleResult psi_prime_fd_oracle(const FirstDerivative& derivative, std::size_t trials,
                                 std::uint64_t seed, std::size_t dim = 6, double step = 1e-5,
                                 double max_norm = 10.0, double tolerance = 1e-6);

/// Same for the second derivative against the mixed central difference
/// [psi(z+hu+hv) - psi(z+hu-hv) - psi(z-hu+hv) + psi(z-hu-hv)] / 4h^2.
OracleResult psi_double_prime_fd_oracle(const SecondDerivative& derivative, std::size_t trials,
                                        std::uint64_t seed, std::size_t dim = 6,
                                        double step = 1e-5, double max_norm = 10.0,
                                        double tolerance = 1e-6);

/// Worst relative gap between ito_drift(z, B) and (1/2) sum_j psi''(z)(B u_j, B u_j)
/// over random dense B and z.
OracleResult ito_drift_identity_oracle(std::size_t trials, std::uint64_t seed,
                                       std::size_t h_dim = 5, std::size_t u_dim = 4,
                                       double tolerance = 1e-12);

/// Entrywise comparison of an empirical (Y, ΔW) second-moment matrix against
/// the analytic block covariance; measured value is the largest |z-score|.
struct CovarianceCheck {
    double max_z_score = 0.0;
    std::size_t entries = 0;
    std::size_t samples = 0;
};

/// Samples drawn with the left-point quadrature oracle.
CovarianceCheck covariance_quadrature_check(const SpectralOperator& op, const NoiseOperator& noise,
                                            double step, std::size_t substeps, std::size_t paths,
                                            std::uint64_t seed);

/// Samples drawn with the Cholesky sampler.
CovarianceCheck sampler_covariance_check(const SpectralOperator& op, const NoiseOperator& noise,
                                         double step, std::size_t draws, std::uint64_t seed);

} // namespace stoconv
