#pragma once

#include "stoconv/noise.hpp"
#include "stoconv/spectral.hpp"

#include <cstddef>

namespace stoconv {

/// Parameters of the explicit constants. validate() enforces
///   gamma in [0, 1/2 + beta), eta in [0, 1/2 + beta - gamma),
///   rho in [0, 1/2 + beta - gamma) ∩ [0, 1/2), sup_lambda < 0,
/// and throws std::invalid_argument naming the offending field.
struct BoundInputs {
    double p = 2.0;
    double beta = 0.0;
    double gamma = 0.0;
    double eta = 0.0;
    double rho = 0.0;
    double horizon = 1.0;
    double c_chi = 1.0;
    double hs_beta = 0.0;   // ||B||_{HS(U, H_beta)}
    double hs_zero = 0.0;   // ||B||_{HS(U, H)}
    double sup_lambda = -1.0;
    double mesh = 1.0;

    void validate() const;
};

/// Upper bound for sup_t (E ||O_t||^p_{H_gamma})^{1/p}, uniform over grids and
/// projections: the moment constant at gamma' = max(gamma, beta) and order
/// max(p, 2), times ||(-A)^{min(0, gamma - beta)}||.
double moment_bound(const BoundInputs& in);

/// K with (E ||O_t - O_s||^p_{H_gamma})^{1/p} <= K (t - s)^rho.
double holder_constant(const BoundInputs& in);

/// Upper bound for sup_t (E ||O^scheme_t - P_K O_t||^p_{H_gamma})^{1/p} given
/// tail_hs = ||B - P_I B P̂_J||_{HS(U, H_{beta - eta})}. Requires c_chi >= 1.
double error_bound(const BoundInputs& in, double tail_hs);

/// Admissible range [0, eps_max) of the exponential moment bound.
double exp_moment_eps_max(double hs_zero, double horizon);

/// 2 / (1 - eps^2 [8 ||B|| max(||B||, 1) max(T, 1)]^4), or +inf when eps >= eps_max.
double exp_moment_bound(double eps, double hs_zero, double horizon);

/// ||B - P_I B P̂_J||_{HS(U, H_r)} for the first n_keep H-modes and k_keep U-modes.
double spectral_tail_hs(const SpectralOperator& op, const NoiseOperator& noise,
                        std::size_t n_keep, std::size_t k_keep, double r);

/// |lambda_{N+1}|^{-eta} ||B||_{HS(U, H_beta)}, the reference the tail must not exceed.
double spectral_tail_reference(const SpectralOperator& op, const NoiseOperator& noise,
                               std::size_t n_keep, double beta, double eta);

} // namespace stoconv
