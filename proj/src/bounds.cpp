#include "stoconv/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace stoconv {

namespace {

void require(bool ok, const std::string& field, const std::string& what)
{
    if (!ok) {
        throw std::invalid_argument("bound parameter '" + field + "' " + what);
    }
}

// ||(-A)^r||_{L(H)} for r <= 0, from the sup eigenvalue alone
double neg_power_norm(double sup_lambda, double r)
{
    return r == 0.0 ? 1.0 : std::pow(std::abs(sup_lambda), r);
}

} // namespace

void BoundInputs::validate() const
{
    require(p >= 1.0, "p", "must be at least 1");
    require(beta >= 0.0, "beta", "must be nonnegative");
    require(gamma >= 0.0 && gamma < 0.5 + beta, "gamma", "must lie in [0, 1/2 + beta)");
    require(eta >= 0.0 && eta < 0.5 + beta - gamma, "eta", "must lie in [0, 1/2 + beta - gamma)");
    require(rho >= 0.0 && rho < 0.5 + beta - gamma && rho < 0.5, "rho",
            "must lie in [0, 1/2 + beta - gamma) ∩ [0, 1/2)");
    require(horizon > 0.0 && std::isfinite(horizon), "horizon", "must be positive");
    require(hs_beta >= 0.0 && std::isfinite(hs_beta), "hs_beta", "must be finite and >= 0");
    require(hs_zero >= 0.0 && std::isfinite(hs_zero), "hs_zero", "must be finite and >= 0");
    require(sup_lambda < 0.0, "sup_lambda", "must be negative");
    require(mesh > 0.0, "mesh", "must be positive");
    require(c_chi >= 0.0, "c_chi", "must be nonnegative");
}

double moment_bound(const BoundInputs& in)
{
    in.validate();
    const double p = std::max(in.p, 2.0);
    const double gamma = std::max(in.gamma, in.beta);
    const double t = std::max(in.horizon, 1.0);
    const double b = in.hs_beta;
    const double lifted = 3.0 * p * b * std::pow(t, 1.5) / (1.0 + 2.0 * in.beta - 2.0 * gamma) *
                          (1.0 + 4.0 * p * p * b * b * std::pow(std::abs(in.sup_lambda), -2.0 * in.beta));
    return lifted * neg_power_norm(in.sup_lambda, std::min(0.0, in.gamma - in.beta));
}

double holder_constant(const BoundInputs& in)
{
    in.validate();
    const double p = std::max(in.p, 2.0);
    const double t = std::max(in.horizon, 1.0);
    const double b = in.hs_beta;
    const double spectral = std::max(std::pow(std::abs(in.sup_lambda), -2.0 * in.beta), 1.0);
    const double numerator = 3.0 * p * p * p * b * t * t * spectral * (1.0 + 8.0 * b * b) *
                             neg_power_norm(in.sup_lambda, std::min(0.0, in.gamma - in.beta));
    const double denominator =
        std::sqrt(1.0 + 2.0 * (in.beta - std::max(in.gamma, in.beta) - in.rho));
    return numerator / denominator;
}

double error_bound(const BoundInputs& in, double tail_hs)
{
    in.validate();
    require(in.c_chi >= 1.0, "c_chi", "must be at least 1");
    require(tail_hs >= 0.0, "tail_hs", "must be nonnegative");
    const double p = std::max(in.p, 2.0);
    const double t = std::max(in.horizon, 1.0);
    const double b = in.hs_beta;

    const double spatial_shift = std::max(0.0, in.gamma + in.eta - in.beta);
    const double spatial = p * std::pow(t, 0.5 + in.beta) /
                           std::sqrt(2.0 * (1.0 - 2.0 * spatial_shift)) *
                           neg_power_norm(in.sup_lambda, std::min(0.0, in.gamma + in.eta - in.beta)) *
                           tail_hs;

    const double temporal_shift = std::max(0.0, in.gamma - in.beta);
    const double temporal =
        8.0 * p * p * p * in.c_chi * std::pow(t, 1.5 + in.beta) /
        std::sqrt(1.0 - 2.0 * in.rho - 2.0 * temporal_shift) * b *
        neg_power_norm(in.sup_lambda, std::min(0.0, in.gamma - in.beta)) *
        (1.0 + std::pow(std::abs(in.sup_lambda), -2.0 * in.beta) * b * b) *
        std::pow(in.mesh, in.rho);
    return spatial + temporal;
}

double exp_moment_eps_max(double hs_zero, double horizon)
{
    const double b = std::max(hs_zero, 1.0);
    const double denom = 8.0 * b * b * std::max(horizon, 1.0);
    return 1.0 / (denom * denom);
}

double exp_moment_bound(double eps, double hs_zero, double horizon)
{
    if (!(eps >= 0.0)) {
        throw std::invalid_argument("exponential moment parameter eps must be nonnegative");
    }
    if (eps >= exp_moment_eps_max(hs_zero, horizon)) {
        return std::numeric_limits<double>::infinity();
    }
    const double k = 8.0 * hs_zero * std::max(hs_zero, 1.0) * std::max(horizon, 1.0);
    return 2.0 / (1.0 - eps * eps * k * k * k * k);
}

double spectral_tail_hs(const SpectralOperator& op, const NoiseOperator& noise,
                        std::size_t n_keep, std::size_t k_keep, double r)
{
    const auto kept = noise.projected(ProjectionIndex::prefix(n_keep, noise.h_modes()),
                                      ProjectionIndex::prefix(k_keep, noise.u_modes()));
    const NoiseOperator residual(noise.coeffs() - kept.coeffs(), noise.regularity());
    return hs_norm(residual, op, r);
}

double spectral_tail_reference(const SpectralOperator& op, const NoiseOperator& noise,
                               std::size_t n_keep, double beta, double eta)
{
    return std::pow(op.tail_infimum(n_keep), -eta) * hs_norm(noise, op, beta);
}

} // namespace stoconv
