#include "stoconv/oracles.hpp"

#include "stoconv/montecarlo.hpp"
#include "stoconv/rng.hpp"
#include "stoconv/taming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace stoconv {

namespace {

using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

LongVector psi_long(const LongVector& v)
{
    return v / (1.0L + v.squaredNorm());
}

StateVector random_direction(RandomStream& stream, std::size_t dim)
{
    StateVector v(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = stream.normal();
    }
    return v;
}

// z with uniformly distributed norm in (0, max_norm]
StateVector random_point(RandomStream& stream, std::size_t dim, double max_norm)
{
    StateVector z = random_direction(stream, dim);
    const double radius = max_norm * (1.0 - stream.uniform());
    return z * (radius / z.norm());
}

CovarianceCheck compare_second_moments(const Eigen::MatrixXd& samples,
                                       const Eigen::MatrixXd& analytic)
{
    const Eigen::Index n = samples.rows();
    const Eigen::Index d = samples.cols();
    CovarianceCheck check;
    check.samples = static_cast<std::size_t>(n);
    for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = a; b < d; ++b) {
            const Eigen::ArrayXd prod = samples.col(a).array() * samples.col(b).array();
            const double mean = prod.mean();
            const double sd = std::sqrt((prod - mean).square().sum() / static_cast<double>(n - 1));
            const double se = sd / std::sqrt(static_cast<double>(n));
            const double diff = std::abs(mean - analytic(a, b));
            if (se == 0.0) {
                if (diff != 0.0 && diff > 1e-14 * std::abs(analytic(a, b))) {
                    check.max_z_score = std::numeric_limits<double>::infinity();
                }
                continue;
            }
            ++check.entries;
            check.max_z_score = std::max(check.max_z_score, diff / se);
        }
    }
    return check;
}

} // namespace

OracleResult psi_prime_fd_oracle(const FirstDerivative& derivative, std::size_t trials,
                                 std::uint64_t seed, std::size_t dim, double step,
                                 double max_norm, double tolerance)
{
    RandomStream stream(seed);
    double worst = 0.0;
    const long double h = step;
    for (std::size_t k = 0; k < trials; ++k) {
        const StateVector z = random_point(stream, dim, max_norm);
        const StateVector u = random_direction(stream, dim);
        const LongVector zl = z.cast<long double>();
        const LongVector ul = u.cast<long double>();
        const LongVector fd = (psi_long(zl + h * ul) - psi_long(zl - h * ul)) / (2.0L * h);
        const StateVector analytic = derivative(z, u);
        const double err = (analytic - fd.cast<double>()).norm() / fd.cast<double>().norm();
        worst = std::max(worst, std::isnan(err) ? std::numeric_limits<double>::infinity() : err);
    }
    return OracleResult{"psi_prime_finite_difference", worst, tolerance, worst <= tolerance};
}

OracleResult psi_double_prime_fd_oracle(const SecondDerivative& derivative, std::size_t trials,
                                        std::uint64_t seed, std::size_t dim, double step,
                                        double max_norm, double tolerance)
{
    RandomStream stream(seed);
    double worst = 0.0;
    const long double h = step;
    for (std::size_t k = 0; k < trials; ++k) {
        const StateVector z = random_point(stream, dim, max_norm);
        const StateVector u = random_direction(stream, dim);
        const StateVector v = random_direction(stream, dim);
        const LongVector zl = z.cast<long double>();
        const LongVector ul = h * u.cast<long double>();
        const LongVector vl = h * v.cast<long double>();
        const LongVector fd = (psi_long(zl + ul + vl) - psi_long(zl + ul - vl) -
                               psi_long(zl - ul + vl) + psi_long(zl - ul - vl)) /
                              (4.0L * h * h);
        const StateVector analytic = derivative(z, u, v);
        const double err = (analytic - fd.cast<double>()).norm() / fd.cast<double>().norm();
        worst = std::max(worst, std::isnan(err) ? std::numeric_limits<double>::infinity() : err);
    }
    return OracleResult{"psi_double_prime_finite_difference", worst, tolerance, worst <= tolerance};
}

OracleResult ito_drift_identity_oracle(std::size_t trials, std::uint64_t seed, std::size_t h_dim,
                                       std::size_t u_dim, double tolerance)
{
    RandomStream stream(seed);
    double worst = 0.0;
    for (std::size_t k = 0; k < trials; ++k) {
        Eigen::MatrixXd b(static_cast<Eigen::Index>(h_dim), static_cast<Eigen::Index>(u_dim));
        for (Eigen::Index i = 0; i < b.size(); ++i) {
            b.data()[i] = stream.normal();
        }
        const NoiseOperator noise(b);
        const StateVector z = random_point(stream, h_dim, 3.0);
        StateVector half_trace = StateVector::Zero(static_cast<Eigen::Index>(h_dim));
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            const StateVector bu = b.col(j);
            half_trace += 0.5 * psi_double_prime_apply(z, bu, bu);
        }
        const StateVector drift = ito_drift(z, noise);
        worst = std::max(worst, (drift - half_trace).norm() / drift.norm());
    }
    return OracleResult{"ito_drift_half_trace_identity", worst, tolerance, worst <= tolerance};
}

CovarianceCheck covariance_quadrature_check(const SpectralOperator& op, const NoiseOperator& noise,
                                            double step, std::size_t substeps, std::size_t paths,
                                            std::uint64_t seed)
{
    const auto n_h = static_cast<Eigen::Index>(noise.h_modes());
    const Eigen::MatrixXd samples =
        run_paths(paths, seed, 1, [&](std::size_t, RandomStream& stream) {
            const CoupledIncrement inc =
                brute_force_convolution_oracle(op, noise, step, substeps, stream);
            Eigen::VectorXd row(n_h + inc.dw.size());
            row << inc.y, inc.dw;
            return row;
        });
    return compare_second_moments(samples, IncrementCovariance::build(op, noise, step).assembled());
}

CovarianceCheck sampler_covariance_check(const SpectralOperator& op, const NoiseOperator& noise,
                                         double step, std::size_t draws, std::uint64_t seed)
{
    const IncrementCovariance cov = IncrementCovariance::build(op, noise, step);
    const auto n_h = static_cast<Eigen::Index>(noise.h_modes());
    const Eigen::MatrixXd samples =
        run_paths(draws, seed, 1, [&](std::size_t, RandomStream& stream) {
            const CoupledIncrement inc = sample_coupled_increment(cov, stream);
            Eigen::VectorXd row(n_h + inc.dw.size());
            row << inc.y, inc.dw;
            return row;
        });
    return compare_second_moments(samples, cov.assembled());
}

} // namespace stoconv
