#include "stoconv/noise.hpp"
#include "stoconv/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace stoconv;

TEST_CASE("Hilbert-Schmidt norms")
{
    const auto lap = SpectralOperator::dirichlet_laplacian(64);
    const auto diag = NoiseOperator::diagonal(64, 64, 1.0, 2.0);
    double partial = 0.0;
    for (int n = 1; n <= 64; ++n) {
        partial += std::pow(n, -4.0);
    }
    CHECK(hs_norm(diag, lap, 0.0) == doctest::Approx(std::sqrt(partial)).epsilon(1e-14));
    CHECK(hs_norm(diag, lap, 0.0) < std::sqrt(std::pow(std::numbers::pi, 4) / 90.0));

    const NoiseOperator zero(Eigen::MatrixXd::Zero(3, 2));
    CHECK(hs_norm(zero, SpectralOperator({-1.0, -2.0, -3.0}), 0.5) == 0.0);

    const NoiseOperator single(Eigen::MatrixXd::Constant(1, 1, 2.0));
    CHECK(hs_norm(single, SpectralOperator({-4.0}), 0.5) == doctest::Approx(4.0));
}

TEST_CASE("damped integral")
{
    CHECK(damped_integral(0.0, 0.3) == 0.3);
    CHECK(damped_integral(-2.0, 0.5) == doctest::Approx((1.0 - std::exp(-1.0)) / 2.0));
    CHECK(damped_integral(-1e-12, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("increment covariance blocks")
{
    const SpectralOperator op({-1.0, -4.0});
    Eigen::MatrixXd b(2, 2);
    b << 1.0, 0.2, -0.3, 0.7;
    const NoiseOperator noise(b);

    // small-step consistency: cov_YY / h -> B B^T and cov_YW / h -> B at first order
    double previous_yy = 0.0;
    double previous_yw = 0.0;
    for (double h : {1e-2, 1e-3, 1e-4}) {
        const auto cov = IncrementCovariance::build(op, noise, h);
        const double err_yy = (cov.cov_yy() / h - b * b.transpose()).cwiseAbs().maxCoeff();
        const double err_yw = (cov.cov_yw() / h - b).cwiseAbs().maxCoeff();
        CHECK(err_yy < 10.0 * h);
        CHECK(err_yw < 10.0 * h);
        if (previous_yy > 0.0) {
            CHECK(err_yy / previous_yy == doctest::Approx(0.1).epsilon(0.05));
            CHECK(err_yw / previous_yw == doctest::Approx(0.1).epsilon(0.05));
        }
        previous_yy = err_yy;
        previous_yw = err_yw;
        CHECK(cov.cov_ww().isApprox(h * Eigen::MatrixXd::Identity(2, 2)));
        CHECK(cov.assembled().isApprox(cov.assembled().transpose()));
        CHECK_FALSE(cov.jittered());
    }
}

TEST_CASE("coupled sampler edge cases")
{
    const SpectralOperator op({-1.0, -2.0});
    const NoiseOperator zero(Eigen::MatrixXd::Zero(2, 3));
    const auto cov = IncrementCovariance::build(op, zero, 0.25);
    RandomStream s1(3);
    RandomStream s2(3);
    for (int k = 0; k < 10; ++k) {
        const auto a = sample_coupled_increment(cov, s1);
        const auto c = sample_coupled_increment(cov, s2);
        CHECK(a.y.isZero());
        CHECK(a.dw.size() == 3);
        CHECK(a.dw == c.dw);
    }
}

TEST_CASE("quadrature oracle")
{
    const SpectralOperator op({-1.0, -3.0});
    Eigen::MatrixXd b(2, 2);
    b << 1.0, 0.4, 0.0, 0.5;
    const NoiseOperator noise(b);
    RandomStream stream(9);
    const auto one = brute_force_convolution_oracle(op, noise, 0.5, 1, stream);
    const StateVector expected = (Eigen::Array2d(std::exp(-0.5), std::exp(-1.5)) *
                                  (b * one.dw).array()).matrix();
    CHECK(one.y.isApprox(expected));

    const NoiseOperator zero(Eigen::MatrixXd::Zero(2, 2));
    CHECK(brute_force_convolution_oracle(op, zero, 0.5, 16, stream).y.isZero());
}

TEST_CASE("covariance oracles at desk scale")
{
    const SpectralOperator op({-1.0, -4.0});
    Eigen::MatrixXd b(2, 2);
    b << 1.0, 0.3, 0.2, 0.5;
    const NoiseOperator noise(b);
    CHECK(sampler_covariance_check(op, noise, 0.5, 20000, 21).max_z_score < 5.0);
    CHECK(covariance_quadrature_check(op, noise, 0.5, 256, 2000, 22).max_z_score < 5.0);
}

TEST_CASE("exact marginal variance of a diagonal convolution")
{
    const auto op = SpectralOperator::dirichlet_laplacian(3);
    const auto noise = NoiseOperator::diagonal(3, 3, 1.0, 1.0);
    const double t = 0.3;
    const Eigen::VectorXd var = convolution_variance(op, noise, t);
    for (std::size_t n = 0; n < 3; ++n) {
        const double lambda = op.eigenvalue(n);
        const double bn = 1.0 / static_cast<double>(n + 1);
        CHECK(var[static_cast<Eigen::Index>(n)] ==
              doctest::Approx(bn * bn * (1.0 - std::exp(2.0 * lambda * t)) / (-2.0 * lambda)));
    }

    // one exact step of length t, compared at 5 standard errors
    const auto cov = IncrementCovariance::build(op, noise, t);
    RandomStream stream(31);
    const int draws = 20000;
    Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(3);
    Eigen::VectorXd sum_4 = Eigen::VectorXd::Zero(3);
    for (int k = 0; k < draws; ++k) {
        const auto inc = sample_coupled_increment(cov, stream);
        sum_sq += inc.y.cwiseAbs2();
        sum_4 += inc.y.array().pow(4).matrix();
    }
    for (Eigen::Index n = 0; n < 3; ++n) {
        const double mean = sum_sq[n] / draws;
        const double se = std::sqrt((sum_4[n] / draws - mean * mean) / draws);
        CHECK(std::abs(mean - var[n]) < 5.0 * se);
    }
}
