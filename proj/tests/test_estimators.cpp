#include "stoconv/estimators.hpp"
#include "stoconv/montecarlo.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace stoconv;

namespace {

std::vector<CoupledTrajectory> batch(double scale, std::size_t paths, std::uint64_t seed)
{
    const auto setup = SchemeSetup::prefix(SpectralOperator::dirichlet_laplacian(4),
                                           NoiseOperator::diagonal(4, 4, scale, 2.0), 2, 4);
    const CoupledSimulator sim(TimeGrid::uniform(1.0, 8), setup, TruncationPolicy::identity());
    std::vector<CoupledTrajectory> out;
    RandomStream stream(seed);
    for (std::size_t i = 0; i < paths; ++i) {
        out.push_back(sim.simulate(stream));
    }
    return out;
}

} // namespace

TEST_CASE("zero-noise batches")
{
    const auto zero = batch(0.0, 20, 1);
    const auto op = SpectralOperator::dirichlet_laplacian(4);
    CHECK(lp_error_sup(zero, op, 2.0, 0.0).value == 0.0);
    CHECK(empirical_moment(zero, op, 2.0, 0.25).value == 0.0);
    CHECK(empirical_exp_moment(zero, 0.3).estimate.value == 1.0);
    const std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 3}, {2, 8}};
    CHECK(holder_quotient(zero, op, 2.0, 0.0, 0.25, pairs).value == 0.0);

    const auto noisy = batch(1.0, 20, 2);
    CHECK(empirical_exp_moment(noisy, 0.0).estimate.value == 1.0);
    CHECK(lp_error_sup(noisy, op, 2.0, 0.0).value > 0.0);

    const std::vector<CoupledTrajectory> empty;
    CHECK_THROWS(lp_error_sup(empty, op, 2.0, 0.0));
    CHECK_THROWS(empirical_exp_moment(empty, 0.1));
}

TEST_CASE("sample reductions")
{
    Eigen::MatrixXd norms(4, 2);
    norms << 1.0, 2.0,
             1.0, 2.0,
             3.0, 2.0,
             3.0, 2.0;
    const McEstimate lp = sup_node_lp(norms, 2.0);
    CHECK(lp.value == doctest::Approx(std::sqrt(5.0)));
    CHECK(lp.replications == 4);
    CHECK(lp.std_error > 0.0);

    // log-sum-exp stays finite where exp overflows
    Eigen::MatrixXd exponents(2, 1);
    exponents << 800.0, 800.0;
    CHECK(std::isinf(sup_node_exp_mean(exponents).estimate.value));
    exponents << 1.0, 3.0;
    CHECK(sup_node_exp_mean(exponents).estimate.value ==
          doctest::Approx((std::exp(1.0) + std::exp(3.0)) / 2.0));

    Eigen::MatrixXd heavy = Eigen::MatrixXd::Zero(2000, 1);
    heavy(0, 0) = 20.0;
    CHECK(sup_node_exp_mean(heavy).heavy_tail);
    CHECK_FALSE(sup_node_exp_mean(Eigen::MatrixXd::Zero(2000, 1)).heavy_tail);

    const std::vector<double> gaps{0.25, 1.0};
    const McEstimate hq = max_holder_quotient(norms, gaps, 2.0, 0.5);
    CHECK(hq.value == doctest::Approx(std::sqrt(5.0) / 0.5));

    Eigen::MatrixXd single(1, 1);
    single << 2.0;
    CHECK(std::isnan(sup_node_lp(single, 2.0).std_error));
}

TEST_CASE("rate fits")
{
    std::vector<std::pair<double, double>> power;
    for (double m : {8.0, 16.0, 32.0, 64.0}) {
        power.emplace_back(m, 3.0 * std::pow(m, -0.5));
    }
    const RateFit fit = fit_rate(power);
    CHECK(fit.slope == doctest::Approx(-0.5));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK(std::exp(fit.intercept) == doctest::Approx(3.0));

    const RateFit flat = fit_rate({{1.0, 2.0}, {2.0, 2.0}, {4.0, 2.0}});
    CHECK(flat.slope == 0.0);

    CHECK_THROWS(fit_rate({{1.0, 2.0}, {2.0, 1.0}}));
    CHECK_THROWS(fit_rate({{1.0, 2.0}, {2.0, 0.0}, {4.0, 1.0}}));
    CHECK_THROWS(fit_rate({{1.0, 2.0}, {1.0, 1.0}, {4.0, 1.0}}));
}

TEST_CASE("run_paths is independent of the thread count")
{
    auto fn = [](std::size_t i, RandomStream& s) {
        Eigen::VectorXd row(2);
        row << static_cast<double>(i), s.normal();
        return row;
    };
    const Eigen::MatrixXd one = run_paths(300, 5, 1, fn);
    const Eigen::MatrixXd four = run_paths(300, 5, 4, fn);
    CHECK(one == four);
    CHECK(one(299, 0) == 299.0);
    CHECK_THROWS(run_paths(10, 5, 2, [](std::size_t i, RandomStream&) -> Eigen::VectorXd {
        if (i == 7) {
            throw std::runtime_error("boom");
        }
        return Eigen::VectorXd::Zero(1);
    }));
}
