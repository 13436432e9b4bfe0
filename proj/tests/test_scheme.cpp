#include "stoconv/scheme.hpp"
#include "stoconv/taming.hpp"

#include <doctest.h>

#include <cmath>

using namespace stoconv;

namespace {

SchemeSetup small_setup(std::size_t n_keep, std::size_t k_keep, double scale = 1.0)
{
    return SchemeSetup::prefix(SpectralOperator::dirichlet_laplacian(6),
                               NoiseOperator::diagonal(6, 6, scale, 2.0), n_keep, k_keep);
}

} // namespace

TEST_CASE("scheme step")
{
    const SpectralOperator op({-1.0, -2.0});
    SchemeState state{0.0, StateVector::Ones(2)};
    const StateVector xinc = StateVector::Constant(2, 0.7);

    const SchemeState killed = scheme_step(state, 0.5, xinc, 0.0, op);
    CHECK(killed.value.isApprox(semigroup_apply(op, 0.5, state.value)));
    CHECK(killed.t == 0.5);

    StateVector unit(2);
    unit << 0.6, 0.8;
    const SchemeState from_zero = scheme_step({0.0, StateVector::Zero(2)}, 0.25, unit, 1.0, op);
    CHECK(from_zero.value.isApprox(semigroup_apply(op, 0.25, unit / 2.0)));

    CHECK_THROWS(scheme_step(state, -0.1, xinc, 1.0, op));
    CHECK_THROWS(scheme_step(state, 0.1, xinc, 1.5, op));
}

TEST_CASE("truncation policies")
{
    RandomStream stream(1);
    const SchemeState state{0.0, StateVector::Constant(3, 100.0)};
    CHECK(chi_eval(PathTruncation(TruncationPolicy::identity(), 8, stream), state) == 1.0);
    for (int k = 0; k < 50; ++k) {
        CHECK(chi_eval(PathTruncation(TruncationPolicy::bernoulli(0.0), 8, stream), state) == 1.0);
        CHECK(chi_eval(PathTruncation(TruncationPolicy::bernoulli(1.0), 8, stream), state) == 0.0);
    }
    const PathTruncation huge(TruncationPolicy::norm_threshold(1e12, 0.0), 8, stream);
    CHECK(huge(state) == 1.0);
    const PathTruncation tiny(TruncationPolicy::norm_threshold(1.0, 0.0), 8, stream);
    CHECK(tiny(state) == 0.0);

    // bernoulli frequencies
    int dropped = 0;
    for (int k = 0; k < 20000; ++k) {
        dropped += PathTruncation(TruncationPolicy::bernoulli(0.3), 8, stream)(state) == 0.0;
    }
    CHECK(std::abs(dropped / 20000.0 - 0.3) < 5.0 * std::sqrt(0.3 * 0.7 / 20000.0));
    CHECK_THROWS(TruncationPolicy::bernoulli(1.5));
}

TEST_CASE("norm threshold on sampled paths")
{
    const auto setup = small_setup(6, 6);
    const auto grid = TimeGrid::uniform(1.0, 16);
    const CoupledSimulator sim(grid, setup, TruncationPolicy::norm_threshold(1e6, 0.0));
    RandomStream stream(4);
    for (int k = 0; k < 50; ++k) {
        const auto path = sim.simulate(stream);
        for (double chi : path.chi) {
            CHECK(chi == 1.0);
        }
    }
}

TEST_CASE("coupled trajectories")
{
    const auto grid = TimeGrid::uniform(1.0, 8);

    SUBCASE("zero noise gives zero paths")
    {
        const auto setup = small_setup(6, 6, 0.0);
        RandomStream stream(2);
        const auto path = simulate_coupled(grid, setup, TruncationPolicy::identity(), stream);
        for (std::size_t k = 0; k <= 8; ++k) {
            CHECK(path.scheme[k].isZero());
            CHECK(path.exact[k].isZero());
        }
    }

    SUBCASE("empty U-side projection silences only the scheme")
    {
        const auto setup = small_setup(6, 0);
        RandomStream stream(2);
        const auto path = simulate_coupled(grid, setup, TruncationPolicy::identity(), stream);
        CHECK(path.scheme.back().isZero());
        CHECK(path.exact.back().norm() > 0.0);
    }

    SUBCASE("seeded paths are bit-identical")
    {
        const auto setup = small_setup(4, 6);
        RandomStream a(77);
        RandomStream b(77);
        const auto pa = simulate_coupled(grid, setup, TruncationPolicy::identity(), a);
        const auto pb = simulate_coupled(grid, setup, TruncationPolicy::identity(), b);
        for (std::size_t k = 0; k <= 8; ++k) {
            CHECK(pa.scheme[k] == pb.scheme[k]);
            CHECK(pa.exact[k] == pb.exact[k]);
        }
        CHECK(pa.times.front() == 0.0);
        CHECK(pa.times.back() == 1.0);
    }

    SUBCASE("scheme path replays from its increments")
    {
        const auto setup = small_setup(6, 6);
        RandomStream stream(8);
        const auto path = simulate_coupled(grid, setup, TruncationPolicy::identity(), stream);
        SchemeState state{0.0, StateVector::Zero(6)};
        const NoiseOperator proj = setup.projected_noise();
        for (std::size_t m = 0; m < 8; ++m) {
            state = scheme_step(state, grid.step(m), proj.apply(path.increments[m]), 1.0, setup.op);
            CHECK(state.value.isApprox(path.scheme[m + 1], 1e-13));
        }
    }
}

TEST_CASE("smoothed increment covariance")
{
    const auto setup = small_setup(3, 2);
    const auto grid = TimeGrid::uniform(1.0, 4);
    const CoupledSimulator sim(grid, setup, TruncationPolicy::identity());
    const NoiseOperator proj = setup.projected_noise();
    const Eigen::MatrixXd expected = grid.step(0) * proj.coeffs() * proj.coeffs().transpose();
    RandomStream stream(12);
    const int draws = 20000;
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(6, 6);
    Eigen::MatrixXd fourth = Eigen::MatrixXd::Zero(6, 6);
    for (int k = 0; k < draws; ++k) {
        const auto path = sim.simulate(stream);
        const StateVector x = proj.apply(path.increments[0]);
        const Eigen::MatrixXd outer = x * x.transpose();
        second += outer;
        fourth += outer.cwiseAbs2();
    }
    second /= draws;
    fourth /= draws;
    for (Eigen::Index i = 0; i < 6; ++i) {
        for (Eigen::Index j = 0; j < 6; ++j) {
            const double se = std::sqrt(std::max(fourth(i, j) - second(i, j) * second(i, j), 0.0) / draws);
            CHECK(std::abs(second(i, j) - expected(i, j)) <= 5.0 * se + 1e-15);
        }
    }
}

TEST_CASE("truncation defect")
{
    for (std::size_t m : {2, 16, 1024}) {
        const auto grid = TimeGrid::uniform(2.0, m);
        CHECK(truncation_defect(TruncationPolicy::identity(), grid, 2.0, 0.25, 10, 1) == 0.0);
        const double c = 0.5;
        const double q = std::min(1.0, c * std::pow(2.0 / static_cast<double>(m), 0.5));
        CHECK(truncation_defect(TruncationPolicy::bernoulli(q), grid, 2.0, 0.25, 10, 1) ==
              doctest::Approx(c * std::sqrt(2.0)).epsilon(1e-12));
    }
    const auto grid = TimeGrid::uniform(1.0, 8);
    CHECK_THROWS(truncation_defect(TruncationPolicy::norm_threshold(1.0, 0.0), grid, 2.0, 0.25, 10, 1));
    const auto setup = small_setup(6, 6);
    CHECK(truncation_defect(TruncationPolicy::norm_threshold(1e9, 0.0), grid, 2.0, 0.25, 100, 1, &setup) == 0.0);

    CHECK(truncation_constant(0.0, 2.0, 0.25, 1.0) == 1.0);
    CHECK(truncation_constant(16.0, 2.0, 0.25, 1.0) == doctest::Approx(4.0));
}

TEST_CASE("mild Itô representation gap shrinks with substeps")
{
    const auto setup = small_setup(4, 4);
    const auto grid = TimeGrid::uniform(1.0, 4);
    const double coarse =
        ito_representation_gap(setup, grid, TruncationPolicy::identity(), 8, 400, 3).value;
    const double fine =
        ito_representation_gap(setup, grid, TruncationPolicy::identity(), 128, 400, 3).value;
    CHECK(fine < coarse);
    CHECK(fine < 0.05);
}
