#include "stoconv/time_grid.hpp"

#include <doctest.h>

#include <stdexcept>
#include <vector>

using namespace stoconv;

TEST_CASE("uniform grids")
{
    CHECK(TimeGrid::uniform(1.0, 2).nodes() == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(TimeGrid::uniform(2.0, 4).nodes() == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
    CHECK(TimeGrid::uniform(1.0, 1).nodes() == std::vector<double>{0.0, 1.0});
    CHECK(TimeGrid::uniform(1.0, 4).mesh() == 0.25);

    // last node is T exactly even when m T / M rounds
    const auto g = TimeGrid::uniform(0.7, 3);
    CHECK(g.node(3) == 0.7);
    CHECK(g.is_uniform());
    CHECK_THROWS(TimeGrid::uniform(0.0, 3));
    CHECK_THROWS(TimeGrid::uniform(1.0, 0));
}

TEST_CASE("explicit grids and mesh")
{
    CHECK(TimeGrid::from_nodes({0.0, 0.25, 1.0}).mesh() == 0.75);
    CHECK(TimeGrid::from_nodes({0.0, 3.0}).mesh() == 3.0);
    CHECK_THROWS(TimeGrid::from_nodes({0.0, 0.5, 0.5, 1.0}));
    CHECK_THROWS(TimeGrid::from_nodes({0.1, 1.0}));
    CHECK_THROWS(TimeGrid::from_nodes({0.0}));
}

TEST_CASE("floor node uses the half-open convention")
{
    const auto g = TimeGrid::from_nodes({0.0, 0.5, 1.0});
    CHECK(g.floor_node(0.75) == 0.5);
    CHECK(g.floor_node(0.0) == 0.0);
    CHECK(g.floor_node(0.5) == 0.0);
    CHECK(g.floor_node(1.0) == 0.5);
    CHECK_THROWS_AS(g.floor_index(1.5), std::invalid_argument);
    CHECK_THROWS_AS(g.floor_index(-0.1), std::invalid_argument);

    const auto u = TimeGrid::uniform(1.0, 4);
    CHECK(u.floor_index(0.25) == 0);
    CHECK(u.floor_index(0.2500001) == 1);
}
