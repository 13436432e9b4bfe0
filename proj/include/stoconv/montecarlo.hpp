#pragma once

#include "stoconv/rng.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>

namespace stoconv {

/// Monte Carlo estimate with its standard error.
struct McEstimate {
    double value = 0.0;
    double std_error = 0.0; // NaN when replications < 2
    std::size_t replications = 0;
    std::uint64_t seed = 0;
};

using PathFunction = std::function<Eigen::VectorXd(std::size_t path, RandomStream& stream)>;

/// Evaluates `fn` on paths 0..paths-1, path i seeded with derive_seed(seed, i),
/// and stacks the returned rows in path order. The result does not depend on
/// `threads`. Every row must have the same length.
Eigen::MatrixXd run_paths(std::size_t paths, std::uint64_t seed, std::size_t threads,
                          const PathFunction& fn);

} // namespace stoconv
