#pragma once

#include <cstddef>
#include <vector>

namespace stoconv {

/// Partition {0 = t_0 < t_1 < ... < t_M = T} of [0, T].
///
/// Uniform grids keep only (T, M) and evaluate t_m = m T / M on demand, so the
/// node set never accumulates rounding from repeated additions.
class TimeGrid {
public:
    static TimeGrid uniform(double horizon, std::size_t steps);
    static TimeGrid from_nodes(std::vector<double> nodes);

    double horizon() const { return horizon_; }
    /// Number of intervals M.
    std::size_t steps() const { return steps_; }
    bool is_uniform() const { return nodes_.empty(); }

    double node(std::size_t m) const;
    std::vector<double> nodes() const;
    /// t_{m+1} - t_m.
    double step(std::size_t m) const;
    /// Largest gap between consecutive nodes.
    double mesh() const;

    /// Index of max([0, t) ∩ nodes), and 0 at t = 0. Throws outside [0, T].
    std::size_t floor_index(double t) const;
    double floor_node(double t) const { return node(floor_index(t)); }

private:
    TimeGrid(double horizon, std::size_t steps, std::vector<double> nodes);

    double horizon_;
    std::size_t steps_;
    std::vector<double> nodes_; // empty for uniform grids
};

} // namespace stoconv
