#include "stoconv/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stoconv {

TimeGrid::TimeGrid(double horizon, std::size_t steps, std::vector<double> nodes)
    : horizon_(horizon), steps_(steps), nodes_(std::move(nodes))
{
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t steps)
{
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("time horizon must be positive and finite");
    }
    if (steps == 0) {
        throw std::invalid_argument("uniform grid needs at least one step");
    }
    return TimeGrid(horizon, steps, {});
}

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes)
{
    if (nodes.size() < 2) {
        throw std::invalid_argument("grid needs at least the nodes 0 and T");
    }
    if (nodes.front() != 0.0) {
        throw std::invalid_argument("grid must start at 0");
    }
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (!(nodes[i] > nodes[i - 1]) || !std::isfinite(nodes[i])) {
            throw std::invalid_argument("grid nodes must be finite and strictly increasing");
        }
    }
    const double horizon = nodes.back();
    const std::size_t steps = nodes.size() - 1;
    return TimeGrid(horizon, steps, std::move(nodes));
}

double TimeGrid::node(std::size_t m) const
{
    if (m > steps_) {
        throw std::out_of_range("grid node index out of range");
    }
    if (!nodes_.empty()) {
        return nodes_[m];
    }
    if (m == steps_) {
        return horizon_;
    }
    return static_cast<double>(m) * horizon_ / static_cast<double>(steps_);
}

std::vector<double> TimeGrid::nodes() const
{
    std::vector<double> out(steps_ + 1);
    for (std::size_t m = 0; m <= steps_; ++m) {
        out[m] = node(m);
    }
    return out;
}

double TimeGrid::step(std::size_t m) const
{
    if (m >= steps_) {
        throw std::out_of_range("grid step index out of range");
    }
    return node(m + 1) - node(m);
}

double TimeGrid::mesh() const
{
    if (nodes_.empty()) {
        return horizon_ / static_cast<double>(steps_);
    }
    double widest = 0.0;
    for (std::size_t m = 0; m < steps_; ++m) {
        widest = std::max(widest, step(m));
    }
    return widest;
}

std::size_t TimeGrid::floor_index(double t) const
{
    if (!(t >= 0.0) || t > horizon_) {
        throw std::invalid_argument("time outside [0, T]");
    }
    if (t == 0.0) {
        return 0;
    }
    if (!nodes_.empty()) {
        // first node >= t, then step back one
        const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), t);
        return static_cast<std::size_t>(it - nodes_.begin()) - 1;
    }
    const double scaled = t * static_cast<double>(steps_) / horizon_;
    auto m = static_cast<std::size_t>(std::max(0.0, std::ceil(scaled) - 1.0));
    m = std::min(m, steps_ - 1);
    while (m + 1 < steps_ && node(m + 1) < t) {
        ++m;
    }
    while (m > 0 && node(m) >= t) {
        --m;
    }
    return m;
}

} // namespace stoconv
