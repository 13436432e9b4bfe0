#include "stoconv/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stoconv {

SpectralOperator::SpectralOperator(std::vector<double> eigenvalues)
    : eigenvalues_(std::move(eigenvalues))
{
    if (eigenvalues_.empty()) {
        throw std::invalid_argument("spectral operator needs at least one eigenvalue");
    }
    for (std::size_t n = 0; n < eigenvalues_.size(); ++n) {
        const double lambda = eigenvalues_[n];
        if (!std::isfinite(lambda) || lambda >= 0.0) {
            throw std::invalid_argument("eigenvalue " + std::to_string(n + 1) +
                                        " must be finite and strictly negative");
        }
        if (n > 0 && lambda > eigenvalues_[n - 1]) {
            throw std::invalid_argument("eigenvalues must be nonincreasing (mode " +
                                        std::to_string(n + 1) + ")");
        }
    }
}

SpectralOperator SpectralOperator::dirichlet_laplacian(std::size_t modes)
{
    std::vector<double> values(modes);
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    for (std::size_t n = 0; n < modes; ++n) {
        const double k = static_cast<double>(n + 1);
        values[n] = -pi2 * k * k;
    }
    return SpectralOperator(std::move(values));
}

double SpectralOperator::tail_infimum(std::size_t kept) const
{
    if (kept >= eigenvalues_.size()) {
        throw std::out_of_range("no eigenvalue beyond the kept modes");
    }
    return std::abs(eigenvalues_[kept]);
}

Eigen::VectorXd SpectralOperator::power_weights(double r) const
{
    Eigen::VectorXd w(static_cast<Eigen::Index>(size()));
    for (std::size_t n = 0; n < size(); ++n) {
        w[static_cast<Eigen::Index>(n)] = r == 0.0 ? 1.0 : std::pow(std::abs(eigenvalues_[n]), r);
    }
    return w;
}

ProjectionIndex::ProjectionIndex(std::vector<std::size_t> modes, std::size_t available)
    : modes_(std::move(modes)), mask_(available, 0)
{
    std::sort(modes_.begin(), modes_.end());
    modes_.erase(std::unique(modes_.begin(), modes_.end()), modes_.end());
    for (std::size_t m : modes_) {
        if (m >= available) {
            throw std::invalid_argument("projection mode " + std::to_string(m + 1) +
                                        " exceeds the " + std::to_string(available) +
                                        " available modes");
        }
        mask_[m] = 1;
    }
}

ProjectionIndex ProjectionIndex::prefix(std::size_t count, std::size_t available)
{
    if (count > available) {
        throw std::invalid_argument("projection keeps more modes than available");
    }
    std::vector<std::size_t> modes(count);
    for (std::size_t i = 0; i < count; ++i) {
        modes[i] = i;
    }
    return ProjectionIndex(std::move(modes), available);
}

bool ProjectionIndex::is_prefix() const
{
    return modes_.empty() || modes_.back() + 1 == modes_.size();
}

StateVector semigroup_apply(const SpectralOperator& op, double t, const StateVector& x)
{
    if (!(t >= 0.0)) {
        throw std::invalid_argument("semigroup time must be nonnegative");
    }
    if (static_cast<std::size_t>(x.size()) != op.size()) {
        throw std::invalid_argument("state dimension does not match the operator");
    }
    StateVector out(x.size());
    for (Eigen::Index n = 0; n < x.size(); ++n) {
        out[n] = std::exp(op.eigenvalue(static_cast<std::size_t>(n)) * t) * x[n];
    }
    return out;
}

double fractional_norm(const SpectralOperator& op, double r, const StateVector& x)
{
    if (static_cast<std::size_t>(x.size()) != op.size()) {
        throw std::invalid_argument("state dimension does not match the operator");
    }
    if (r == 0.0) {
        return x.norm();
    }
    return op.power_weights(r).cwiseProduct(x).norm();
}

StateVector project(const ProjectionIndex& index, const StateVector& x)
{
    if (static_cast<std::size_t>(x.size()) != index.available()) {
        throw std::invalid_argument("state dimension does not match the projection");
    }
    StateVector out = StateVector::Zero(x.size());
    for (std::size_t m : index.modes()) {
        out[static_cast<Eigen::Index>(m)] = x[static_cast<Eigen::Index>(m)];
    }
    return out;
}

double neg_power_operator_norm(const SpectralOperator& op, double r)
{
    if (r > 0.0) {
        throw std::invalid_argument("(-A)^r is unbounded for r > 0");
    }
    return r == 0.0 ? 1.0 : std::pow(std::abs(op.sup_eigenvalue()), r);
}

} // namespace stoconv
