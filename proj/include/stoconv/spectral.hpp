#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace stoconv {

/// Coefficients x_n = <h_n, x>_H of an element of H, truncated to N_max modes.
/// Mode n (1-based in the usual notation) is stored at index n - 1.
using StateVector = Eigen::VectorXd;

/// Coefficients y_j = <u_j, y>_U of an element of U, truncated to K_max modes.
using NoiseVector = Eigen::VectorXd;

/// Diagonal generator A h_n = lambda_n h_n with strictly negative, nonincreasing
/// eigenvalues. Immutable after construction.
class SpectralOperator {
public:
    explicit SpectralOperator(std::vector<double> eigenvalues);

    /// lambda_n = -pi^2 n^2, the Dirichlet Laplacian on (0, 1).
    static SpectralOperator dirichlet_laplacian(std::size_t modes);

    std::size_t size() const { return eigenvalues_.size(); }
    double eigenvalue(std::size_t index) const { return eigenvalues_[index]; }
    std::span<const double> eigenvalues() const { return eigenvalues_; }

    /// max_n lambda_n, i.e. the first eigenvalue.
    double sup_eigenvalue() const { return eigenvalues_.front(); }

    /// inf over n > kept of |lambda_n|, which is |lambda_{kept+1}| by ordering.
    double tail_infimum(std::size_t kept) const;

    /// |lambda_n|^r for every stored mode.
    Eigen::VectorXd power_weights(double r) const;

private:
    std::vector<double> eigenvalues_;
};

/// Finite index set of basis modes (0-based) out of `available` ones.
class ProjectionIndex {
public:
    ProjectionIndex(std::vector<std::size_t> modes, std::size_t available);

    static ProjectionIndex prefix(std::size_t count, std::size_t available);
    static ProjectionIndex all(std::size_t available) { return prefix(available, available); }
    static ProjectionIndex none(std::size_t available) { return prefix(0, available); }

    std::size_t available() const { return mask_.size(); }
    std::size_t count() const { return modes_.size(); }
    bool contains(std::size_t mode) const { return mode < mask_.size() && mask_[mode] != 0; }
    bool is_full() const { return modes_.size() == mask_.size(); }
    /// True when the set is {0, ..., count-1}.
    bool is_prefix() const;
    std::span<const std::size_t> modes() const { return modes_; }

private:
    std::vector<std::size_t> modes_;
    std::vector<char> mask_;
};

/// Coefficientwise e^{lambda_n t} x_n. Throws std::invalid_argument for t < 0.
StateVector semigroup_apply(const SpectralOperator& op, double t, const StateVector& x);

/// ||x||_{H_r} = (sum_n |lambda_n|^{2r} x_n^2)^{1/2}.
double fractional_norm(const SpectralOperator& op, double r, const StateVector& x);

/// Zeroes every coefficient outside the index set.
StateVector project(const ProjectionIndex& index, const StateVector& x);

/// ||(-A)^r||_{L(H)} = |sup lambda|^r for r <= 0. Throws for r > 0.
double neg_power_operator_norm(const SpectralOperator& op, double r);

} // namespace stoconv
