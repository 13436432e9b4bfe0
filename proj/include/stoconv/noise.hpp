#pragma once

#include "stoconv/rng.hpp"
#include "stoconv/spectral.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace stoconv {

/// Diffusion operator B : U -> H as the matrix B_{nj} = <h_n, B u_j>_H over the
/// truncated bases, together with its declared smoothness class beta.
class NoiseOperator {
public:
    explicit NoiseOperator(Eigen::MatrixXd coeffs, double regularity = 0.0);

    /// B u_j = c j^{-q} h_j for j <= min(h_modes, u_modes), zero otherwise.
    static NoiseOperator diagonal(std::size_t h_modes, std::size_t u_modes, double scale,
                                  double decay, double regularity = 0.0);

    std::size_t h_modes() const { return static_cast<std::size_t>(coeffs_.rows()); }
    std::size_t u_modes() const { return static_cast<std::size_t>(coeffs_.cols()); }
    double regularity() const { return regularity_; }
    const Eigen::MatrixXd& coeffs() const { return coeffs_; }

    /// The adjoint 𝔹 = B^*, i.e. the transpose in orthonormal coordinates.
    Eigen::MatrixXd adjoint() const { return coeffs_.transpose(); }

    StateVector apply(const NoiseVector& u) const { return coeffs_ * u; }
    NoiseVector apply_adjoint(const StateVector& h) const { return coeffs_.transpose() * h; }

    /// P_I B P̂_J.
    NoiseOperator projected(const ProjectionIndex& h_index, const ProjectionIndex& u_index) const;

private:
    Eigen::MatrixXd coeffs_;
    double regularity_;
};

/// ||B||_{HS(U, H_r)} = (sum_{n,j} |lambda_n|^{2r} B_{nj}^2)^{1/2}.
double hs_norm(const NoiseOperator& noise, const SpectralOperator& op, double r);

/// (1 - e^{x h}) / (-x), continuously extended by h at x = 0.
double damped_integral(double x, double h);

/// Joint law of one step of the exact convolution increment
/// Y = int_0^h e^{(h-s)A} B dW_s and the Wiener coefficients ΔW = W_h - W_0.
///
/// Sampling is (Y, ΔW) = G z with z standard normal and G G^T equal to
/// [[cov_YY, cov_YW], [cov_YW^T, h Id]]; G holds the Cholesky factor of the
/// Schur complement of the h Id block.
class IncrementCovariance {
public:
    /// Throws std::runtime_error if the Schur complement is not factorizable
    /// after a single diagonal jitter of 1e-12 * trace / (N + K).
    static IncrementCovariance build(const SpectralOperator& op, const NoiseOperator& noise,
                                     double step);

    double step() const { return step_; }
    std::size_t h_modes() const { return h_modes_; }
    std::size_t u_modes() const { return u_modes_; }
    const Eigen::MatrixXd& cov_yy() const { return cov_yy_; }
    const Eigen::MatrixXd& cov_yw() const { return cov_yw_; }
    const Eigen::MatrixXd& cov_ww() const { return cov_ww_; }
    /// Full (N+K)x(N+K) block covariance.
    Eigen::MatrixXd assembled() const;
    const Eigen::MatrixXd& square_root() const { return factor_; }
    bool jittered() const { return jittered_; }

    /// Draws one (Y, ΔW) pair. Outputs are resized as needed.
    void sample(RandomStream& stream, StateVector& y, NoiseVector& dw) const;

private:
    double step_ = 0.0;
    std::size_t h_modes_ = 0;
    std::size_t u_modes_ = 0;
    Eigen::MatrixXd cov_yy_;
    Eigen::MatrixXd cov_yw_;
    Eigen::MatrixXd cov_ww_;
    Eigen::MatrixXd factor_;
    bool jittered_ = false;

    // nonzeros of factor_, row by row
    std::vector<std::size_t> row_start_;
    std::vector<std::size_t> col_;
    std::vector<double> val_;
};

struct CoupledIncrement {
    StateVector y;
    NoiseVector dw;
};

CoupledIncrement sample_coupled_increment(const IncrementCovariance& cov, RandomStream& stream);

/// Left-point Itô quadrature Y ≈ sum_k e^{(h - s_k)A} B δW_k over `substeps`
/// equal subintervals, returned with ΔW = sum_k δW_k. Validation only.
CoupledIncrement brute_force_convolution_oracle(const SpectralOperator& op,
                                                const NoiseOperator& noise, double step,
                                                std::size_t substeps, RandomStream& stream);

/// Per-mode variance of the exact convolution O_t, i.e. diag(cov_YY) at step t.
Eigen::VectorXd convolution_variance(const SpectralOperator& op, const NoiseOperator& noise,
                                     double t);

} // namespace stoconv
