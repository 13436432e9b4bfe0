#include "stoconv/noise.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <stdexcept>

namespace stoconv {

NoiseOperator::NoiseOperator(Eigen::MatrixXd coeffs, double regularity)
    : coeffs_(std::move(coeffs)), regularity_(regularity)
{
    if (coeffs_.rows() == 0 || coeffs_.cols() == 0) {
        throw std::invalid_argument("noise operator needs at least one H and one U mode");
    }
    if (!coeffs_.allFinite()) {
        throw std::invalid_argument("noise operator has non-finite entries");
    }
    if (!(regularity_ >= 0.0)) {
        throw std::invalid_argument("noise regularity beta must be nonnegative");
    }
}

NoiseOperator NoiseOperator::diagonal(std::size_t h_modes, std::size_t u_modes, double scale,
                                      double decay, double regularity)
{
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(h_modes),
                                              static_cast<Eigen::Index>(u_modes));
    const std::size_t diag = std::min(h_modes, u_modes);
    for (std::size_t n = 0; n < diag; ++n) {
        const auto i = static_cast<Eigen::Index>(n);
        b(i, i) = scale * std::pow(static_cast<double>(n + 1), -decay);
    }
    return NoiseOperator(std::move(b), regularity);
}

NoiseOperator NoiseOperator::projected(const ProjectionIndex& h_index,
                                       const ProjectionIndex& u_index) const
{
    if (h_index.available() != h_modes() || u_index.available() != u_modes()) {
        throw std::invalid_argument("projection dimensions do not match the noise operator");
    }
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(coeffs_.rows(), coeffs_.cols());
    for (std::size_t n : h_index.modes()) {
        for (std::size_t j : u_index.modes()) {
            const auto r = static_cast<Eigen::Index>(n);
            const auto c = static_cast<Eigen::Index>(j);
            b(r, c) = coeffs_(r, c);
        }
    }
    return NoiseOperator(std::move(b), regularity_);
}

double hs_norm(const NoiseOperator& noise, const SpectralOperator& op, double r)
{
    if (noise.h_modes() != op.size()) {
        throw std::invalid_argument("noise operator and spectral operator disagree on N_max");
    }
    const Eigen::VectorXd w = op.power_weights(r);
    return (w.asDiagonal() * noise.coeffs()).norm();
}

double damped_integral(double x, double h)
{
    if (x == 0.0) {
        return h;
    }
    return std::expm1(x * h) / x;
}

IncrementCovariance IncrementCovariance::build(const SpectralOperator& op,
                                               const NoiseOperator& noise, double step)
{
    if (!(step > 0.0)) {
        throw std::invalid_argument("increment step must be positive");
    }
    if (noise.h_modes() != op.size()) {
        throw std::invalid_argument("noise operator and spectral operator disagree on N_max");
    }
    IncrementCovariance cov;
    cov.step_ = step;
    cov.h_modes_ = noise.h_modes();
    cov.u_modes_ = noise.u_modes();
    const auto n_h = static_cast<Eigen::Index>(cov.h_modes_);
    const auto n_u = static_cast<Eigen::Index>(cov.u_modes_);
    const Eigen::MatrixXd& b = noise.coeffs();
    const Eigen::MatrixXd bbt = b * b.transpose();

    cov.cov_yy_.resize(n_h, n_h);
    for (Eigen::Index n = 0; n < n_h; ++n) {
        for (Eigen::Index m = 0; m < n_h; ++m) {
            const double sum = op.eigenvalue(static_cast<std::size_t>(n)) +
                               op.eigenvalue(static_cast<std::size_t>(m));
            cov.cov_yy_(n, m) = bbt(n, m) * damped_integral(sum, step);
        }
    }
    cov.cov_yw_.resize(n_h, n_u);
    for (Eigen::Index n = 0; n < n_h; ++n) {
        const double weight = damped_integral(op.eigenvalue(static_cast<std::size_t>(n)), step);
        cov.cov_yw_.row(n) = b.row(n) * weight;
    }
    cov.cov_ww_ = step * Eigen::MatrixXd::Identity(n_u, n_u);

    // Condition Y on ΔW: Y = (cov_YW / h) ΔW + S^{1/2} z with the Schur complement
    // S = cov_YY - cov_YW cov_YW^T / h. Modes with S_nn = 0 (zero rows of B)
    // stay out of the factorization so that they sample as exact zeros.
    const Eigen::MatrixXd schur = cov.cov_yy_ - cov.cov_yw_ * cov.cov_yw_.transpose() / step;
    std::vector<Eigen::Index> active;
    for (Eigen::Index n = 0; n < n_h; ++n) {
        if (schur(n, n) > 0.0) {
            active.push_back(n);
        }
    }
    const auto n_a = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd reduced(n_a, n_a);
    for (Eigen::Index i = 0; i < n_a; ++i) {
        for (Eigen::Index j = 0; j < n_a; ++j) {
            reduced(i, j) = schur(active[i], active[j]);
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(reduced);
    if (llt.info() != Eigen::Success) {
        const double jitter = 1e-12 * cov.assembled().trace() / static_cast<double>(n_h + n_u);
        reduced.diagonal().array() += jitter;
        llt.compute(reduced);
        if (llt.info() != Eigen::Success) {
            throw std::runtime_error("increment covariance is not positive semidefinite; "
                                     "check the noise operator configuration");
        }
        cov.jittered_ = true;
    }
    const Eigen::MatrixXd lower = llt.matrixL();
    cov.factor_ = Eigen::MatrixXd::Zero(n_h + n_u, n_h + n_u);
    for (Eigen::Index i = 0; i < n_a; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            cov.factor_(active[i], active[j]) = lower(i, j);
        }
    }
    const double root_h = std::sqrt(step);
    cov.factor_.topRightCorner(n_h, n_u) = cov.cov_yw_ / root_h;
    cov.factor_.bottomRightCorner(n_u, n_u).diagonal().setConstant(root_h);

    const Eigen::Index dim = cov.factor_.rows();
    cov.row_start_.assign(1, 0);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            const double v = cov.factor_(r, c);
            if (v != 0.0) {
                cov.col_.push_back(static_cast<std::size_t>(c));
                cov.val_.push_back(v);
            }
        }
        cov.row_start_.push_back(cov.col_.size());
    }
    return cov;
}

Eigen::MatrixXd IncrementCovariance::assembled() const
{
    const auto n_h = cov_yy_.rows();
    const auto n_u = cov_ww_.rows();
    Eigen::MatrixXd full(n_h + n_u, n_h + n_u);
    full.topLeftCorner(n_h, n_h) = cov_yy_;
    full.topRightCorner(n_h, n_u) = cov_yw_;
    full.bottomLeftCorner(n_u, n_h) = cov_yw_.transpose();
    full.bottomRightCorner(n_u, n_u) = cov_ww_;
    return full;
}

void IncrementCovariance::sample(RandomStream& stream, StateVector& y, NoiseVector& dw) const
{
    const std::size_t dim = h_modes_ + u_modes_;
    thread_local std::vector<double> z;
    z.resize(dim);
    for (double& v : z) {
        v = stream.normal();
    }
    y.resize(static_cast<Eigen::Index>(h_modes_));
    dw.resize(static_cast<Eigen::Index>(u_modes_));
    for (std::size_t r = 0; r < dim; ++r) {
        double acc = 0.0;
        for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
            acc += val_[k] * z[col_[k]];
        }
        if (r < h_modes_) {
            y[static_cast<Eigen::Index>(r)] = acc;
        } else {
            dw[static_cast<Eigen::Index>(r - h_modes_)] = acc;
        }
    }
}

CoupledIncrement sample_coupled_increment(const IncrementCovariance& cov, RandomStream& stream)
{
    CoupledIncrement out;
    cov.sample(stream, out.y, out.dw);
    return out;
}

CoupledIncrement brute_force_convolution_oracle(const SpectralOperator& op,
                                                const NoiseOperator& noise, double step,
                                                std::size_t substeps, RandomStream& stream)
{
    if (substeps == 0) {
        throw std::invalid_argument("quadrature needs at least one substep");
    }
    if (!(step > 0.0)) {
        throw std::invalid_argument("increment step must be positive");
    }
    const auto n_h = static_cast<Eigen::Index>(noise.h_modes());
    const auto n_u = static_cast<Eigen::Index>(noise.u_modes());
    const double delta = step / static_cast<double>(substeps);
    const double sd = std::sqrt(delta);

    CoupledIncrement out{StateVector::Zero(n_h), NoiseVector::Zero(n_u)};
    NoiseVector dw_k(n_u);
    for (std::size_t k = 0; k < substeps; ++k) {
        for (Eigen::Index j = 0; j < n_u; ++j) {
            dw_k[j] = sd * stream.normal();
        }
        out.dw += dw_k;
        const double remaining = step - static_cast<double>(k) * delta;
        const StateVector pushed = noise.apply(dw_k);
        for (Eigen::Index n = 0; n < n_h; ++n) {
            out.y[n] += std::exp(op.eigenvalue(static_cast<std::size_t>(n)) * remaining) * pushed[n];
        }
    }
    return out;
}

Eigen::VectorXd convolution_variance(const SpectralOperator& op, const NoiseOperator& noise,
                                     double t)
{
    const auto n_h = static_cast<Eigen::Index>(noise.h_modes());
    Eigen::VectorXd var(n_h);
    for (Eigen::Index n = 0; n < n_h; ++n) {
        const double lambda = op.eigenvalue(static_cast<std::size_t>(n));
        var[n] = noise.coeffs().row(n).squaredNorm() * damped_integral(2.0 * lambda, t);
    }
    return var;
}

} // namespace stoconv
