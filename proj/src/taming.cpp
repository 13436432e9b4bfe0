#include "stoconv/taming.hpp"

#include <stdexcept>

namespace stoconv {

StateVector psi(const StateVector& v)
{
    return v / (1.0 + v.squaredNorm());
}

StateVector psi_prime_apply(const StateVector& z, const StateVector& u)
{
    const double d = 1.0 + z.squaredNorm();
    return u / d - (2.0 * z.dot(u) / (d * d)) * z;
}

StateVector psi_double_prime_apply(const StateVector& z, const StateVector& u,
                                   const StateVector& v)
{
    const double d = 1.0 + z.squaredNorm();
    const double zu = z.dot(u);
    const double zv = z.dot(v);
    const double uv = u.dot(v);
    return (-2.0 / (d * d)) * (u * zv + v * zu + z * uv) + (8.0 * zu * zv / (d * d * d)) * z;
}

TamedIncrement TamedIncrement::of(StateVector raw)
{
    StateVector tamed = psi(raw);
    return TamedIncrement{std::move(raw), std::move(tamed)};
}

StateVector ito_drift(const StateVector& z, const NoiseOperator& noise)
{
    const Eigen::MatrixXd& b = noise.coeffs();
    const double d = 1.0 + z.squaredNorm();
    const NoiseVector adj = b.transpose() * z;
    const double hs2 = b.squaredNorm();
    return (4.0 * adj.squaredNorm() / (d * d * d)) * z - (2.0 * (b * adj) + hs2 * z) / (d * d);
}

StateVector ito_diffusion_apply(const StateVector& z, const NoiseOperator& noise,
                                std::size_t u_direction)
{
    if (u_direction >= noise.u_modes()) {
        throw std::out_of_range("U-basis direction out of range");
    }
    return psi_prime_apply(z, noise.coeffs().col(static_cast<Eigen::Index>(u_direction)));
}

ItoCoefficients ito_coefficients(const StateVector& z, const NoiseOperator& noise)
{
    const Eigen::MatrixXd& b = noise.coeffs();
    const double d = 1.0 + z.squaredNorm();
    const NoiseVector adj = b.transpose() * z;
    // psi'(z) B = B / d - 2 z (B^* z)^T / d^2
    Eigen::MatrixXd diffusion = b / d - (2.0 / (d * d)) * z * adj.transpose();
    return ItoCoefficients{ito_drift(z, noise), std::move(diffusion)};
}

} // namespace stoconv
