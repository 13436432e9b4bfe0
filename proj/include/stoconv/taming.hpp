#pragma once

#include "stoconv/noise.hpp"
#include "stoconv/spectral.hpp"

#include <Eigen/Core>

#include <cstddef>

namespace stoconv {

/// psi(v) = v / (1 + ||v||_H^2). Its norm never exceeds 1/2.
StateVector psi(const StateVector& v);

/// psi'(z)(u) = u / (1 + ||z||^2) - 2 z <z, u> / (1 + ||z||^2)^2.
StateVector psi_prime_apply(const StateVector& z, const StateVector& u);

/// psi''(z)(u, v) = -2 [u <z,v> + v <z,u> + z <u,v>] / (1 + ||z||^2)^2
///                  + 8 z <z,u> <z,v> / (1 + ||z||^2)^3.
StateVector psi_double_prime_apply(const StateVector& z, const StateVector& u,
                                   const StateVector& v);

/// Smoothed increment together with its tamed image.
struct TamedIncrement {
    StateVector raw;
    StateVector tamed;

    static TamedIncrement of(StateVector raw);
};

/// Drift of the mild Itô representation of psi(X) for dX = B dW:
///   4 ||B^* z||_U^2 z / (1+||z||^2)^3 - (2 B B^* z + ||B||_HS^2 z) / (1+||z||^2)^2.
StateVector ito_drift(const StateVector& z, const NoiseOperator& noise);

/// Diffusion of the same representation in direction u_j: psi'(z)(B u_j).
StateVector ito_diffusion_apply(const StateVector& z, const NoiseOperator& noise,
                                std::size_t u_direction);

struct ItoCoefficients {
    StateVector drift;
    /// Column j holds psi'(z)(B u_j).
    Eigen::MatrixXd diffusion;
};

ItoCoefficients ito_coefficients(const StateVector& z, const NoiseOperator& noise);

} // namespace stoconv
