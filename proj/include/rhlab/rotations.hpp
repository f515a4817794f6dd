#pragma once

#include <Eigen/Dense>

#include "rhlab/harmonics.hpp"

namespace rhlab {

/// Z-Y-Z Euler angles: R = Rz(alpha) Ry(beta) Rz(gamma).
struct Euler {
    double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

Eigen::Matrix3d rotation_matrix(const Euler& e);
Euler euler_from_matrix(const Eigen::Matrix3d& R);

/// Coefficients of f(phi + beta, theta).
SpectralField rotate_polar(const SpectralField& c, double beta);

/// Coefficients of f(-phi, theta), via a longitude index flip on the grid.
SpectralField reflect_longitude(const SpectralField& c);

/// Active rotation (Rf)(x) = f(R^{-1} x), by point resampling and re-analysis.
/// rotate_polar(c, b) equals rotate_so3(c, {-b, 0, 0}).
SpectralField rotate_so3(const SpectralField& c, const Eigen::Matrix3d& R);
SpectralField rotate_so3(const SpectralField& c, const Euler& e);

/// Smallest grid on which degree-L fields are transformed exactly.
GridPtr exact_grid(int L);

}  // namespace rhlab
