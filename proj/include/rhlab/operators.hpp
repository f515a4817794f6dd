#pragma once

#include <utility>

#include "rhlab/grid.hpp"
#include "rhlab/harmonics.hpp"

namespace rhlab {

/// c_j^m -> -j(j+1) c_j^m.
SpectralField laplacian(const SpectralField& c);

/// Inverse of -Laplacian on zero-mean fields. Rejects a mean above 1e-12 (relative).
SpectralField green(const SpectralField& c);

/// Keeps degrees <= j, or degrees > j when `complement` is set.
SpectralField project_band(const SpectralField& c, int j, bool complement);

/// s * sin(theta) as a spectral field of degree L.
SpectralField sin_theta(int L, double s = 1.0);

/// psi = omega sin(theta) - G zeta.
SpectralField stream_function(const SpectralField& zeta, double omega);

/// Velocity components on the default grid of zeta.L():
/// u_phi = -d_theta psi, u_theta = (1/cos theta) d_phi psi.
std::pair<GridField, GridField> velocity(const SpectralField& zeta, double omega);

/// -J grad(psi) . grad(zeta) analysed back to degree zeta.L(); psi.L() <= zeta.L().
SpectralField transport_tendency(const SpectralField& zeta, const SpectralField& psi);

/// d_t zeta = -J grad(omega sin(theta) - G zeta) . grad(zeta).
SpectralField advection_tendency(const SpectralField& zeta, double omega);

/// ||P_j^perp f||^2 / ((j+1)(j+2)) - <P_j^perp f, G P_j^perp f>.
double poincare_gap(const SpectralField& f, int j);

}  // namespace rhlab
