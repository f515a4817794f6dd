#pragma once

#include "rhlab/harmonics.hpp"

namespace rhlab {

/// zeta(phi, theta, t) = alpha sin(theta) + Y(phi - c t, theta).
struct RHState {
    double omega = 0.0;
    double alpha = 0.0;
    int degree_j = 0;
    SpectralField Y;
    double speed_c = 0.0;
};

/// c = alpha (1/2 - 1/(j(j+1))) - omega.
double rh_speed(double omega, double alpha, int j);

/// Y must be nonzero and supported on a single degree j >= 1.
RHState make_rh(double omega, double alpha, const SpectralField& Y);

/// Closed-form state at time t, at the truncation of Y.
SpectralField exact_state(const RHState& s, double t);

bool is_steady(const RHState& s, double tol = 1e-10);

}  // namespace rhlab
