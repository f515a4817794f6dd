#pragma once

#include "rhlab/harmonics.hpp"
#include "rhlab/rotations.hpp"

namespace rhlab {

/// (int |f - g|^p)^(1/p) on a grid with n_lat = 4(L+1), n_lon = 8(L+1).
/// At p = 2 the spectral norm is returned after a cross-check against the grid value.
double lp_distance(const SpectralField& f, const SpectralField& g, double p);

struct PolarOrbitDistance {
    double distance = 0.0;
    /// The nearest orbit point is rotate_polar(target, -beta_star), with the target
    /// replaced by reflect_longitude(target) when `reflected` is set.
    double beta_star = 0.0;
    bool reflected = false;
};

/// min over beta of || rotate_polar(target, beta) - f ||_p, optionally also over reflected targets.
PolarOrbitDistance dist_polar_orbit(const SpectralField& f, const SpectralField& target, double p,
                                    bool include_reflection = false);

struct So3OrbitDistance {
    double distance = 0.0;
    /// The returned distance is || rotate_so3(target, euler_star) - f ||_p.
    Euler euler_star;
    /// Set when an eigenframe could not be used and the Euler-grid search ran instead.
    bool degenerate = false;
};

/// Upper bound of min over R in SO(3) of || rotate_so3(target, R) - f ||_p.
So3OrbitDistance dist_so3_orbit(const SpectralField& f, const SpectralField& target, double p);

}  // namespace rhlab
