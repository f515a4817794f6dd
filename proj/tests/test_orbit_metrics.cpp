#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "rhlab/operators.hpp"
#include "rhlab/orbit_metrics.hpp"

using namespace rhlab;

namespace {
constexpr double kPi = std::numbers::pi;

SpectralField random_field(int L, unsigned seed, int max_deg = -1) {
    std::mt19937_64 g(seed);
    std::normal_distribution<double> n;
    SpectralField c(L);
    for (int j = 1; j <= (max_deg < 0 ? L : max_deg); ++j)
        for (int m = 0; m <= j; ++m) c(j, m) = cplx(n(g), m ? n(g) : 0.0);
    return c;
}

SpectralField single(int L, int j, int m, cplx v = 1.0) {
    SpectralField c(L);
    c(j, m) = v;
    return c;
}
}  // namespace

TEST_CASE("Lp distance") {
    const SpectralField f = random_field(6, 1);
    CHECK(lp_distance(f, f, 2.0) == 0.0);
    CHECK(lp_distance(f, f, 3.0) == 0.0);
    CHECK(std::abs(lp_distance(f + single(6, 2, 0), f, 2.0) - 1.0) < 1e-14);
    // |sin(theta)|_4^4 = 2 pi int mu^4 d mu = 4 pi / 5
    CHECK(std::abs(lp_distance(sin_theta(3), SpectralField(3), 4.0) - std::pow(4 * kPi / 5, 0.25)) < 1e-13);

    const SpectralField g = random_field(6, 2), h = random_field(6, 3);
    for (double p : {1.5, 2.0, 4.0}) {
        CHECK(lp_distance(f, h, p) <= lp_distance(f, g, p) + lp_distance(g, h, p) + 1e-12);
        CHECK(std::abs(lp_distance(f, g, p) - lp_distance(g, f, p)) < 1e-12);
    }
    CHECK_THROWS_AS(lp_distance(f, g, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(lp_distance(f, g, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(lp_distance(f, random_field(5, 3), 2.0), std::invalid_argument);
}

TEST_CASE("polar orbit distance finds the rotation") {
    const SpectralField target = random_field(6, 4) + sin_theta(6, 1.0);
    const SpectralField f = rotate_polar(target, 0.7);
    for (double p : {2.0, 3.0}) {
        const PolarOrbitDistance d = dist_polar_orbit(f, target, p);
        CHECK(d.distance < 1e-10);
        CHECK(std::abs(std::remainder(d.beta_star + 0.7, 2 * kPi)) < 1e-8);
        CHECK_FALSE(d.reflected);
    }

    SpectralField zonal(6);
    zonal(2, 0) = 0.9;
    zonal(4, 0) = -0.3;
    const SpectralField g = random_field(6, 5);
    for (double p : {2.0, 3.0})
        CHECK(std::abs(dist_polar_orbit(g, zonal, p).distance - lp_distance(g, zonal, p)) < 1e-10);

    const SpectralField mirrored = reflect_longitude(target);
    CHECK(dist_polar_orbit(mirrored, target, 2.0).distance > 1e-3);
    const PolarOrbitDistance r = dist_polar_orbit(rotate_polar(mirrored, -1.2), target, 2.0, true);
    CHECK(r.distance < 1e-10);
    CHECK(r.reflected);
}

TEST_CASE("polar orbit distance against a brute-force scan") {
    const SpectralField target = random_field(5, 6);
    const SpectralField f = rotate_polar(target, 2.1) + 0.4 * random_field(5, 7);
    const PolarOrbitDistance d = dist_polar_orbit(f, target, 2.0);

    // Uniform scan over 1e5 angles, then a second uniform scan of the same size around the best cell.
    const int n = 100000;
    double best = INFINITY, best_b = 0.0;
    for (int k = 0; k < n; ++k) {
        const double b = 2 * kPi * k / n;
        const double v = (rotate_polar(target, b) - f).norm();
        if (v < best) best = v, best_b = b;
    }
    const double cell = 2 * kPi / n;
    for (int k = 0; k <= n; ++k) {
        const double b = best_b - cell + 2 * cell * k / n;
        best = std::min(best, (rotate_polar(target, b) - f).norm());
    }
    CHECK(d.distance <= best + 1e-12);
    CHECK(best - d.distance < 1e-8);
    CHECK(d.distance <= lp_distance(f, target, 2.0) + 1e-14);
    // The reported angle reproduces the distance.
    CHECK(std::abs((rotate_polar(target, -d.beta_star) - f).norm() - d.distance) < 1e-12);
}

TEST_CASE("SO(3) orbit distance") {
    const SpectralField target = e2_to_spectral({0.5, 0.3, 0.1, 0.2, 0.1}, 3) + sin_theta(3, 1.0);
    const Euler e{0.6, 1.1, -0.8};
    const SpectralField member = rotate_so3(target, e);
    CHECK(dist_so3_orbit(member, target, 2.0).distance < 1e-8);

    SpectralField bump(3);
    bump(3, 1) = std::sqrt(0.5);  // real part of Y_3^1 with unit norm
    const SpectralField near = member + 1e-3 * bump;
    CHECK(std::abs(bump.norm() - 1.0) < 1e-15);
    const So3OrbitDistance d = dist_so3_orbit(near, target, 2.0);
    CHECK(d.distance <= 1e-3 + 1e-8);
    CHECK(std::abs(lp_distance(rotate_so3(target, d.euler_star), near, 2.0) - d.distance) < 1e-12);

    const SpectralField f = random_field(3, 8) + sin_theta(3, 0.5);
    const double base = dist_so3_orbit(f, target, 2.0).distance;
    const double moved = dist_so3_orbit(rotate_so3(f, Euler{-1.0, 0.4, 2.0}), target, 2.0).distance;
    CHECK(std::abs(base - moved) < 1e-7);
    CHECK(base <= dist_polar_orbit(f, target, 2.0).distance + 1e-9);
}

TEST_CASE("SO(3) orbit distance is no worse than a coarse Euler scan") {
    const SpectralField target = e2_to_spectral({0.2, -0.4, 0.3, 0.1, 0.5}, 2);
    const SpectralField f = random_field(2, 9);
    const double d = dist_so3_orbit(f, target, 2.0).distance;
    double best = INFINITY;
    const int n = 24;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= n / 2; ++j)
            for (int k = 0; k < n; ++k) {
                const Euler e{2 * kPi * i / n, kPi * j / (n / 2), 2 * kPi * k / n};
                best = std::min(best, (rotate_so3(target, e) - f).norm());
            }
    CHECK(d <= best + 1e-10);
}
