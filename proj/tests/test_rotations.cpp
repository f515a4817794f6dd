#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "rhlab/invariants.hpp"
#include "rhlab/rotations.hpp"

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

double max_diff(const SpectralField& a, const SpectralField& b) {
    double d = 0.0;
    for (size_t i = 0; i < a.data().size(); ++i) d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
    return d;
}

// Rz(a) Ry(b) Rz(g) written out by hand.
Eigen::Matrix3d zyz(double a, double b, double g) {
    auto rz = [](double t) {
        Eigen::Matrix3d m;
        m << std::cos(t), -std::sin(t), 0, std::sin(t), std::cos(t), 0, 0, 0, 1;
        return m;
    };
    Eigen::Matrix3d ry;
    ry << std::cos(b), 0, std::sin(b), 0, 1, 0, -std::sin(b), 0, std::cos(b);
    return rz(a) * ry * rz(g);
}

Eigen::Vector3d point(double phi, double theta) {
    return {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), std::sin(theta)};
}
}  // namespace

TEST_CASE("polar rotation") {
    const SpectralField c = random_field(9, 1);
    CHECK(max_diff(rotate_polar(c, 0.0), c) == 0.0);
    CHECK(max_diff(rotate_polar(c, 2 * kPi), c) < 1e-14);
    for (double b : {0.4, -1.7, 3.0})
        for (auto [ph, th] : {std::pair{0.1, 0.3}, std::pair{2.5, -1.2}, std::pair{5.0, 0.9}})
            CHECK(std::abs(eval_point(rotate_polar(c, b), ph, th) - eval_point(c, ph + b, th)) < 1e-12);
    CHECK(max_diff(rotate_polar(rotate_polar(c, 0.3), 1.1), rotate_polar(c, 1.4)) < 1e-13);
}

TEST_CASE("longitude reflection") {
    SpectralField z(6);
    z(2, 0) = 1.0;
    z(5, 0) = -0.4;
    CHECK(max_diff(reflect_longitude(z), z) < 1e-14);

    const SpectralField s = e2_to_spectral({0, 0, 0, 0, 1}, 6);  // cos^2(theta) sin(2 phi)
    CHECK(max_diff(reflect_longitude(s), -1.0 * s) < 1e-14);

    const SpectralField c = random_field(10, 2);
    CHECK(max_diff(reflect_longitude(reflect_longitude(c)), c) < 1e-13);
    for (auto [ph, th] : {std::pair{0.7, 0.2}, std::pair{3.3, -0.8}})
        CHECK(std::abs(eval_point(reflect_longitude(c), ph, th) - eval_point(c, -ph, th)) < 1e-12);
}

TEST_CASE("Euler matrices") {
    for (auto e : {Euler{0.3, 1.1, -2.0}, Euler{-2.5, 0.2, 0.9}, Euler{1.0, 2.9, 3.0}}) {
        const Eigen::Matrix3d R = rotation_matrix(e);
        CHECK((R - zyz(e.alpha, e.beta, e.gamma)).norm() < 1e-15);
        CHECK((rotation_matrix(euler_from_matrix(R)) - R).norm() < 1e-13);
    }
    // Gimbal cases still reproduce the matrix.
    for (auto e : {Euler{0.4, 0.0, 0.3}, Euler{0.4, kPi, 0.3}}) {
        const Eigen::Matrix3d R = rotation_matrix(e);
        CHECK((rotation_matrix(euler_from_matrix(R)) - R).norm() < 1e-13);
    }
}

TEST_CASE("SO(3) rotation") {
    const SpectralField c = random_field(8, 3);
    for (double b : {0.5, -2.2}) CHECK(max_diff(rotate_so3(c, Euler{b, 0, 0}), rotate_polar(c, -b)) < 1e-12);

    const Euler e{0.7, 1.2, -0.4};
    const SpectralField r = rotate_so3(c, e);
    CHECK(std::abs(r.norm() - c.norm()) < 1e-11 * c.norm());
    const Eigen::Matrix3d Rinv = zyz(e.alpha, e.beta, e.gamma).transpose();
    for (auto [ph, th] : {std::pair{0.2, 0.5}, std::pair{4.0, -1.0}, std::pair{2.2, 1.3}}) {
        const Eigen::Vector3d x = Rinv * point(ph, th);
        const double ph0 = std::atan2(x(1), x(0)), th0 = std::atan2(x(2), std::hypot(x(0), x(1)));
        CHECK(std::abs(eval_point(r, ph, th) - eval_point(c, ph0, th0)) < 1e-12);
    }

    // Degree is preserved and so are the moments.
    for (int j : {1, 2, 5}) {
        SpectralField p(8);
        for (int m = 0; m <= j; ++m) p(j, m) = cplx(0.3 + m, m ? -0.2 * m : 0.0);
        const SpectralField q = rotate_so3(p, e);
        CHECK(q.norm2() - q.degree_norm2(j) < 1e-10 * q.norm2());
    }
    const SpectralField low = random_field(4, 9);
    const auto m0 = moments_numeric(low, 7);
    const auto m1 = moments_numeric(rotate_so3(low, e), 7);
    for (size_t k = 0; k < m0.size(); ++k) CHECK(std::abs(m1[k] - m0[k]) <= 1e-10 * std::abs(m0[k]));
}

TEST_CASE("Y_2^0 tilted by a right angle stays on its O(3) orbit") {
    SpectralField y(2);
    y(2, 0) = 1.0;
    const SpectralField r = rotate_so3(y, Euler{0.0, kPi / 2, 0.0});
    const E2Coeffs a = spectral_to_e2(y), b = spectral_to_e2(r);
    CHECK(same_o3_orbit(a, b));
    CHECK_FALSE(same_h_orbit_deg2(a, b));
}
