#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "rhlab/operators.hpp"

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

SpectralField single(int L, int j, int m, cplx v = 1.0) {
    SpectralField c(L);
    c(j, m) = v;
    return c;
}
}  // namespace

TEST_CASE("laplacian eigenvalues") {
    CHECK(max_diff(laplacian(single(4, 2, 0)), single(4, 2, 0, -6.0)) == 0.0);
    CHECK(max_diff(laplacian(single(4, 1, 1, cplx(0.3, 0.4))), single(4, 1, 1, cplx(-0.6, -0.8))) < 1e-16);
    CHECK(laplacian(single(4, 0, 0)).norm() == 0.0);
}

TEST_CASE("green operator") {
    const SpectralField s = sin_theta(5);
    CHECK(max_diff(green(s), 0.5 * s) < 1e-16);
    CHECK(max_diff(green(single(5, 2, 1, cplx(1, 2))), single(5, 2, 1, cplx(1.0 / 6, 2.0 / 6))) < 1e-16);
    const SpectralField f = random_field(12, 1);
    CHECK(max_diff(laplacian(green(f)), -1.0 * f) < 1e-13);
    CHECK(max_diff(green(laplacian(f)), -1.0 * f) < 1e-13);
    CHECK(green(f).zero_mean());
    CHECK_THROWS_AS(green(single(5, 0, 0)), std::invalid_argument);
}

TEST_CASE("sin_theta is sin(theta)") {
    const SpectralField s = sin_theta(3, 2.5);
    for (double th : {-1.0, 0.2, 1.4}) CHECK(std::abs(eval_point(s, 0.7, th) - 2.5 * std::sin(th)) < 1e-15);
}

TEST_CASE("band projections") {
    SpectralField f = single(4, 1, 0) + single(4, 2, 0);
    CHECK(max_diff(project_band(f, 1, false), single(4, 1, 0)) == 0.0);
    CHECK(project_band(single(4, 1, 0), 1, true).norm() == 0.0);
    const SpectralField r = random_field(10, 2);
    for (int j = 1; j < 10; ++j) {
        const SpectralField lo = project_band(r, j, false), hi = project_band(r, j, true);
        CHECK(max_diff(lo + hi, r) == 0.0);
        CHECK(std::abs(r.norm2() - lo.norm2() - hi.norm2()) < 1e-12 * r.norm2());
    }
}

TEST_CASE("velocity of simple states") {
    const int L = 6;
    {
        auto [uphi, uth] = velocity(SpectralField(L), 1.0);
        const auto& g = *uphi.spec;
        for (int k = 0; k < g.n_lat; ++k)
            for (int i = 0; i < g.n_lon; ++i) {
                CHECK(std::abs(uphi.at(k, i) + g.cos_theta[k]) < 1e-14);
                CHECK(std::abs(uth.at(k, i)) < 1e-14);
            }
    }
    {
        auto [uphi, uth] = velocity(sin_theta(L, 2.0), 0.0);
        const auto& g = *uphi.spec;
        for (int k = 0; k < g.n_lat; ++k)
            for (int i = 0; i < g.n_lon; ++i) {
                CHECK(std::abs(uphi.at(k, i) - g.cos_theta[k]) < 1e-14);
                CHECK(std::abs(uth.at(k, i)) < 1e-14);
            }
    }
    {
        SpectralField z(L);
        z(2, 0) = 0.7;
        z(5, 0) = -0.3;
        auto [uphi, uth] = velocity(z, 0.4);
        for (double v : uth.values) CHECK(std::abs(v) < 1e-12);
    }
}

TEST_CASE("velocity is divergence free") {
    const int L = 16;
    const SpectralField zeta = random_field(L, 3, 8);
    const SpectralField chi = random_field(L, 4, 7);
    auto [uphi, uth] = velocity(zeta, 0.3);
    const Transform& t = *transform_for(default_grid(L));
    const GridField chi_th = t.synthesize(chi, Transform::Deriv::theta);
    const GridField chi_ph = t.synthesize(chi, Transform::Deriv::phi);
    GridField w(default_grid(L));
    const auto& g = *w.spec;
    for (int k = 0; k < g.n_lat; ++k)
        for (int i = 0; i < g.n_lon; ++i)
            w.at(k, i) = uphi.at(k, i) * chi_ph.at(k, i) / g.cos_theta[k] + uth.at(k, i) * chi_th.at(k, i);
    CHECK(std::abs(integrate(w)) < 1e-10);
}

TEST_CASE("advection tendency of zonal and RH states") {
    const int L = 12;
    SpectralField z(L);
    z(1, 0) = 0.5;
    z(3, 0) = -1.2;
    z(6, 0) = 0.4;
    for (double om : {0.0, 0.7, -2.0}) CHECK(advection_tendency(z, om).norm() < 1e-11);

    const double alpha = 1.3, omega = 0.45, c = alpha / 3.0 - omega;
    const SpectralField Y = e2_to_spectral({0.4, -0.2, 0.5, 0.3, -0.6}, L);
    const SpectralField zeta = Y + sin_theta(L, alpha);
    SpectralField expect(L);  // -c d/dphi zeta
    for (int m = 0; m <= 2; ++m) expect(2, m) = -c * cplx(0.0, m) * zeta(2, m);
    CHECK(max_diff(advection_tendency(zeta, omega), expect) < 1e-10);
}

TEST_CASE("advection tendency against finite differences of point values") {
    const int L = 10;
    const double omega = 0.6;
    const SpectralField zeta = random_field(L, 5, 6);
    const SpectralField psi = stream_function(zeta, omega);
    const SpectralField k = advection_tendency(zeta, omega);
    const double h = 1e-5;
    for (auto [ph, th] : {std::pair{0.3, 0.2}, std::pair{2.0, -0.9}, std::pair{4.4, 1.1}}) {
        auto d = [&](const SpectralField& f, double dp, double dt) {
            return (eval_point(f, ph + dp, th + dt) - eval_point(f, ph - dp, th - dt)) / (2 * h);
        };
        const double psi_p = d(psi, h, 0), psi_t = d(psi, 0, h), z_p = d(zeta, h, 0), z_t = d(zeta, 0, h);
        const double ref = -(psi_p * z_t - psi_t * z_p) / std::cos(th);
        CHECK(std::abs(eval_point(k, ph, th) - ref) < 1e-6 * std::max(1.0, std::abs(ref)));
    }
}

TEST_CASE("advection tendency is skew and mean free") {
    const int L = 14;
    const SpectralField zeta = random_field(L, 6);
    const SpectralField k = advection_tendency(zeta, 0.9);
    CHECK(std::abs(k(0, 0)) < 1e-12);
    CHECK(std::abs(inner(zeta, k)) < 1e-10);
}

TEST_CASE("advection tendency is resolved exactly by the default grid") {
    const int L = 11;
    const SpectralField zeta = random_field(L, 7);
    const SpectralField a = advection_tendency(zeta, 0.5);
    const SpectralField b = advection_tendency(zeta.truncated(2 * L), 0.5).truncated(L);
    CHECK(max_diff(a, b) < 1e-11);
}

TEST_CASE("transport by a prescribed stream") {
    const int L = 8;
    const SpectralField zeta = random_field(L, 8);
    const SpectralField psi = stream_function(zeta, 0.3);
    CHECK(max_diff(transport_tendency(zeta, psi), advection_tendency(zeta, 0.3)) < 1e-13);
    CHECK_THROWS_AS(transport_tendency(zeta, psi.truncated(L + 1)), std::invalid_argument);
}

TEST_CASE("Poincare gap") {
    const int L = 8;
    CHECK(poincare_gap(e2_to_spectral({0.3, 0.1, -0.4, 0.2, 0.5}, L), 1) == 0.0);
    CHECK(std::abs(poincare_gap(single(L, 3, 0), 1) - 1.0 / 12.0) < 1e-16);
    for (unsigned s = 0; s < 20; ++s) {
        const SpectralField f = random_field(L, 100 + s);
        for (int j = 0; j < L; ++j) {
            const double gap = poincare_gap(f, j);
            CHECK(gap >= 0.0);
            // Direct form through the Green operator.
            const SpectralField p = project_band(f, j, true);
            const double direct = p.norm2() / ((j + 1.0) * (j + 2.0)) - inner(p, green(p));
            CHECK(std::abs(gap - direct) < 1e-12 * std::max(1.0, p.norm2()));
        }
    }
    CHECK_THROWS_AS(poincare_gap(single(L, 2, 0), -1), std::invalid_argument);
}
