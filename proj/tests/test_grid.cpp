#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "rhlab/grid.hpp"
#include "rhlab/harmonics.hpp"

using namespace rhlab;

namespace {
constexpr double kPi = std::numbers::pi;

GridField fill(const GridPtr& g, double (*fn)(double mu, double phi)) {
    GridField f(g);
    for (int k = 0; k < g->n_lat; ++k)
        for (int i = 0; i < g->n_lon; ++i) f.at(k, i) = fn(g->mu_nodes[k], g->phi(i));
    return f;
}
}  // namespace

TEST_CASE("gauss_legendre small cases") {
    auto [x1, w1] = gauss_legendre(1);
    REQUIRE(x1.size() == 1);
    CHECK(std::abs(x1[0]) < 1e-16);
    CHECK(std::abs(w1[0] - 2.0) < 1e-15);

    auto [x2, w2] = gauss_legendre(2);
    CHECK(std::abs(x2[0] + 1.0 / std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(x2[1] - 1.0 / std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(w2[0] - 1.0) < 1e-15);
    CHECK(std::abs(w2[1] - 1.0) < 1e-15);

    CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("gauss_legendre weights, ordering and polynomial exactness") {
    for (int n : {3, 7, 16, 44, 97, 200}) {
        auto [x, w] = gauss_legendre(n);
        double sum = 0.0;
        for (double v : w) sum += v;
        CHECK(std::abs(sum - 2.0) < 1e-14);
        for (int k = 0; k < n; ++k) {
            CHECK(x[k] > -1.0);
            CHECK(x[k] < 1.0);
            if (k > 0) CHECK(x[k] > x[k - 1]);
        }
        // int_{-1}^{1} mu^p = 2/(p+1) for even p, 0 for odd p, exact up to p = 2n - 1
        for (int p = 0; p <= std::min(2 * n - 1, 40); ++p) {
            double q = 0.0;
            for (int k = 0; k < n; ++k) q += w[k] * std::pow(x[k], p);
            const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
            CHECK(std::abs(q - exact) < 1e-13);
        }
    }
}

TEST_CASE("build_grid bounds and defaults") {
    auto g2 = default_grid(2);
    CHECK(g2->n_lat == 6);
    CHECK(g2->n_lon == 12);
    auto g21 = default_grid(21);
    CHECK(g21->n_lat == 44);
    CHECK(g21->n_lon == 88);
    CHECK(default_grid(21) == g21);

    try {
        build_grid(2, 2, 12);
        FAIL("undersized n_lat accepted");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("n_lat") != std::string::npos);
    }
    try {
        build_grid(4, 5, 8);
        FAIL("undersized n_lon accepted");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("n_lon") != std::string::npos);
    }
    CHECK_NOTHROW(build_grid(4, 5, 9));

    for (int k = 0; k < g21->n_lat; ++k)
        CHECK(std::abs(g21->cos_theta[k] - std::sqrt(1.0 - g21->mu_nodes[k] * g21->mu_nodes[k])) < 1e-15);
    CHECK(std::abs(g21->phi(11) - 2.0 * kPi * 11 / 88) < 1e-15);
}

TEST_CASE("integrate known integrals") {
    auto g = default_grid(8);
    CHECK(std::abs(integrate(fill(g, [](double, double) { return 1.0; })) - 4.0 * kPi) < 1e-13);
    CHECK(std::abs(integrate(fill(g, [](double mu, double) { return mu * mu; })) - 4.0 * kPi / 3.0) < 1e-13);
    CHECK(std::abs(integrate(fill(g, [](double mu, double) { return mu; }))) < 1e-14);
    // cos^2(theta) cos^2(phi): 2pi int (1-mu^2) dmu / 2 = 4pi/3
    CHECK(std::abs(integrate(fill(g, [](double mu, double p) { return (1 - mu * mu) * std::cos(p) * std::cos(p); })) -
                   4.0 * kPi / 3.0) < 1e-13);
}

TEST_CASE("integrate is linear") {
    auto g = default_grid(10);
    const GridField a = fill(g, [](double mu, double p) { return std::exp(mu) * std::cos(3 * p); });
    const GridField b = fill(g, [](double mu, double p) { return mu * mu * mu + std::sin(p); });
    GridField c(g);
    for (size_t i = 0; i < c.values.size(); ++i) c.values[i] = 2.5 * a.values[i] - 0.75 * b.values[i];
    const double lhs = integrate(c), rhs = 2.5 * integrate(a) - 0.75 * integrate(b);
    CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(rhs)));
}

TEST_CASE("single harmonics integrate to zero") {
    const int L = 12;
    auto g = default_grid(L);
    for (int j = 1; j <= L; ++j)
        for (int m = 0; m <= j; ++m) {
            SpectralField c(L);
            c(j, m) = m == 0 ? cplx(1.0, 0.0) : cplx(0.6, -0.8);
            CHECK(std::abs(integrate(synthesize(c, g))) < 1e-12);
        }
}
