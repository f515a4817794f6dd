#include "rhlab/grid.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rhlab {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    std::vector<double> x(n), w(n);
    const double pi = std::numbers::pi;
    for (int k = 0; k < (n + 1) / 2; ++k) {
        // Largest root first; mirrored below.
        double z = std::cos(pi * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        // Re-evaluate the derivative at the converged root for the weight.
        double p0 = 1.0, p1 = z;
        for (int j = 2; j <= n; ++j) {
            double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        double wk = 2.0 / ((1.0 - z * z) * dp * dp);
        x[n - 1 - k] = z;
        x[k] = -z;
        w[n - 1 - k] = wk;
        w[k] = wk;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
    return {x, w};
}

double GridSpec::theta(int k) const { return std::asin(mu_nodes[k]); }

double GridSpec::phi(int i) const { return 2.0 * std::numbers::pi * i / n_lon; }

GridPtr build_grid(int L, int n_lat, int n_lon) {
    if (L < 0) throw std::invalid_argument("build_grid: L must be non-negative");
    if (n_lat < L + 1)
        throw std::invalid_argument("build_grid: n_lat = " + std::to_string(n_lat) +
                                    " violates n_lat >= L+1 = " + std::to_string(L + 1));
    if (n_lon < 2 * L + 1)
        throw std::invalid_argument("build_grid: n_lon = " + std::to_string(n_lon) +
                                    " violates n_lon >= 2L+1 = " + std::to_string(2 * L + 1));
    auto g = std::make_shared<GridSpec>();
    g->L = L;
    g->n_lat = n_lat;
    g->n_lon = n_lon;
    auto [mu, w] = gauss_legendre(n_lat);
    g->mu_nodes = std::move(mu);
    g->weights = std::move(w);
    g->cos_theta.resize(n_lat);
    for (int k = 0; k < n_lat; ++k) g->cos_theta[k] = std::sqrt(1.0 - g->mu_nodes[k] * g->mu_nodes[k]);
    return g;
}

GridPtr default_grid(int L) {
    static std::mutex mtx;
    static std::map<int, GridPtr> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(L);
    if (it != cache.end()) return it->second;
    auto g = build_grid(L, 2 * (L + 1), 4 * (L + 1));
    cache.emplace(L, g);
    return g;
}

GridField::GridField(GridPtr g) : spec(std::move(g)) {
    values.assign(static_cast<size_t>(spec->n_lat) * spec->n_lon, 0.0);
}

double integrate(const GridField& f) {
    const GridSpec& g = *f.spec;
    const double dphi = 2.0 * std::numbers::pi / g.n_lon;
    double total = 0.0;
    for (int k = 0; k < g.n_lat; ++k) {
        double row = 0.0;
        for (int i = 0; i < g.n_lon; ++i) row += f.at(k, i);
        total += g.weights[k] * dphi * row;
    }
    return total;
}

}  // namespace rhlab
