#pragma once

#include <memory>
#include <utility>
#include <vector>

namespace rhlab {

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

struct GridSpec {
    int L = 0;
    int n_lat = 0;
    int n_lon = 0;
    std::vector<double> mu_nodes;   // sin(theta_k), strictly increasing
    std::vector<double> weights;
    std::vector<double> cos_theta;  // sqrt(1 - mu^2) at each node

    double theta(int k) const;
    double phi(int i) const;
};

using GridPtr = std::shared_ptr<const GridSpec>;

/// Throws std::invalid_argument naming the violated bound.
GridPtr build_grid(int L, int n_lat, int n_lon);

/// n_lat = 2(L+1), n_lon = 4(L+1). Cached per L.
GridPtr default_grid(int L);

/// Latitude-major sample array attached to a grid.
struct GridField {
    GridPtr spec;
    std::vector<double> values;

    GridField() = default;
    explicit GridField(GridPtr g);

    double& at(int k, int i) { return values[static_cast<size_t>(k) * spec->n_lon + i]; }
    double at(int k, int i) const { return values[static_cast<size_t>(k) * spec->n_lon + i]; }
};

/// Sum_k w_k (2pi/n_lon) Sum_i f(phi_i, theta_k).
double integrate(const GridField& f);

}  // namespace rhlab
