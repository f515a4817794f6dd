#include "rhlab/rotations.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace rhlab {

namespace {

Eigen::Matrix3d rot_z(double a) {
    Eigen::Matrix3d R;
    R << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
    return R;
}

Eigen::Matrix3d rot_y(double b) {
    Eigen::Matrix3d R;
    R << std::cos(b), 0, std::sin(b), 0, 1, 0, -std::sin(b), 0, std::cos(b);
    return R;
}

}  // namespace

Eigen::Matrix3d rotation_matrix(const Euler& e) { return rot_z(e.alpha) * rot_y(e.beta) * rot_z(e.gamma); }

Euler euler_from_matrix(const Eigen::Matrix3d& R) {
    Euler e;
    e.beta = std::acos(std::clamp(R(2, 2), -1.0, 1.0));
    if (std::sin(e.beta) > 1e-12) {
        e.alpha = std::atan2(R(1, 2), R(0, 2));
        e.gamma = std::atan2(R(2, 1), -R(2, 0));
    } else if (R(2, 2) > 0) {
        e.alpha = std::atan2(R(1, 0), R(0, 0));
        e.gamma = 0.0;
    } else {
        e.alpha = std::atan2(-R(1, 0), -R(0, 0));
        e.gamma = 0.0;
    }
    return e;
}

GridPtr exact_grid(int L) {
    static std::mutex mtx;
    static std::map<int, GridPtr> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(L);
    if (it != cache.end()) return it->second;
    auto g = build_grid(L, L + 1, 2 * L + 2);
    cache.emplace(L, g);
    return g;
}

SpectralField rotate_polar(const SpectralField& c, double beta) {
    SpectralField out = c;
    for (int j = 0; j <= c.L(); ++j)
        for (int m = 1; m <= j; ++m) out(j, m) *= std::polar(1.0, m * beta);
    return out;
}

SpectralField reflect_longitude(const SpectralField& c) {
    const auto tr = transform_for(exact_grid(c.L()));
    const GridSpec& g = tr->grid();
    const GridField f = tr->synthesize(c);
    GridField r(tr->grid_ptr());
    for (int k = 0; k < g.n_lat; ++k)
        for (int i = 0; i < g.n_lon; ++i) r.at(k, i) = f.at(k, (g.n_lon - i) % g.n_lon);
    return tr->analyze(r, c.L());
}

SpectralField rotate_so3(const SpectralField& c, const Eigen::Matrix3d& R) {
    const auto tr = transform_for(exact_grid(c.L()));
    const GridSpec& g = tr->grid();
    const Eigen::Matrix3d Rinv = R.transpose();
    GridField r(tr->grid_ptr());
    for (int k = 0; k < g.n_lat; ++k) {
        const double z = g.mu_nodes[k], ct = g.cos_theta[k];
        for (int i = 0; i < g.n_lon; ++i) {
            const double ph = g.phi(i);
            const Eigen::Vector3d x(ct * std::cos(ph), ct * std::sin(ph), z);
            const Eigen::Vector3d y = Rinv * x;
            const double theta = std::atan2(y(2), std::hypot(y(0), y(1)));
            const double phi = std::atan2(y(1), y(0));
            r.at(k, i) = eval_point(c, phi, theta);
        }
    }
    return tr->analyze(r, c.L());
}

SpectralField rotate_so3(const SpectralField& c, const Euler& e) { return rotate_so3(c, rotation_matrix(e)); }

}  // namespace rhlab
