#include "rhlab/operators.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rhlab {

SpectralField laplacian(const SpectralField& c) {
    SpectralField out = c;
    for (int j = 0; j <= c.L(); ++j)
        for (int m = 0; m <= j; ++m) out(j, m) *= -double(j) * (j + 1);
    return out;
}

SpectralField green(const SpectralField& c) {
    if (c.L() < 0) return c;
    if (std::abs(c(0, 0)) > 1e-12 * std::max(1.0, c.norm()))
        throw std::invalid_argument("green: input must have zero mean");
    SpectralField out = c;
    out(0, 0) = 0.0;
    for (int j = 1; j <= c.L(); ++j)
        for (int m = 0; m <= j; ++m) out(j, m) /= double(j) * (j + 1);
    return out;
}

SpectralField project_band(const SpectralField& c, int j, bool complement) {
    SpectralField out = c;
    for (int jj = 0; jj <= c.L(); ++jj) {
        const bool keep = complement ? (jj > j) : (jj <= j);
        if (!keep)
            for (int m = 0; m <= jj; ++m) out(jj, m) = 0.0;
    }
    return out;
}

SpectralField sin_theta(int L, double s) {
    if (L < 1) throw std::invalid_argument("sin_theta: L must be >= 1");
    SpectralField c(L);
    c(1, 0) = s * std::sqrt(4.0 * std::numbers::pi / 3.0);
    return c;
}

SpectralField stream_function(const SpectralField& zeta, double omega) {
    SpectralField psi = green(zeta);
    psi *= -1.0;
    if (zeta.L() >= 1) psi(1, 0) += omega * std::sqrt(4.0 * std::numbers::pi / 3.0);
    return psi;
}

std::pair<GridField, GridField> velocity(const SpectralField& zeta, double omega) {
    const SpectralField psi = stream_function(zeta, omega);
    const auto tr = transform_for(default_grid(zeta.L()));
    GridField u_phi = tr->synthesize(psi, Transform::Deriv::theta);
    for (double& v : u_phi.values) v = -v;
    GridField u_theta = tr->synthesize(psi, Transform::Deriv::phi);
    const GridSpec& g = tr->grid();
    for (int k = 0; k < g.n_lat; ++k)
        for (int i = 0; i < g.n_lon; ++i) u_theta.at(k, i) /= g.cos_theta[k];
    return {std::move(u_phi), std::move(u_theta)};
}

SpectralField transport_tendency(const SpectralField& zeta, const SpectralField& psi) {
    const int L = zeta.L();
    if (psi.L() > L) throw std::invalid_argument("transport_tendency: stream degree exceeds field degree");
    const auto tr = transform_for(default_grid(L));
    const GridSpec& g = tr->grid();
    const size_t nF = static_cast<size_t>(g.n_lat) * tr->nf();
    const size_t nG = static_cast<size_t>(g.n_lat) * g.n_lon;

    std::vector<cplx> F(nF);
    std::vector<double> zt(nG), zp(nG), pt(nG), pp(nG);
    tr->to_fourier(zeta, Transform::Deriv::theta, F.data());
    tr->fourier_to_grid(F.data(), zt.data());
    tr->to_fourier(zeta, Transform::Deriv::phi, F.data());
    tr->fourier_to_grid(F.data(), zp.data());
    tr->to_fourier(psi, Transform::Deriv::theta, F.data());
    tr->fourier_to_grid(F.data(), pt.data());
    tr->to_fourier(psi, Transform::Deriv::phi, F.data());
    tr->fourier_to_grid(F.data(), pp.data());

    for (int k = 0; k < g.n_lat; ++k) {
        const double inv = -1.0 / g.cos_theta[k];
        const size_t off = static_cast<size_t>(k) * g.n_lon;
        for (int i = 0; i < g.n_lon; ++i) {
            const size_t ix = off + i;
            zt[ix] = inv * (pp[ix] * zt[ix] - pt[ix] * zp[ix]);
        }
    }
    tr->grid_to_fourier(zt.data(), F.data());
    return tr->from_fourier(F.data(), L);
}

SpectralField advection_tendency(const SpectralField& zeta, double omega) {
    return transport_tendency(zeta, stream_function(zeta, omega));
}

double poincare_gap(const SpectralField& f, int j) {
    if (j < 0) throw std::invalid_argument("poincare_gap: j must be non-negative");
    // Per degree i > j the summand is |P_i f|^2 (1/((j+1)(j+2)) - 1/(i(i+1))) >= 0, and 0 at i = j+1.
    const double lead = 1.0 / ((j + 1.0) * (j + 2.0));
    double gap = 0.0;
    for (int i = j + 1; i <= f.L(); ++i) gap += f.degree_norm2(i) * (lead - 1.0 / (double(i) * (i + 1.0)));
    return gap;
}

}  // namespace rhlab
