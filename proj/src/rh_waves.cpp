#include "rhlab/rh_waves.hpp"

#include <cmath>
#include <stdexcept>

#include "rhlab/operators.hpp"
#include "rhlab/rotations.hpp"

namespace rhlab {

double rh_speed(double omega, double alpha, int j) { return alpha * (0.5 - 1.0 / (double(j) * (j + 1))) - omega; }

RHState make_rh(double omega, double alpha, const SpectralField& Y) {
    const double total = Y.norm2();
    if (total == 0.0) throw std::invalid_argument("make_rh: Y must be nonzero");
    int jmax = 0;
    double best = -1.0;
    for (int j = 0; j <= Y.L(); ++j) {
        const double e = Y.degree_norm2(j);
        if (e > best) {
            best = e;
            jmax = j;
        }
    }
    if (jmax < 1) throw std::invalid_argument("make_rh: Y must have degree >= 1");
    if (total - best > 1e-12 * total) throw std::invalid_argument("make_rh: Y spans more than one degree");
    RHState s;
    s.omega = omega;
    s.alpha = alpha;
    s.degree_j = jmax;
    s.Y = project_band(project_band(Y, jmax, false), jmax - 1, true);
    s.speed_c = rh_speed(omega, alpha, jmax);
    return s;
}

SpectralField exact_state(const RHState& s, double t) {
    SpectralField z = rotate_polar(s.Y, -s.speed_c * t);
    z += sin_theta(s.Y.L(), s.alpha);
    return z;
}

bool is_steady(const RHState& s, double tol) {
    double nonzonal = 0.0;
    for (int m = 1; m <= s.degree_j; ++m) nonzonal += 2.0 * std::norm(s.Y(s.degree_j, m));
    return nonzonal < tol || std::abs(s.speed_c) < tol;
}

}  // namespace rhlab
