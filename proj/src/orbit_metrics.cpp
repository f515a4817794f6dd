#include "rhlab/orbit_metrics.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_min.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rhlab/invariants.hpp"

namespace rhlab {

namespace {

constexpr double kPi = std::numbers::pi;

GridPtr margin_grid(int L) {
    static std::mutex mtx;
    static std::map<int, GridPtr> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(L);
    if (it != cache.end()) return it->second;
    auto g = build_grid(L, 4 * (L + 1), 8 * (L + 1));
    cache.emplace(L, g);
    return g;
}

double grid_lp_norm(const SpectralField& d, double p) {
    const GridField g = synthesize(d, margin_grid(d.L()));
    GridField a = g;
    for (double& v : a.values) v = std::pow(std::abs(v), p);
    return std::pow(std::max(0.0, integrate(a)), 1.0 / p);
}

double wrap_angle(double b) {
    b = std::fmod(b, 2.0 * kPi);
    if (b <= -kPi) b += 2.0 * kPi;
    if (b > kPi) b -= 2.0 * kPi;
    return b;
}

// Polar-orbit minimisation for one (possibly reflected) target; returns (distance, beta) with the
// orbit point rotate_polar(t, beta).
std::pair<double, double> polar_min(const SpectralField& f, const SpectralField& t, double p) {
    const int L = f.L();
    const int N = 4 * L + 4;
    if (p == 2.0) {
        // <rotate_polar(t, b), f> = const + 2 Re sum_m S_m e^{imb}
        std::vector<cplx> S(L + 1, 0.0);
        for (int j = 1; j <= L; ++j)
            for (int m = 1; m <= j; ++m) S[m] += t(j, m) * std::conj(f(j, m));
        auto G = [&](double b, int deriv) {
            double s = 0.0;
            for (int m = 1; m <= L; ++m) {
                cplx v = S[m] * std::polar(1.0, m * b);
                if (deriv == 1) v *= cplx(0.0, m);
                if (deriv == 2) v *= -double(m) * m;
                s += v.real();
            }
            return s;
        };
        std::vector<std::pair<double, double>> samples;  // (-G, beta)
        for (int i = 0; i < N; ++i) {
            const double b = 2.0 * kPi * i / N;
            samples.push_back({-G(b, 0), b});
        }
        std::sort(samples.begin(), samples.end());
        double best_b = samples[0].second, best_g = -samples[0].first;
        double scale = 0.0;
        for (const cplx& v : S) scale += std::abs(v);
        // Newton on G' from the two best samples; a step is rejected only if G drops by more than roundoff.
        for (int c = 0; c < std::min<int>(2, samples.size()); ++c) {
            double b = samples[c].second, g = -samples[c].first;
            for (int it = 0; it < 20; ++it) {
                const double d2 = G(b, 2);
                if (d2 >= 0.0) break;
                const double nb = b - G(b, 1) / d2;
                const double ng = G(nb, 0);
                if (ng < g - 1e-13 * scale) break;
                const bool done = std::abs(nb - b) < 1e-15;
                b = nb;
                g = ng;
                if (done) break;
            }
            if (g > best_g) {
                best_g = g;
                best_b = b;
            }
        }
        return {(rotate_polar(t, best_b) - f).norm(), best_b};
    }
    auto obj = [&](double b) { return lp_distance(rotate_polar(t, b), f, p); };
    double best_b = 0.0, best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < N; ++i) {
        const double b = 2.0 * kPi * i / N;
        const double v = obj(b);
        if (v < best) {
            best = v;
            best_b = b;
        }
    }
    // Golden section only compares values, so it also resolves the kink of an exact orbit member.
    const double h = 2.0 * kPi / N;
    const double lo = obj(best_b - h), hi = obj(best_b + h);
    if (!(best < lo && best < hi)) return {best, best_b};
    gsl_function fn{[](double b, void* o) { return (*static_cast<decltype(obj)*>(o))(b); }, &obj};
    gsl_min_fminimizer* m = gsl_min_fminimizer_alloc(gsl_min_fminimizer_goldensection);
    if (gsl_min_fminimizer_set_with_values(m, &fn, best_b, best, best_b - h, lo, best_b + h, hi) == GSL_SUCCESS) {
        for (int it = 0; it < 200; ++it) {
            if (gsl_min_fminimizer_iterate(m) != GSL_SUCCESS) break;
            if (gsl_min_test_interval(gsl_min_fminimizer_x_lower(m), gsl_min_fminimizer_x_upper(m), 1e-15, 0.0) ==
                GSL_SUCCESS)
                break;
        }
        if (gsl_min_fminimizer_f_minimum(m) < best) {
            best = gsl_min_fminimizer_f_minimum(m);
            best_b = gsl_min_fminimizer_x_minimum(m);
        }
    }
    gsl_min_fminimizer_free(m);
    return {best, best_b};
}

// ---------------------------------------------------------------- SO(3)

Eigen::Matrix3d skew_exp(const Eigen::Vector3d& v) {
    const double th = v.norm();
    if (th == 0.0) return Eigen::Matrix3d::Identity();
    return Eigen::AngleAxisd(th, v / th).toRotationMatrix();
}

struct So3Problem {
    const SpectralField* f;
    SpectralField t;  // target truncated to its own degree
    double p;
    double f_high2;   // squared L2 mass of f above the target's degree
    Eigen::Matrix3d R0;
};

double so3_objective(const So3Problem& P, const Eigen::Matrix3d& R) {
    const SpectralField rt = rotate_so3(P.t, R);
    if (P.p == 2.0) {
        const SpectralField d = rt - P.f->truncated(P.t.L());
        return std::sqrt(d.norm2() + P.f_high2);
    }
    return lp_distance(rt.truncated(P.f->L()), *P.f, P.p);
}

double gsl_so3_objective(const gsl_vector* x, void* params) {
    const auto* P = static_cast<const So3Problem*>(params);
    const Eigen::Vector3d v(gsl_vector_get(x, 0), gsl_vector_get(x, 1), gsl_vector_get(x, 2));
    return so3_objective(*P, skew_exp(v) * P->R0);
}

// Nelder-Mead over a rotation vector v with R = exp([v]) R0.
std::pair<double, Eigen::Matrix3d> refine_so3(So3Problem& P, const Eigen::Matrix3d& R0) {
    P.R0 = R0;
    gsl_multimin_function fn{&gsl_so3_objective, 3, &P};
    gsl_vector* x = gsl_vector_calloc(3);
    gsl_vector* step = gsl_vector_alloc(3);
    gsl_vector_set_all(step, 0.05);
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 3);
    gsl_multimin_fminimizer_set(s, &fn, x, step);
    for (int it = 0; it < 2000; ++it) {
        if (gsl_multimin_fminimizer_iterate(s)) break;
        if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-12) == GSL_SUCCESS) break;
    }
    const gsl_vector* xm = gsl_multimin_fminimizer_x(s);
    const Eigen::Vector3d v(gsl_vector_get(xm, 0), gsl_vector_get(xm, 1), gsl_vector_get(xm, 2));
    const Eigen::Matrix3d R = skew_exp(v) * R0;
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(x);
    gsl_vector_free(step);
    return {so3_objective(P, R), R};
}

// Eigen-decomposition sorted ascending; returns false when two eigenvalues are within 1e-8.
bool eigenframe(const Eigen::Matrix3d& A, Eigen::Matrix3d& V) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(A);
    const auto& ev = es.eigenvalues();
    V = es.eigenvectors();
    return (ev(1) - ev(0)) > 1e-8 && (ev(2) - ev(1)) > 1e-8;
}

bool lex_less(const Euler& a, const Euler& b) {
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    if (a.beta != b.beta) return a.beta < b.beta;
    return a.gamma < b.gamma;
}

}  // namespace

double lp_distance(const SpectralField& f, const SpectralField& g, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("lp_distance: p must exceed 1");
    if (f.L() != g.L()) throw std::invalid_argument("lp_distance: truncation mismatch");
    const SpectralField d = f - g;
    const double grid = grid_lp_norm(d, p);
    if (p == 2.0) {
        const double spec = d.norm();
        if (std::abs(grid - spec) > 1e-8 * std::max(1.0, spec))
            throw std::logic_error("lp_distance: grid and spectral L2 norms disagree");
        return spec;
    }
    return grid;
}

PolarOrbitDistance dist_polar_orbit(const SpectralField& f, const SpectralField& target, double p,
                                    bool include_reflection) {
    if (!(p > 1.0)) throw std::invalid_argument("dist_polar_orbit: p must exceed 1");
    if (f.L() != target.L()) throw std::invalid_argument("dist_polar_orbit: truncation mismatch");
    PolarOrbitDistance out;
    const auto [d, b] = polar_min(f, target, p);
    out.distance = d;
    out.beta_star = wrap_angle(-b);
    if (include_reflection) {
        const auto [dr, br] = polar_min(f, reflect_longitude(target), p);
        if (dr < out.distance) {
            out.distance = dr;
            out.beta_star = wrap_angle(-br);
            out.reflected = true;
        }
    }
    return out;
}

So3OrbitDistance dist_so3_orbit(const SpectralField& f, const SpectralField& target, double p) {
    if (!(p > 1.0)) throw std::invalid_argument("dist_so3_orbit: p must exceed 1");
    if (f.L() != target.L()) throw std::invalid_argument("dist_so3_orbit: truncation mismatch");
    So3Problem P;
    P.f = &f;
    const double tscale = std::max(1e-300, target.norm());
    P.t = target.truncated(std::max(1, target.effective_degree(1e-15 * tscale)));
    P.p = p;
    P.f_high2 = f.norm2() - f.truncated(P.t.L()).norm2();
    P.f_high2 = std::max(0.0, P.f_high2);

    std::vector<Eigen::Matrix3d> starts;
    Eigen::Matrix3d Vt, Vf;
    const bool ok_t = eigenframe(quadratic_form(e2_component(target)), Vt);
    const bool ok_f = eigenframe(quadratic_form(e2_component(f)), Vf);
    So3OrbitDistance out;
    if (ok_t && ok_f) {
        // target(M x) matches f(x) when M^T A_t M = A_f, M = Vt S Vf^T; the active rotation is R = M^T.
        const double sign = Vt.determinant() * Vf.determinant();
        for (int s1 : {1, -1})
            for (int s2 : {1, -1}) {
                const double s3 = sign * s1 * s2;
                const Eigen::Vector3d S(s1, s2, s3);
                starts.push_back(Vf * S.asDiagonal() * Vt.transpose());
            }
    } else {
        out.degenerate = true;
        double best = std::numeric_limits<double>::infinity();
        Eigen::Matrix3d bestR = Eigen::Matrix3d::Identity();
        const int n = 16;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const Euler e{2.0 * kPi * i / n, kPi * (j + 0.5) / n, 2.0 * kPi * k / n};
                    const Eigen::Matrix3d R = rotation_matrix(e);
                    const double v = so3_objective(P, R);
                    if (v < best) {
                        best = v;
                        bestR = R;
                    }
                }
        starts.push_back(bestR);
    }

    double best = std::numeric_limits<double>::infinity();
    Euler best_e;
    for (const auto& R0 : starts) {
        const auto [v, R] = refine_so3(P, R0);
        const Euler e = euler_from_matrix(R);
        if (v < best || (v == best && lex_less(e, best_e))) {
            best = v;
            best_e = e;
        }
    }
    // Certificate: re-evaluate the distance at the reported angles.
    out.euler_star = best_e;
    out.distance = so3_objective(P, rotation_matrix(best_e));
    return out;
}

}  // namespace rhlab
