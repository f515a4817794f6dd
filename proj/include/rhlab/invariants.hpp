#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rhlab/harmonics.hpp"

namespace rhlab {

/// Moments I_2..I_7 of alpha sin(theta) + Y and the quantities derived from them.
struct MomentSet {
    double alpha = 0.0;
    std::array<double, 6> I{};  // I[0] = I_2, ..., I[5] = I_7
    double A = 0, B = 0, C = 0, D = 0, E = 0, F = 0;
    /// b_1..b_6; b_3..b_6 divide by powers of alpha and are NaN when alpha == 0.
    std::array<double, 6> b{};
    bool has_alpha_terms = false;
};

/// Closed-form polynomial moments of alpha sin(theta) + Y, Y = y in the E2 basis.
MomentSet moments_analytic(double alpha, const E2Coeffs& y);

/// Fills A..F and b_1..b_6 from given integrals I_2..I_7.
MomentSet moment_set_from_integrals(double alpha, const std::array<double, 6>& I);

/// Integrals of f^m for m = 2..m_max on a grid exact for the m-th power.
std::vector<double> moments_numeric(const SpectralField& f, int m_max);

struct ReducedInvariants {
    double a = 0, u = 0, v = 0, w = 0;
};

ReducedInvariants reduced_invariants(const E2Coeffs& y);

/// An E2 field with prescribed reduced invariants; requires u > 0 or w == 0, and w^2 <= u^2 v.
E2Coeffs e2_from_reduced(const ReducedInvariants& r);

struct AbcdeResiduals {
    std::array<double, 6> residual{};   // left side minus right side
    std::array<double, 6> magnitude{};  // sum of absolute values of the terms
    double max_relative() const;
};

/// Residuals of the six identities linking (a,u,v,w), alpha and A..F.
AbcdeResiduals abcde_residuals(const ReducedInvariants& r, const MomentSet& ms);
AbcdeResiduals verify_abcde_system(double alpha, const E2Coeffs& y);

/// Six polynomial equations in (x1, x2, x3, x4) = (a, u, v, w).
struct PolySystem {
    double alpha = 0.0;
    std::array<double, 6> b{};
};

PolySystem polysystem_from_moments(const MomentSet& ms);

enum class PolyBranch { generic, degenerate_quadratic };

struct PolySolution {
    std::vector<std::array<double, 4>> roots;
    PolyBranch branch = PolyBranch::generic;
    std::string report;
};

/// |residual| / max(1, sum |terms|) of each equation at x.
std::array<double, 6> polysys_relative_residuals(const PolySystem& s, const std::array<double, 4>& x);

PolySolution solve_polysys(const PolySystem& s);

bool same_h_orbit_deg1(const Degree1& y, const Degree1& yp);
bool same_h_orbit_deg2(const E2Coeffs& y, const E2Coeffs& yp);

/// Y(x) = x^T A x for x = (cos t cos p, cos t sin p, sin t).
Eigen::Matrix3d quadratic_form(const E2Coeffs& y);

/// (p1, p0) with det(lambda I - A) = lambda^3 + p1 lambda + p0.
std::pair<double, double> char_poly(const E2Coeffs& y);

bool same_o3_orbit(const E2Coeffs& y, const E2Coeffs& yp);

}  // namespace rhlab
