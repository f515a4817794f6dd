#include "rhlab/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rhlab {

namespace {

constexpr double kPi = std::numbers::pi;

struct Monomial {
    double coef;
    std::array<int, 6> exps;  // powers of (alpha, a, b, c, d, e)
};

struct MomentPolynomial {
    double num, den;  // prefactor num * pi / den
    std::vector<Monomial> terms;
};

// Closed-form moments int (alpha sin(theta) + Y)^m, m = 2..7.
const std::vector<MomentPolynomial>& moment_table() {
    static const std::vector<MomentPolynomial> table = {
        // I_2 = (4 pi / 15) * sum
        {4.0, 15.0, {
            {5, {2, 0, 0, 0, 0, 0}}, {12, {0, 2, 0, 0, 0, 0}}, {4, {0, 0, 2, 0, 0, 0}},
            {4, {0, 0, 0, 2, 0, 0}}, {4, {0, 0, 0, 0, 2, 0}}, {4, {0, 0, 0, 0, 0, 2}},
        }},
        // I_3 = (16 pi / 35) * sum
        {16.0, 35.0, {
            {7, {2, 1, 0, 0, 0, 0}}, {4, {0, 3, 0, 0, 0, 0}}, {2, {0, 1, 2, 0, 0, 0}},
            {2, {0, 1, 0, 2, 0, 0}}, {-4, {0, 1, 0, 0, 2, 0}}, {-4, {0, 1, 0, 0, 0, 2}},
            {2, {0, 0, 2, 0, 1, 0}}, {4, {0, 0, 1, 1, 0, 1}}, {-2, {0, 0, 0, 2, 1, 0}},
        }},
        // I_4 = (4 pi / 105) * sum
        {4.0, 105.0, {
            {21, {4, 0, 0, 0, 0, 0}}, {264, {2, 2, 0, 0, 0, 0}}, {72, {2, 0, 2, 0, 0, 0}},
            {72, {2, 0, 0, 2, 0, 0}}, {24, {2, 0, 0, 0, 2, 0}}, {24, {2, 0, 0, 0, 0, 2}},
            {144, {0, 4, 0, 0, 0, 0}}, {96, {0, 2, 2, 0, 0, 0}}, {96, {0, 2, 0, 2, 0, 0}},
            {96, {0, 2, 0, 0, 2, 0}}, {96, {0, 2, 0, 0, 0, 2}}, {16, {0, 0, 4, 0, 0, 0}},
            {32, {0, 0, 2, 2, 0, 0}}, {32, {0, 0, 2, 0, 2, 0}}, {32, {0, 0, 2, 0, 0, 2}},
            {16, {0, 0, 0, 4, 0, 0}}, {32, {0, 0, 0, 2, 2, 0}}, {32, {0, 0, 0, 2, 0, 2}},
            {16, {0, 0, 0, 0, 4, 0}}, {32, {0, 0, 0, 0, 2, 2}}, {16, {0, 0, 0, 0, 0, 4}},
        }},
        // I_5 = (32 pi / 231) * sum
        {32.0, 231.0, {
            {33, {4, 1, 0, 0, 0, 0}}, {176, {2, 3, 0, 0, 0, 0}}, {66, {2, 1, 2, 0, 0, 0}},
            {66, {2, 1, 0, 2, 0, 0}}, {22, {2, 0, 2, 0, 1, 0}}, {44, {2, 0, 1, 1, 0, 1}},
            {-22, {2, 0, 0, 2, 1, 0}}, {48, {0, 5, 0, 0, 0, 0}}, {40, {0, 3, 2, 0, 0, 0}},
            {40, {0, 3, 0, 2, 0, 0}}, {-32, {0, 3, 0, 0, 2, 0}}, {-32, {0, 3, 0, 0, 0, 2}},
            {24, {0, 2, 2, 0, 1, 0}}, {48, {0, 2, 1, 1, 0, 1}}, {-24, {0, 2, 0, 2, 1, 0}},
            {8, {0, 1, 4, 0, 0, 0}}, {16, {0, 1, 2, 2, 0, 0}}, {-8, {0, 1, 2, 0, 2, 0}},
            {-8, {0, 1, 2, 0, 0, 2}}, {8, {0, 1, 0, 4, 0, 0}}, {-8, {0, 1, 0, 2, 2, 0}},
            {-8, {0, 1, 0, 2, 0, 2}}, {-16, {0, 1, 0, 0, 4, 0}}, {-32, {0, 1, 0, 0, 2, 2}},
            {-16, {0, 1, 0, 0, 0, 4}}, {8, {0, 0, 4, 0, 1, 0}}, {16, {0, 0, 3, 1, 0, 1}},
            {8, {0, 0, 2, 0, 3, 0}}, {8, {0, 0, 2, 0, 1, 2}}, {16, {0, 0, 1, 3, 0, 1}},
            {16, {0, 0, 1, 1, 2, 1}}, {16, {0, 0, 1, 1, 0, 3}}, {-8, {0, 0, 0, 4, 1, 0}},
            {-8, {0, 0, 0, 2, 3, 0}}, {-8, {0, 0, 0, 2, 1, 2}},
        }},
        // I_6 = (4 pi / 3003) * sum
        {4.0, 3003.0, {
            {429, {6, 0, 0, 0, 0, 0}}, {15444, {4, 2, 0, 0, 0, 0}}, {2860, {4, 0, 2, 0, 0, 0}},
            {2860, {4, 0, 0, 2, 0, 0}}, {572, {4, 0, 0, 0, 2, 0}}, {572, {4, 0, 0, 0, 0, 2}},
            {45552, {2, 4, 0, 0, 0, 0}}, {26208, {2, 2, 2, 0, 0, 0}}, {26208, {2, 2, 0, 2, 0, 0}},
            {3744, {2, 2, 0, 0, 2, 0}}, {3744, {2, 2, 0, 0, 0, 2}}, {4992, {2, 1, 2, 0, 1, 0}},
            {9984, {2, 1, 1, 1, 0, 1}}, {-4992, {2, 1, 0, 2, 1, 0}}, {3120, {2, 0, 4, 0, 0, 0}},
            {6240, {2, 0, 2, 2, 0, 0}}, {3744, {2, 0, 2, 0, 2, 0}}, {3744, {2, 0, 2, 0, 0, 2}},
            {3120, {2, 0, 0, 4, 0, 0}}, {3744, {2, 0, 0, 2, 2, 0}}, {3744, {2, 0, 0, 2, 0, 2}},
            {624, {2, 0, 0, 0, 4, 0}}, {1248, {2, 0, 0, 0, 2, 2}}, {624, {2, 0, 0, 0, 0, 4}},
            {10176, {0, 6, 0, 0, 0, 0}}, {10176, {0, 4, 2, 0, 0, 0}}, {10176, {0, 4, 0, 2, 0, 0}},
            {5568, {0, 4, 0, 0, 2, 0}}, {5568, {0, 4, 0, 0, 0, 2}}, {1536, {0, 3, 2, 0, 1, 0}},
            {3072, {0, 3, 1, 1, 0, 1}}, {-1536, {0, 3, 0, 2, 1, 0}}, {3264, {0, 2, 4, 0, 0, 0}},
            {6528, {0, 2, 2, 2, 0, 0}}, {4224, {0, 2, 2, 0, 2, 0}}, {4224, {0, 2, 2, 0, 0, 2}},
            {3264, {0, 2, 0, 4, 0, 0}}, {4224, {0, 2, 0, 2, 2, 0}}, {4224, {0, 2, 0, 2, 0, 2}},
            {4416, {0, 2, 0, 0, 4, 0}}, {8832, {0, 2, 0, 0, 2, 2}}, {4416, {0, 2, 0, 0, 0, 4}},
            {768, {0, 1, 4, 0, 1, 0}}, {1536, {0, 1, 3, 1, 0, 1}}, {-1536, {0, 1, 2, 0, 3, 0}},
            {-1536, {0, 1, 2, 0, 1, 2}}, {1536, {0, 1, 1, 3, 0, 1}}, {-3072, {0, 1, 1, 1, 2, 1}},
            {-3072, {0, 1, 1, 1, 0, 3}}, {-768, {0, 1, 0, 4, 1, 0}}, {1536, {0, 1, 0, 2, 3, 0}},
            {1536, {0, 1, 0, 2, 1, 2}}, {320, {0, 0, 6, 0, 0, 0}}, {960, {0, 0, 4, 2, 0, 0}},
            {1344, {0, 0, 4, 0, 2, 0}}, {960, {0, 0, 4, 0, 0, 2}}, {1536, {0, 0, 3, 1, 1, 1}},
            {960, {0, 0, 2, 4, 0, 0}}, {1152, {0, 0, 2, 2, 2, 0}}, {3456, {0, 0, 2, 2, 0, 2}},
            {960, {0, 0, 2, 0, 4, 0}}, {1920, {0, 0, 2, 0, 2, 2}}, {960, {0, 0, 2, 0, 0, 4}},
            {-1536, {0, 0, 1, 3, 1, 1}}, {320, {0, 0, 0, 6, 0, 0}}, {1344, {0, 0, 0, 4, 2, 0}},
            {960, {0, 0, 0, 4, 0, 2}}, {960, {0, 0, 0, 2, 4, 0}}, {1920, {0, 0, 0, 2, 2, 2}},
            {960, {0, 0, 0, 2, 0, 4}}, {320, {0, 0, 0, 0, 6, 0}}, {960, {0, 0, 0, 0, 4, 2}},
            {960, {0, 0, 0, 0, 2, 4}}, {320, {0, 0, 0, 0, 0, 6}},
        }},
        // I_7 = (16 pi / 429) * sum
        {16.0, 429.0, {
            {143, {6, 1, 0, 0, 0, 0}}, {2028, {4, 3, 0, 0, 0, 0}}, {650, {4, 1, 2, 0, 0, 0}},
            {650, {4, 1, 0, 2, 0, 0}}, {52, {4, 1, 0, 0, 2, 0}}, {52, {4, 1, 0, 0, 0, 2}},
            {130, {4, 0, 2, 0, 1, 0}}, {260, {4, 0, 1, 1, 0, 1}}, {-130, {4, 0, 0, 2, 1, 0}},
            {3792, {2, 5, 0, 0, 0, 0}}, {2736, {2, 3, 2, 0, 0, 0}}, {2736, {2, 3, 0, 2, 0, 0}},
            {96, {2, 3, 0, 0, 2, 0}}, {96, {2, 3, 0, 0, 0, 2}}, {816, {2, 2, 2, 0, 1, 0}},
            {1632, {2, 2, 1, 1, 0, 1}}, {-816, {2, 2, 0, 2, 1, 0}}, {480, {2, 1, 4, 0, 0, 0}},
            {960, {2, 1, 2, 2, 0, 0}}, {144, {2, 1, 2, 0, 2, 0}}, {144, {2, 1, 2, 0, 0, 2}},
            {480, {2, 1, 0, 4, 0, 0}}, {144, {2, 1, 0, 2, 2, 0}}, {144, {2, 1, 0, 2, 0, 2}},
            {-48, {2, 1, 0, 0, 4, 0}}, {-96, {2, 1, 0, 0, 2, 2}}, {-48, {2, 1, 0, 0, 0, 4}},
            {240, {2, 0, 4, 0, 1, 0}}, {480, {2, 0, 3, 1, 0, 1}}, {144, {2, 0, 2, 0, 3, 0}},
            {144, {2, 0, 2, 0, 1, 2}}, {480, {2, 0, 1, 3, 0, 1}}, {288, {2, 0, 1, 1, 2, 1}},
            {288, {2, 0, 1, 1, 0, 3}}, {-240, {2, 0, 0, 4, 1, 0}}, {-144, {2, 0, 0, 2, 3, 0}},
            {-144, {2, 0, 0, 2, 1, 2}}, {576, {0, 7, 0, 0, 0, 0}}, {672, {0, 5, 2, 0, 0, 0}},
            {672, {0, 5, 0, 2, 0, 0}}, {-192, {0, 5, 0, 0, 2, 0}}, {-192, {0, 5, 0, 0, 0, 2}},
            {288, {0, 4, 2, 0, 1, 0}}, {576, {0, 4, 1, 1, 0, 1}}, {-288, {0, 4, 0, 2, 1, 0}},
            {256, {0, 3, 4, 0, 0, 0}}, {512, {0, 3, 2, 2, 0, 0}}, {-64, {0, 3, 2, 0, 2, 0}},
            {-64, {0, 3, 2, 0, 0, 2}}, {256, {0, 3, 0, 4, 0, 0}}, {-64, {0, 3, 0, 2, 2, 0}},
            {-64, {0, 3, 0, 2, 0, 2}}, {-320, {0, 3, 0, 0, 4, 0}}, {-640, {0, 3, 0, 0, 2, 2}},
            {-320, {0, 3, 0, 0, 0, 4}}, {192, {0, 2, 4, 0, 1, 0}}, {384, {0, 2, 3, 1, 0, 1}},
            {192, {0, 2, 2, 0, 3, 0}}, {192, {0, 2, 2, 0, 1, 2}}, {384, {0, 2, 1, 3, 0, 1}},
            {384, {0, 2, 1, 1, 2, 1}}, {384, {0, 2, 1, 1, 0, 3}}, {-192, {0, 2, 0, 4, 1, 0}},
            {-192, {0, 2, 0, 2, 3, 0}}, {-192, {0, 2, 0, 2, 1, 2}}, {32, {0, 1, 6, 0, 0, 0}},
            {96, {0, 1, 4, 2, 0, 0}}, {96, {0, 1, 2, 4, 0, 0}}, {-96, {0, 1, 2, 0, 4, 0}},
            {-192, {0, 1, 2, 0, 2, 2}}, {-96, {0, 1, 2, 0, 0, 4}}, {32, {0, 1, 0, 6, 0, 0}},
            {-96, {0, 1, 0, 2, 4, 0}}, {-192, {0, 1, 0, 2, 2, 2}}, {-96, {0, 1, 0, 2, 0, 4}},
            {-64, {0, 1, 0, 0, 6, 0}}, {-192, {0, 1, 0, 0, 4, 2}}, {-192, {0, 1, 0, 0, 2, 4}},
            {-64, {0, 1, 0, 0, 0, 6}}, {32, {0, 0, 6, 0, 1, 0}}, {64, {0, 0, 5, 1, 0, 1}},
            {32, {0, 0, 4, 2, 1, 0}}, {64, {0, 0, 4, 0, 3, 0}}, {64, {0, 0, 4, 0, 1, 2}},
            {128, {0, 0, 3, 3, 0, 1}}, {128, {0, 0, 3, 1, 2, 1}}, {128, {0, 0, 3, 1, 0, 3}},
            {-32, {0, 0, 2, 4, 1, 0}}, {32, {0, 0, 2, 0, 5, 0}}, {64, {0, 0, 2, 0, 3, 2}},
            {32, {0, 0, 2, 0, 1, 4}}, {64, {0, 0, 1, 5, 0, 1}}, {128, {0, 0, 1, 3, 2, 1}},
            {128, {0, 0, 1, 3, 0, 3}}, {64, {0, 0, 1, 1, 4, 1}}, {128, {0, 0, 1, 1, 2, 3}},
            {64, {0, 0, 1, 1, 0, 5}}, {-32, {0, 0, 0, 6, 1, 0}}, {-64, {0, 0, 0, 4, 3, 0}},
            {-64, {0, 0, 0, 4, 1, 2}}, {-32, {0, 0, 0, 2, 5, 0}}, {-64, {0, 0, 0, 2, 3, 2}},
            {-32, {0, 0, 0, 2, 1, 4}},
        }},
    };
    return table;
}

double eval_moment(const MomentPolynomial& p, const std::array<double, 6>& x) {
    double s = 0.0;
    for (const auto& t : p.terms) {
        double v = t.coef;
        for (int i = 0; i < 6; ++i)
            for (int k = 0; k < t.exps[i]; ++k) v *= x[i];
        s += v;
    }
    return p.num * kPi / p.den * s;
}

double rel_scale(std::initializer_list<double> xs) {
    double s = 1.0;
    for (double x : xs) s = std::max(s, std::abs(x));
    return s;
}

}  // namespace

MomentSet moment_set_from_integrals(double alpha, const std::array<double, 6>& I) {
    MomentSet ms;
    ms.alpha = alpha;
    ms.I = I;
    ms.A = 15.0 / (4.0 * kPi) * I[0];
    ms.B = 35.0 / (16.0 * kPi) * I[1];
    ms.C = 105.0 / (4.0 * kPi) * I[2];
    ms.D = 231.0 / (32.0 * kPi) * I[3];
    ms.E = 3003.0 / (4.0 * kPi) * I[4];
    ms.F = 429.0 / (16.0 * kPi) * I[5];
    const double a2 = alpha * alpha;
    const double A = ms.A, B = ms.B, C = ms.C, D = ms.D, E = ms.E, F = ms.F;
    ms.b[0] = (A - 5.0 * a2) / 4.0;
    ms.b[1] = B;
    ms.has_alpha_terms = alpha != 0.0;
    if (ms.has_alpha_terms) {
        ms.b[2] = (C - A * A) / (16.0 * a2) + a2 / 4.0;
        ms.b[3] = (D - A * B) / (2.0 * a2);
        // The fifth identity carries alpha^4 on its left side.
        ms.b[4] = (6.0 * A * D - 6.0 * A * A * B + 3.0 * B * C - 3.0 * F) / (48.0 * a2 * a2);
        ms.b[5] = (17.0 * A * C + 96.0 * B * B - 12.0 * A * A * A - E) / (16.0 * a2) + 9.0 * a2 * a2;
    } else {
        for (int i = 2; i < 6; ++i) ms.b[i] = std::numeric_limits<double>::quiet_NaN();
    }
    return ms;
}

MomentSet moments_analytic(double alpha, const E2Coeffs& y) {
    const std::array<double, 6> x{alpha, y.a, y.b, y.c, y.d, y.e};
    std::array<double, 6> I{};
    const auto& table = moment_table();
    for (int k = 0; k < 6; ++k) I[k] = eval_moment(table[k], x);
    return moment_set_from_integrals(alpha, I);
}

std::vector<double> moments_numeric(const SpectralField& f, int m_max) {
    if (m_max < 2) throw std::invalid_argument("moments_numeric: m_max must be >= 2");
    const int L = std::max(f.L(), 1);
    const GridPtr grid = build_grid(L, m_max * L + 1, 2 * m_max * L + 2);
    const GridField g = synthesize(f.truncated(L), grid);
    std::vector<double> out;
    GridField p = g;
    for (int m = 2; m <= m_max; ++m) {
        for (size_t i = 0; i < p.values.size(); ++i) p.values[i] *= g.values[i];
        out.push_back(integrate(p));
    }
    return out;
}

ReducedInvariants reduced_invariants(const E2Coeffs& y) {
    return {y.a, y.b * y.b + y.c * y.c, y.d * y.d + y.e * y.e, y.b * y.b * y.d - y.c * y.c * y.d + 2.0 * y.b * y.c * y.e};
}

E2Coeffs e2_from_reduced(const ReducedInvariants& r) {
    if (r.u < 0.0 || r.v < 0.0) throw std::invalid_argument("e2_from_reduced: u and v must be non-negative");
    E2Coeffs y;
    y.a = r.a;
    if (r.u == 0.0) {
        if (r.w != 0.0) throw std::invalid_argument("e2_from_reduced: w must vanish when u = 0");
        y.d = std::sqrt(r.v);
        return y;
    }
    y.b = std::sqrt(r.u);
    y.d = r.w / r.u;
    const double rem = r.v - y.d * y.d;
    if (rem < -1e-12 * std::max(1.0, r.v)) throw std::invalid_argument("e2_from_reduced: requires w^2 <= u^2 v");
    y.e = std::sqrt(std::max(0.0, rem));
    return y;
}

double AbcdeResiduals::max_relative() const {
    double r = 0.0;
    for (int i = 0; i < 6; ++i) r = std::max(r, std::abs(residual[i]) / std::max(1.0, magnitude[i]));
    return r;
}

AbcdeResiduals abcde_residuals(const ReducedInvariants& r, const MomentSet& ms) {
    const double al = ms.alpha, a2 = al * al, a4 = a2 * a2;
    const double a = r.a, u = r.u, v = r.v, w = r.w;
    const double A = ms.A, B = ms.B, C = ms.C, D = ms.D, E = ms.E, F = ms.F;
    AbcdeResiduals out;
    auto put = [&](int i, std::initializer_list<double> lhs, std::initializer_list<double> rhs) {
        double s = 0.0, mag = 0.0;
        for (double t : lhs) { s += t; mag += std::abs(t); }
        for (double t : rhs) { s -= t; mag += std::abs(t); }
        out.residual[i] = s;
        out.magnitude[i] = mag;
    };
    put(0, {12 * a * a, 5 * a2, 4 * u, 4 * v}, {A});
    put(1, {4 * a * a * a, 7 * a * a2, 2 * a * u, -4 * a * v, 2 * w}, {B});
    put(2, {a2 * 36 * a * a, -a4, a2 * 8 * u, -a2 * 4 * v}, {C / 4, -A * A / 4});
    put(3, {a2 * 36 * a * a * a, -a * a4, a2 * 14 * a * u, -a2 * 4 * a * v, a2 * 6 * w}, {D / 2, -A * B / 2});
    put(4, {a4 * 36 * a * a * a, -a * a4 * a2, a4 * 10 * a * u, -a4 * 4 * a * v, a4 * 2 * w},
        {6 * A * D / 48, -6 * A * A * B / 48, 3 * B * C / 48, -3 * F / 48});
    put(5,
        {a2 * 324 * a2 * a * a, a2 * 288 * a * a * v, -a2 * 144 * a * w, a2 * 68 * a2 * u, -a2 * 44 * a2 * v,
         a2 * 16 * u * u, -a2 * 16 * u * v, -a2 * 32 * v * v, -9 * a4 * a2},
        {17 * A * C / 16, 96 * B * B / 16, -12 * A * A * A / 16, -E / 16});
    return out;
}

AbcdeResiduals verify_abcde_system(double alpha, const E2Coeffs& y) {
    if (alpha == 0.0) throw std::invalid_argument("verify_abcde_system: alpha must be nonzero");
    return abcde_residuals(reduced_invariants(y), moments_analytic(alpha, y));
}

PolySystem polysystem_from_moments(const MomentSet& ms) {
    if (!ms.has_alpha_terms) throw std::invalid_argument("polysystem_from_moments: alpha must be nonzero");
    return {ms.alpha, ms.b};
}

std::array<double, 6> polysys_relative_residuals(const PolySystem& s, const std::array<double, 4>& x) {
    const double a2 = s.alpha * s.alpha;
    const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    const auto& b = s.b;
    std::array<double, 6> out{};
    auto put = [&](int i, std::initializer_list<double> terms) {
        double sum = -b[i], mag = std::abs(b[i]);
        for (double t : terms) { sum += t; mag += std::abs(t); }
        out[i] = std::abs(sum) / std::max(1.0, mag);
    };
    put(0, {3 * x1 * x1, x2, x3});
    put(1, {4 * x1 * x1 * x1, 7 * a2 * x1, 2 * x1 * x2, -4 * x1 * x3, 2 * x4});
    put(2, {9 * x1 * x1, 2 * x2, -x3});
    put(3, {36 * x1 * x1 * x1, -a2 * x1, 14 * x1 * x2, -4 * x1 * x3, 6 * x4});
    put(4, {36 * x1 * x1 * x1, -a2 * x1, 10 * x1 * x2, -4 * x1 * x3, 2 * x4});
    put(5, {a2 * 324 * x1 * x1, a2 * 68 * x2, -a2 * 44 * x3, 288 * x1 * x1 * x3, -144 * x1 * x4, 16 * x2 * x2,
            -16 * x2 * x3, -32 * x3 * x3});
    return out;
}

PolySolution solve_polysys(const PolySystem& s) {
    if (s.alpha == 0.0) throw std::invalid_argument("solve_polysys: alpha must be nonzero");
    const double a2 = s.alpha * s.alpha;
    const double b1 = s.b[0], b2 = s.b[1], b3 = s.b[2], b4 = s.b[3], b5 = s.b[4], b6 = s.b[5];
    PolySolution sol;
    std::ostringstream rep;
    std::vector<std::array<double, 4>> candidates;

    auto generic_tail = [&](double x1) {
        const double x2 = -4.0 * x1 * x1 + (b1 + b3) / 3.0;
        const double x3 = x1 * x1 + (2.0 * b1 - b3) / 3.0;
        const double x4 = 4.0 * x1 * x1 * x1 - (b1 + b3) * x1 / 3.0 + (b4 - b5) / 4.0;
        candidates.push_back({x1, x2, x3, x4});
    };

    const double k08 = a2 - 4.0 * b3;
    const double k11 = 7.0 * a2 - 4.0 / 3.0 * (2.0 * b1 - b3);
    if (std::abs(k08) > 1e-9 * rel_scale({a2, b3})) {
        sol.branch = PolyBranch::generic;
        rep << "linear elimination via alpha^2 - 4 b3 = " << k08;
        generic_tail((b4 - 3.0 * b5) / (2.0 * k08));
    } else if (std::abs(k11) > 1e-9 * rel_scale({7.0 * a2, 4.0 / 3.0 * (2.0 * b1 - b3)})) {
        sol.branch = PolyBranch::generic;
        rep << "linear elimination via 7 alpha^2 - (4/3)(2 b1 - b3) = " << k11;
        generic_tail((b2 + (b5 - b4) / 2.0) / k11);
    } else {
        sol.branch = PolyBranch::degenerate_quadratic;
        const bool c13 = std::abs(b1 - 11.0 * b3) <= 1e-8 * rel_scale({b1, 11.0 * b3});
        const bool c14 = std::abs(b4 - 3.0 * b5) <= 1e-8 * rel_scale({b4, 3.0 * b5});
        const bool c15 = std::abs(b2 - b5) <= 1e-8 * rel_scale({b2, b5});
        if (!(c13 && c14 && c15)) {
            rep << "inconsistent degenerate data:";
            if (!c13) rep << " b1 != 11 b3";
            if (!c14) rep << " b4 != 3 b5";
            if (!c15) rep << " b2 != b5";
            sol.report = rep.str();
            return sol;
        }
        const double qa = 2048.0 * b3, qb = -72.0 * b5, qc = -(1904.0 * b3 * b3 + b6);
        double disc = qb * qb - 4.0 * qa * qc;
        const double disc_scale = qb * qb + std::abs(4.0 * qa * qc);
        if (disc < 0.0 && disc > -1e-12 * disc_scale) disc = 0.0;
        if (disc < 0.0 || qa == 0.0) {
            rep << "degenerate quadratic has no real root (discriminant " << disc << ")";
            sol.report = rep.str();
            return sol;
        }
        const double sq = std::sqrt(disc);
        const double q = -0.5 * (qb + std::copysign(sq, qb == 0.0 ? 1.0 : qb));
        std::vector<double> roots;
        if (q != 0.0) {
            roots.push_back(q / qa);
            if (disc > 0.0) roots.push_back(qc / q);
        } else {
            roots.push_back(0.0);
        }
        rep << "degenerate quadratic branch, " << roots.size() << " candidate x1";
        for (double x1 : roots) {
            candidates.push_back({x1, -4.0 * x1 * x1 + 4.0 * b3, x1 * x1 + 7.0 * b3,
                                  4.0 * x1 * x1 * x1 - 4.0 * b3 * x1 + b5 / 2.0});
        }
    }

    for (const auto& x : candidates) {
        const auto r = polysys_relative_residuals(s, x);
        const double worst = *std::max_element(r.begin(), r.end());
        if (worst < 1e-8)
            sol.roots.push_back(x);
        else
            rep << "; candidate x1=" << x[0] << " rejected (residual " << worst << ")";
    }
    sol.report = rep.str();
    return sol;
}

bool same_h_orbit_deg1(const Degree1& y, const Degree1& yp) {
    check_degree1_reality(y, 1e-10);
    check_degree1_reality(yp, 1e-10);
    return std::abs(y.a.real() - yp.a.real()) <= 1e-10 && std::abs(std::abs(y.b) - std::abs(yp.b)) <= 1e-10;
}

bool same_h_orbit_deg2(const E2Coeffs& y, const E2Coeffs& yp) {
    const ReducedInvariants r = reduced_invariants(y), q = reduced_invariants(yp);
    auto close = [](double x, double z) { return std::abs(x - z) <= 1e-9 * rel_scale({x, z}); };
    return close(r.a, q.a) && close(r.u, q.u) && close(r.v, q.v) && close(r.w, q.w);
}

Eigen::Matrix3d quadratic_form(const E2Coeffs& y) {
    Eigen::Matrix3d A;
    A << y.d - y.a, y.e, y.b, y.e, -y.d - y.a, y.c, y.b, y.c, 2.0 * y.a;
    return A;
}

std::pair<double, double> char_poly(const E2Coeffs& y) {
    const double a = y.a, b = y.b, c = y.c, d = y.d, e = y.e;
    const double p1 = -(3 * a * a + b * b + c * c + d * d + e * e);
    const double p0 = -2 * a * a * a - a * b * b - a * c * c + 2 * a * d * d + 2 * a * e * e - b * b * d -
                      2 * b * c * e + c * c * d;
    return {p1, p0};
}

bool same_o3_orbit(const E2Coeffs& y, const E2Coeffs& yp) {
    const auto [p1, p0] = char_poly(y);
    const auto [q1, q0] = char_poly(yp);
    return std::abs(p1 - q1) <= 1e-9 * rel_scale({p1, q1}) && std::abs(p0 - q0) <= 1e-9 * rel_scale({p0, q0});
}

}  // namespace rhlab
