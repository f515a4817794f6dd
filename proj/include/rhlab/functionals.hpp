#pragma once

#include <functional>
#include <string>

#include "rhlab/harmonics.hpp"

namespace rhlab {

/// |c_1^0 + a|^2 + |c_1^1 + b|^2 + |c_1^{-1} + c|^2.
double e_deg1_a(const SpectralField& f, const Degree1& y);

/// a c_1^0 + |c_1^1|^2.
double e_deg1_b(const SpectralField& f, double a);

/// (1/2) <f, G f> - omega <sin(theta), f>.
double e_arnold1(const SpectralField& f, double omega);

/// e_arnold1 - (1/6) sum_m |c_1^m|^2 + (1/3) <f, P_1 zeta_ref>.
double e_arnold2(const SpectralField& f, double omega, const SpectralField& zeta_ref);

/// (1/2) sum_{j>=2} |c_j^m|^2/(j(j+1)) + (beta/6) c_1^0, beta = sqrt(4pi/3) alpha.
double e_deg2(const SpectralField& f, double alpha);

/// beta^2/6 + ||Y||^2/12: the value of e_deg2 at alpha sin(theta) + Y with Y of degree 2.
double e_deg2_max(double alpha, double y_norm2);

struct NamedFunctional {
    std::string name;
    std::function<double(const SpectralField&)> eval;
};

/// Parses "e_deg2[alpha=1]", "arnold1[omega=0.5]", "e_deg1_b[a=0.3]".
NamedFunctional make_functional(const std::string& spec);

}  // namespace rhlab
