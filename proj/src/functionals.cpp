#include "rhlab/functionals.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rhlab {

namespace {

const double kSinNorm = std::sqrt(4.0 * std::numbers::pi / 3.0);  // sin(theta) = kSinNorm Y_1^0

double c10(const SpectralField& f) { return f.L() >= 1 ? f(1, 0).real() : 0.0; }

// (1/2) sum over degrees [jmin, L] of |c|^2 / (j(j+1)), both signs of m.
double half_green_energy(const SpectralField& f, int jmin) {
    double s = 0.0;
    for (int j = jmin; j <= f.L(); ++j) s += f.degree_norm2(j) / (double(j) * (j + 1));
    return 0.5 * s;
}

}  // namespace

double e_deg1_a(const SpectralField& f, const Degree1& y) {
    check_degree1_reality(y);
    const Degree1 x = degree1_component(f);
    return std::norm(x.a + y.a) + std::norm(x.b + y.b) + std::norm(x.c + y.c);
}

double e_deg1_b(const SpectralField& f, double a) {
    const cplx c11 = f.L() >= 1 ? f(1, 1) : cplx(0.0);
    return a * c10(f) + std::norm(c11);
}

double e_arnold1(const SpectralField& f, double omega) {
    return half_green_energy(f, 1) - omega * kSinNorm * c10(f);
}

double e_arnold2(const SpectralField& f, double omega, const SpectralField& zeta_ref) {
    const double deg1 = f.degree_norm2(1);
    double cross = 0.0;
    if (f.L() >= 1 && zeta_ref.L() >= 1)
        cross = c10(f) * c10(zeta_ref) + 2.0 * (f(1, 1) * std::conj(zeta_ref(1, 1))).real();
    return e_arnold1(f, omega) - deg1 / 6.0 + cross / 3.0;
}

double e_deg2(const SpectralField& f, double alpha) {
    const double beta = kSinNorm * alpha;
    return half_green_energy(f, 2) + beta / 6.0 * c10(f);
}

double e_deg2_max(double alpha, double y_norm2) {
    const double beta = kSinNorm * alpha;
    return beta * beta / 6.0 + y_norm2 / 12.0;
}

NamedFunctional make_functional(const std::string& spec) {
    std::string name = spec;
    std::map<std::string, double> args;
    const auto lb = spec.find('[');
    if (lb != std::string::npos) {
        if (spec.back() != ']') throw std::invalid_argument("functional spec missing ']': " + spec);
        name = spec.substr(0, lb);
        std::stringstream ss(spec.substr(lb + 1, spec.size() - lb - 2));
        std::string kv;
        while (std::getline(ss, kv, ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw std::invalid_argument("functional argument needs '=': " + kv);
            args[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        }
    }
    auto arg = [&](const std::string& k) {
        auto it = args.find(k);
        if (it == args.end()) throw std::invalid_argument("functional " + name + " needs argument " + k);
        return it->second;
    };
    if (name == "e_deg2") {
        const double alpha = arg("alpha");
        return {spec, [alpha](const SpectralField& f) { return e_deg2(f, alpha); }};
    }
    if (name == "arnold1") {
        const double omega = arg("omega");
        return {spec, [omega](const SpectralField& f) { return e_arnold1(f, omega); }};
    }
    if (name == "e_deg1_b") {
        const double a = arg("a");
        return {spec, [a](const SpectralField& f) { return e_deg1_b(f, a); }};
    }
    throw std::invalid_argument("unknown functional: " + name);
}

}  // namespace rhlab
