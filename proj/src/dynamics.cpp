#include "rhlab/dynamics.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "rhlab/invariants.hpp"
#include "rhlab/operators.hpp"

namespace rhlab {

namespace {

bool all_finite(const SpectralField& c) {
    for (const cplx& v : c.data())
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

void axpy(SpectralField& y, double a, const SpectralField& x) {
    auto& yd = y.data();
    const auto& xd = x.data();
    for (size_t i = 0; i < yd.size(); ++i) yd[i] += a * xd[i];
}

}  // namespace

double energy_proxy(const SpectralField& zeta) {
    double s = 0.0;
    for (int j = 1; j <= zeta.L(); ++j) s += zeta.degree_norm2(j) / (double(j) * (j + 1));
    return s;
}

SpectralField tendency(const SpectralField& zeta, const SolverConfig& cfg) {
    SpectralField k = cfg.prescribed_stream ? transport_tendency(zeta, cfg.prescribed_stream->truncated(zeta.L()))
                                            : advection_tendency(zeta, cfg.omega);
    k.remove_mean();
    return k;
}

SpectralField step_rk4(const SpectralField& zeta, const SolverConfig& cfg, long step_index) {
    if (zeta.L() != cfg.L) throw std::invalid_argument("step_rk4: field truncation differs from cfg.L");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be positive");
    const double dt = cfg.dt;
    auto eval = [&](const SpectralField& z) {
        SpectralField k = tendency(z, cfg);
        if (!all_finite(k)) throw std::runtime_error("non-finite tendency at step " + std::to_string(step_index));
        return k;
    };
    SpectralField z0 = zeta;
    z0.remove_mean();
    const SpectralField k1 = eval(z0);
    SpectralField z = z0;
    axpy(z, 0.5 * dt, k1);
    const SpectralField k2 = eval(z);
    z = z0;
    axpy(z, 0.5 * dt, k2);
    const SpectralField k3 = eval(z);
    z = z0;
    axpy(z, dt, k3);
    const SpectralField k4 = eval(z);
    z = z0;
    axpy(z, dt / 6.0, k1);
    axpy(z, dt / 3.0, k2);
    axpy(z, dt / 3.0, k3);
    axpy(z, dt / 6.0, k4);
    if (cfg.filter) {
        const double s = cfg.filter->strength;
        const int q = cfg.filter->order;
        for (int j = 0; j <= z.L(); ++j) {
            const double damp = std::exp(-s * std::pow(double(j) / z.L(), q));
            for (int m = 0; m <= j; ++m) z(j, m) *= damp;
        }
    }
    z.remove_mean();
    return z;
}

DiagnosticsRecord make_record(const SpectralField& zeta, double t, const SolverConfig& cfg,
                              const std::vector<NamedFunctional>& functionals) {
    DiagnosticsRecord r;
    r.t = t;
    r.energy_proxy = energy_proxy(zeta);
    if (cfg.moments_max >= 2) r.moments = moments_numeric(zeta, cfg.moments_max);
    for (int m = -1; m <= 1; ++m) {
        const cplx c = zeta.coeff(1, m);
        r.c1[m + 1] = c;
        r.c1_phase_corrected[m + 1] = c * std::polar(1.0, -m * cfg.omega * t);
    }
    for (const auto& f : functionals) r.functional_values.push_back(f.eval(zeta));
    return r;
}

RunResult run(const SpectralField& zeta0, const SolverConfig& cfg, const std::vector<NamedFunctional>& functionals,
              const RunObserver& observer) {
    if (cfg.t_end < 0.0) throw std::invalid_argument("run: t_end must be non-negative");
    if (cfg.diag_every < 1) throw std::invalid_argument("run: diag_every must be >= 1");
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("run: dt must be positive");
    RunResult res;
    for (const auto& f : functionals) res.functional_names.push_back(f.name);

    const long n_full = static_cast<long>(std::floor(cfg.t_end / cfg.dt + 1e-9));
    const double rest = cfg.t_end - n_full * cfg.dt;
    const bool partial = rest > 1e-12 * cfg.dt;
    const long n_steps = n_full + (partial ? 1 : 0);

    SpectralField z = zeta0;
    z.remove_mean();
    auto emit = [&](double t) {
        res.records.push_back(make_record(z, t, cfg, functionals));
        if (observer) observer(t, z);
    };
    emit(0.0);
    SolverConfig last = cfg;
    if (partial) last.dt = rest;
    for (long n = 1; n <= n_steps; ++n) {
        const bool is_last = n == n_steps;
        z = step_rk4(z, (is_last && partial) ? last : cfg, n);
        const double t = (is_last && partial) ? cfg.t_end : n * cfg.dt;
        if (n % cfg.diag_every == 0 || is_last) emit(t);
    }
    res.final_state = z;
    return res;
}

void write_diagnostics_csv(std::ostream& os, const RunResult& r, const std::vector<std::string>& comments) {
    for (const auto& c : comments) os << "# " << c << '\n';
    os << "t,energy_proxy,I2,I3,I4,I5,I6,I7,c1m_re,c1m_im,c10,c1p_re,c1p_im";
    for (const auto& n : r.functional_names) os << ',' << n;
    os << '\n' << std::setprecision(17);
    for (const auto& rec : r.records) {
        os << rec.t << ',' << rec.energy_proxy;
        for (size_t k = 0; k < 6; ++k) {
            os << ',';
            if (k < rec.moments.size())
                os << rec.moments[k];
            else
                os << "nan";
        }
        const auto& c = rec.c1_phase_corrected;
        os << ',' << c[0].real() << ',' << c[0].imag() << ',' << c[1].real() << ',' << c[2].real() << ','
           << c[2].imag();
        for (double v : rec.functional_values) os << ',' << v;
        os << '\n';
    }
}

}  // namespace rhlab
