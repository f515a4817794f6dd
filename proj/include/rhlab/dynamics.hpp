#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rhlab/functionals.hpp"
#include "rhlab/harmonics.hpp"

namespace rhlab {

/// c_j^m <- c_j^m exp(-s (j/L)^q), applied once per step when enabled.
struct ExponentialFilter {
    double strength = 36.0 * 2.302585092994046;
    int order = 16;
};

struct SolverConfig {
    int L = 21;
    double omega = 0.0;
    double dt = 1e-3;
    double t_end = 0.0;
    /// Unset: coupled Euler dynamics. Set: transport by this fixed stream function.
    std::optional<SpectralField> prescribed_stream;
    std::optional<ExponentialFilter> filter;
    int diag_every = 1;
    /// Highest moment recorded (2..7); 0 skips moment diagnostics.
    int moments_max = 7;
};

struct DiagnosticsRecord {
    double t = 0.0;
    double energy_proxy = 0.0;
    std::vector<double> moments;                // I_2 .. I_{moments_max}
    std::array<cplx, 3> c1{};                   // c_1^{-1}, c_1^0, c_1^1
    std::array<cplx, 3> c1_phase_corrected{};   // e^{-i m omega t} c_1^m(t), conserved by the flow
    std::vector<double> functional_values;
};

/// sum_{j>=1, all m} |c_j^m|^2 / (j(j+1)).
double energy_proxy(const SpectralField& zeta);

/// The tendency used by step_rk4 for this configuration.
SpectralField tendency(const SpectralField& zeta, const SolverConfig& cfg);

/// One classical RK4 step; throws on non-finite tendencies, naming `step_index`.
SpectralField step_rk4(const SpectralField& zeta, const SolverConfig& cfg, long step_index = 0);

DiagnosticsRecord make_record(const SpectralField& zeta, double t, const SolverConfig& cfg,
                              const std::vector<NamedFunctional>& functionals);

struct RunResult {
    SpectralField final_state;
    std::vector<DiagnosticsRecord> records;
    std::vector<std::string> functional_names;
};

/// Observer called at every diagnostics time with (t, zeta_t).
using RunObserver = std::function<void(double, const SpectralField&)>;

RunResult run(const SpectralField& zeta0, const SolverConfig& cfg, const std::vector<NamedFunctional>& functionals,
              const RunObserver& observer = {});

/// Header "t,energy_proxy,I2,...,I7,c1m_re,c1m_im,c10,c1p_re,c1p_im,<functionals>" preceded by
/// `comments` as "# " lines. The c1 columns hold the phase-corrected values.
void write_diagnostics_csv(std::ostream& os, const RunResult& r, const std::vector<std::string>& comments);

}  // namespace rhlab
