#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "rhlab/config.hpp"
#include "rhlab/dynamics.hpp"

namespace rhlab {

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<std::string> comments;  // written as "# " lines before the header
    CsvTable table;
    std::vector<Check> checks;          // gating assertions
    std::vector<std::string> notes;     // informational only
    bool passed() const;
};

/// Comment lines with the experiment name, seed, full configuration and software version.
std::vector<std::string> provenance_comments(const std::string& experiment, const ExperimentConfig& cfg);

/// Comments, header row, then rows at 17 significant digits.
void write_csv(std::ostream& os, const ExperimentReport& r);
/// Inverse of write_csv for the table part; comment lines are skipped.
CsvTable read_csv(std::istream& is);

/// Worst drifts over a run, relative to the first record.
struct ConservationDrift {
    double energy = 0.0;                 // |dE| / E
    double c1 = 0.0;                     // max_m |e^{-i m omega t} c_1^m(t) - c_1^m(0)|
    double c1_opposite_phase = 0.0;      // same with e^{+i m omega t}
    std::array<double, 6> moments{};     // |dI_k| / |I_k(0)|, k = 2..7; zero where not recorded
    double worst_moment() const;
};

ConservationDrift conservation_drift(const RunResult& r, double omega);

/// Evolves the RH state and reports the relative L2 error against exact_state.
ExperimentReport exp_rh_exactness(const ExperimentConfig& cfg);

/// Error at t_end for each of cfg.convergence_dts and the observed order between neighbours.
ExperimentReport exp_rh_convergence(const ExperimentConfig& cfg);

enum class OrbitGroup { polar, so3 };

/// Perturbs the RH state by eps * eta for each epsilon and records the orbit distance over time.
/// Throws std::invalid_argument when the group does not match the stability hypotheses.
ExperimentReport exp_stability(const ExperimentConfig& cfg, OrbitGroup group);

/// Time at which the alpha-shifted state first aligns with the target rotated by target_beta.
double traversal_dip_time(const ExperimentConfig& cfg);

/// Evolves (alpha + delta) sin(theta) + Y and records its distance to the fixed target
/// alpha sin(theta) + Y(phi - target_beta).
ExperimentReport exp_orbit_traversal(const ExperimentConfig& cfg);

/// Transports alpha sin(theta) + Y by a prescribed stream and tracks e_deg2 - M and moment drifts.
ExperimentReport exp_rearrangement_bound(const ExperimentConfig& cfg);

/// The prescribed stream used by exp_rearrangement_bound.
SpectralField rearrangement_stream(const ExperimentConfig& cfg);

}  // namespace rhlab
