#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rhlab/harmonics.hpp"

namespace rhlab {

/// Flat key=value settings in insertion order. '#' starts a comment.
class Config {
public:
    static Config parse(std::istream& is);
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    /// Applies one "key=value" override.
    void apply_override(const std::string& assignment);

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback = "") const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    std::vector<double> get_list(const std::string& key) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    /// "k1=v1;k2=v2;..." for echoing into output headers.
    std::string summary() const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

/// Random bandlimited perturbation: Gaussian coefficients on degrees 1..max_degree, zero mean,
/// scaled to unit L2 norm.
struct PerturbationRecipe {
    std::uint64_t seed = 1;
    int max_degree = 6;
};

struct ExperimentConfig {
    std::string name = "experiment";
    int L = 21;
    double omega = 0.5;
    double alpha = 1.0;
    std::variant<E2Coeffs, Degree1> Y = E2Coeffs{0.5, 0.3, 0.1, 0.2, 0.1};
    double p = 2.0;
    std::vector<double> epsilons{1e-2, 5e-3, 2.5e-3};
    PerturbationRecipe perturbation;
    double dt = 1e-3;
    double t_end = 10.0;
    int diag_every = 100;
    std::string output_path;
    int threads = 1;

    /// Traversal: alpha shift and the polar angle of the fixed target.
    double delta = 0.05;
    double target_beta = 3.141592653589793;
    /// Rearrangement: prescribed stream as (j, m, re, im) terms; empty selects Re Y_3^1 at unit norm.
    std::vector<std::pair<std::pair<int, int>, cplx>> stream_terms;
    /// Step sizes for the RH self-convergence sweep.
    std::vector<double> convergence_dts;

    /// The RH amplitude Y as a degree-L field.
    SpectralField y_field() const;
};

/// Reads every recognised key; throws std::invalid_argument on malformed or unknown keys and on
/// epsilons that are not positive and strictly decreasing.
ExperimentConfig experiment_config(const Config& c);

/// The recipe's field at truncation L; bitwise reproducible for a fixed seed.
SpectralField random_perturbation(int L, const PerturbationRecipe& r);

}  // namespace rhlab
