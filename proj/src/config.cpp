#include "rhlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rhlab {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty()) return x;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

}  // namespace

Config Config::parse(std::istream& is) {
    Config c;
    std::string line;
    int n = 0;
    while (std::getline(is, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
            throw std::invalid_argument("config line " + std::to_string(n) + ": expected key=value");
        c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file " + path);
    return parse(f);
}

void Config::set(const std::string& key, const std::string& value) {
    for (auto& kv : entries_)
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    entries_.emplace_back(key, value);
}

void Config::apply_override(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || trim(assignment.substr(0, eq)).empty())
        throw std::invalid_argument("override '" + assignment + "' is not key=value");
    set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

bool Config::has(const std::string& key) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const auto& kv) { return kv.first == key; });
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
    for (const auto& kv : entries_)
        if (kv.first == key) return kv.second;
    return fallback;
}

double Config::get_double(const std::string& key, double fallback) const {
    return has(key) ? parse_double(key, get(key)) : fallback;
}

long Config::get_int(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const double x = parse_double(key, get(key));
    if (x != std::floor(x)) throw std::invalid_argument("config: key '" + key + "' expects an integer");
    return static_cast<long>(x);
}

std::vector<double> Config::get_list(const std::string& key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    for (const auto& item : split(get(key), ',')) out.push_back(parse_double(key, item));
    return out;
}

std::string Config::summary() const {
    std::string s;
    for (const auto& [k, v] : entries_) {
        if (!s.empty()) s += ';';
        s += k + '=' + v;
    }
    return s;
}

SpectralField ExperimentConfig::y_field() const {
    if (const auto* y = std::get_if<E2Coeffs>(&Y)) return e2_to_spectral(*y, L);
    return degree1_to_spectral(std::get<Degree1>(Y), L);
}

ExperimentConfig experiment_config(const Config& c) {
    static const std::vector<std::string> known = {
        "name",  "L",        "omega",     "alpha",       "Y",      "p",       "epsilons",
        "seed",  "max_degree", "dt",      "t_end",       "diag_every", "output", "threads",
        "delta", "target_beta", "stream", "convergence_dts"};
    for (const auto& [k, v] : c.entries())
        if (std::find(known.begin(), known.end(), k) == known.end())
            throw std::invalid_argument("config: unknown key '" + k + "'");

    ExperimentConfig e;
    e.name = c.get("name", e.name);
    e.L = static_cast<int>(c.get_int("L", e.L));
    e.omega = c.get_double("omega", e.omega);
    e.alpha = c.get_double("alpha", e.alpha);
    if (c.has("Y")) {
        const auto y = c.get_list("Y");
        if (y.size() == 5) {
            e.Y = E2Coeffs{y[0], y[1], y[2], y[3], y[4]};
        } else if (y.size() == 6) {
            Degree1 d{cplx(y[0], y[1]), cplx(y[2], y[3]), cplx(y[4], y[5])};
            check_degree1_reality(d);
            e.Y = d;
        } else {
            throw std::invalid_argument("config: Y takes 5 values (E2) or 6 values (degree-1 re/im pairs)");
        }
    }
    e.p = c.get_double("p", e.p);
    if (c.has("epsilons")) e.epsilons = c.get_list("epsilons");
    e.perturbation.seed = static_cast<std::uint64_t>(c.get_int("seed", static_cast<long>(e.perturbation.seed)));
    e.perturbation.max_degree = static_cast<int>(c.get_int("max_degree", e.perturbation.max_degree));
    e.dt = c.get_double("dt", e.dt);
    e.t_end = c.get_double("t_end", e.t_end);
    e.diag_every = static_cast<int>(c.get_int("diag_every", e.diag_every));
    e.output_path = c.get("output", "");
    e.threads = static_cast<int>(c.get_int("threads", e.threads));
    e.delta = c.get_double("delta", e.delta);
    e.target_beta = c.get_double("target_beta", e.target_beta);
    if (c.has("convergence_dts")) e.convergence_dts = c.get_list("convergence_dts");
    if (c.has("stream")) {
        for (const auto& term : split(c.get("stream"), ',')) {
            const auto parts = split(term, ':');
            if (parts.size() != 4) throw std::invalid_argument("config: stream terms are j:m:re:im");
            const int j = static_cast<int>(parse_double("stream", parts[0]));
            const int m = static_cast<int>(parse_double("stream", parts[1]));
            if (j < 1 || m < 0 || m > j) throw std::invalid_argument("config: stream term needs 1 <= j, 0 <= m <= j");
            e.stream_terms.push_back({{j, m}, cplx(parse_double("stream", parts[2]), parse_double("stream", parts[3]))});
        }
    }

    if (e.L < 2) throw std::invalid_argument("config: L must be at least 2");
    if (!(e.dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
    if (e.t_end < 0.0) throw std::invalid_argument("config: t_end must be non-negative");
    if (e.diag_every < 1) throw std::invalid_argument("config: diag_every must be >= 1");
    if (!(e.p > 1.0)) throw std::invalid_argument("config: p must exceed 1");
    if (e.threads < 1) throw std::invalid_argument("config: threads must be >= 1");
    if (e.perturbation.max_degree < 1 || e.perturbation.max_degree > e.L)
        throw std::invalid_argument("config: max_degree must lie in [1, L]");
    if (e.epsilons.empty()) throw std::invalid_argument("config: epsilons is empty");
    for (size_t i = 0; i < e.epsilons.size(); ++i) {
        if (!(e.epsilons[i] > 0.0)) throw std::invalid_argument("config: epsilons must be positive");
        if (i > 0 && !(e.epsilons[i] < e.epsilons[i - 1]))
            throw std::invalid_argument("config: epsilons must be strictly decreasing");
    }
    for (double h : e.convergence_dts)
        if (!(h > 0.0)) throw std::invalid_argument("config: convergence_dts must be positive");
    return e;
}

SpectralField random_perturbation(int L, const PerturbationRecipe& r) {
    if (r.max_degree < 1 || r.max_degree > L) throw std::invalid_argument("random_perturbation: bad max_degree");
    std::mt19937_64 gen(r.seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    SpectralField f(L);
    for (int j = 1; j <= r.max_degree; ++j)
        for (int m = 0; m <= j; ++m) {
            const double re = n01(gen);
            const double im = m == 0 ? 0.0 : n01(gen);
            f(j, m) = cplx(re, im);
        }
    f *= 1.0 / f.norm();
    return f;
}

}  // namespace rhlab
