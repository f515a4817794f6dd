#include "rhlab/lab.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <iomanip>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rhlab/functionals.hpp"
#include "rhlab/operators.hpp"
#include "rhlab/orbit_metrics.hpp"
#include "rhlab/rh_waves.hpp"
#include "rhlab/rotations.hpp"

namespace rhlab {

namespace {

constexpr double kPi = 3.141592653589793;

// Shortest text that reads back to the same double.
std::string fmt(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string fmt_short(double x) {
    std::ostringstream os;
    os << std::setprecision(4) << x;
    return os.str();
}

std::string join(const std::vector<double>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
    return s;
}

std::string describe(const ExperimentConfig& c) {
    std::string s = "name=" + c.name + ";L=" + std::to_string(c.L) + ";omega=" + fmt(c.omega) + ";alpha=" + fmt(c.alpha);
    if (const auto* y = std::get_if<E2Coeffs>(&c.Y)) {
        s += ";Y=" + join({y->a, y->b, y->c, y->d, y->e});
    } else {
        const auto& d = std::get<Degree1>(c.Y);
        s += ";Y=" + join({d.a.real(), d.a.imag(), d.b.real(), d.b.imag(), d.c.real(), d.c.imag()});
    }
    s += ";p=" + fmt(c.p) + ";epsilons=" + join(c.epsilons) + ";seed=" + std::to_string(c.perturbation.seed) +
         ";max_degree=" + std::to_string(c.perturbation.max_degree) + ";dt=" + fmt(c.dt) + ";t_end=" + fmt(c.t_end) +
         ";diag_every=" + std::to_string(c.diag_every) + ";threads=" + std::to_string(c.threads) +
         ";delta=" + fmt(c.delta) + ";target_beta=" + fmt(c.target_beta);
    if (!c.stream_terms.empty()) {
        s += ";stream=";
        for (size_t i = 0; i < c.stream_terms.size(); ++i) {
            const auto& [jm, v] = c.stream_terms[i];
            s += (i ? "," : "") + std::to_string(jm.first) + ':' + std::to_string(jm.second) + ':' + fmt(v.real()) +
                 ':' + fmt(v.imag());
        }
    }
    if (!c.convergence_dts.empty()) s += ";convergence_dts=" + join(c.convergence_dts);
    return s;
}

SolverConfig solver_for(const ExperimentConfig& c, int moments_max) {
    SolverConfig s;
    s.L = c.L;
    s.omega = c.omega;
    s.dt = c.dt;
    s.t_end = c.t_end;
    s.diag_every = c.diag_every;
    s.moments_max = moments_max;
    return s;
}

Check make_check(const std::string& name, bool ok, const std::string& detail) { return Check{name, ok, detail}; }

// Largest g with Y(phi + 2pi/g) = Y(phi); 0 for zonal Y.
int longitude_symmetry(const SpectralField& y) {
    const double tol = 1e-14 * std::max(1.0, y.norm());
    int g = 0;
    for (int j = 1; j <= y.L(); ++j)
        for (int m = 1; m <= j; ++m)
            if (std::abs(y(j, m)) > tol) g = std::gcd(g, m);
    return g;
}

double lp_norm(const SpectralField& f, double p) { return lp_distance(f, SpectralField(f.L()), p); }

}  // namespace

bool ExperimentReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::vector<std::string> provenance_comments(const std::string& experiment, const ExperimentConfig& cfg) {
    return {"experiment=" + experiment, "seed=" + std::to_string(cfg.perturbation.seed), "config=" + describe(cfg),
            std::string("version=rhlab ") + RHLAB_VERSION};
}

void write_csv(std::ostream& os, const ExperimentReport& r) {
    for (const auto& c : r.comments) os << "# " << c << '\n';
    for (const auto& c : r.checks) os << "# check " << c.name << ' ' << (c.passed ? "PASS" : "FAIL") << ' ' << c.detail << '\n';
    for (const auto& n : r.notes) os << "# note " << n << '\n';
    for (size_t i = 0; i < r.table.columns.size(); ++i) os << (i ? "," : "") << r.table.columns[i];
    os << '\n';
    for (const auto& row : r.table.rows) {
        for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt(row[i]);
        os << '\n';
    }
}

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!header) {
            t.columns = cells;
            header = true;
            continue;
        }
        if (cells.size() != t.columns.size()) throw std::runtime_error("read_csv: ragged row");
        std::vector<double> row;
        for (const auto& c : cells) {
            char* end = nullptr;
            const double v = std::strtod(c.c_str(), &end);
            if (end == c.c_str()) throw std::runtime_error("read_csv: bad number '" + c + "'");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

double ConservationDrift::worst_moment() const { return *std::max_element(moments.begin(), moments.end()); }

ConservationDrift conservation_drift(const RunResult& r, double omega) {
    ConservationDrift d;
    if (r.records.empty()) return d;
    const auto& a = r.records.front();
    for (const auto& b : r.records) {
        d.energy = std::max(d.energy, std::abs(b.energy_proxy - a.energy_proxy) / std::max(a.energy_proxy, 1e-300));
        for (int k = 0; k < 3; ++k) {
            const int m = k - 1;
            d.c1 = std::max(d.c1, std::abs(b.c1_phase_corrected[k] - a.c1[k]));
            d.c1_opposite_phase =
                std::max(d.c1_opposite_phase, std::abs(b.c1[k] * std::polar(1.0, m * omega * b.t) - a.c1[k]));
        }
        for (size_t k = 0; k < std::min<size_t>(6, b.moments.size()); ++k)
            d.moments[k] = std::max(d.moments[k],
                                    std::abs(b.moments[k] - a.moments[k]) / std::max(std::abs(a.moments[k]), 1e-300));
    }
    return d;
}

ExperimentReport exp_rh_exactness(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = "rh-verify";
    rep.comments = provenance_comments(rep.experiment, cfg);
    const RHState rh = make_rh(cfg.omega, cfg.alpha, cfg.y_field());
    rep.comments.push_back("degree_j=" + std::to_string(rh.degree_j) + " speed_c=" + fmt(rh.speed_c));
    rep.table.columns = {"t", "rel_error"};
    double worst = 0.0;
    SolverConfig s = solver_for(cfg, 0);
    run(exact_state(rh, 0.0), s, {}, [&](double t, const SpectralField& z) {
        const SpectralField ex = exact_state(rh, t);
        const double e = (z - ex).norm() / ex.norm();
        worst = std::max(worst, e);
        rep.table.rows.push_back({t, e});
    });
    if (is_steady(rh)) {
        rep.checks.push_back(make_check("steady_state_error<1e-10", worst < 1e-10, "max=" + fmt_short(worst)));
    } else {
        rep.checks.push_back(make_check("max_rel_error<1e-6", worst < 1e-6, "max=" + fmt_short(worst)));
    }
    return rep;
}

ExperimentReport exp_rh_convergence(const ExperimentConfig& cfg) {
    if (cfg.convergence_dts.size() < 2) throw std::invalid_argument("exp_rh_convergence: needs two or more dts");
    ExperimentReport rep;
    rep.experiment = "rh-convergence";
    rep.comments = provenance_comments(rep.experiment, cfg);
    const RHState rh = make_rh(cfg.omega, cfg.alpha, cfg.y_field());
    const SpectralField ex = exact_state(rh, cfg.t_end);
    rep.table.columns = {"dt", "error", "observed_order"};
    std::vector<double> errs;
    for (double h : cfg.convergence_dts) {
        SolverConfig s = solver_for(cfg, 0);
        s.dt = h;
        s.diag_every = std::numeric_limits<int>::max();
        const RunResult r = run(exact_state(rh, 0.0), s, {});
        errs.push_back((r.final_state - ex).norm() / ex.norm());
    }
    for (size_t i = 0; i < errs.size(); ++i) {
        double order = std::numeric_limits<double>::quiet_NaN();
        if (i > 0) order = std::log(errs[i - 1] / errs[i]) / std::log(cfg.convergence_dts[i - 1] / cfg.convergence_dts[i]);
        rep.table.rows.push_back({cfg.convergence_dts[i], errs[i], order});
        if (i > 0)
            rep.checks.push_back(make_check("order_" + std::to_string(i) + "_in[3.5,4.5]", order >= 3.5 && order <= 4.5,
                                            "order=" + fmt_short(order)));
    }
    return rep;
}

ExperimentReport exp_stability(const ExperimentConfig& cfg, OrbitGroup group) {
    const bool polar = group == OrbitGroup::polar;
    bool conjecture = false;
    if (polar && cfg.alpha == 0.0) {
        if (cfg.omega == 0.0)
            throw std::invalid_argument(
                "stability (polar): orbit stability under polar rotations requires alpha != 0; "
                "for alpha = 0 use group so3");
        conjecture = true;  // alpha = 0, omega != 0: open regime, reported without assertions
    }
    if (!polar && cfg.alpha != 0.0)
        throw std::invalid_argument(
            "stability (so3): stability up to SO(3) rotations is established for alpha = 0; "
            "for alpha != 0 use group polar");
    const SpectralField Y = cfg.y_field();
    if (std::holds_alternative<Degree1>(cfg.Y) || Y.norm() == 0.0)
        throw std::invalid_argument("stability: requires a nonzero degree-2 Y");

    ExperimentReport rep;
    rep.experiment = polar ? "stability-polar" : "stability-so3";
    rep.comments = provenance_comments(rep.experiment, cfg);
    const SpectralField target = Y + sin_theta(cfg.L, cfg.alpha);
    const SpectralField eta = random_perturbation(cfg.L, cfg.perturbation);
    const double eta_p = lp_norm(eta, cfg.p);

    struct EpsResult {
        std::vector<std::array<double, 2>> d;
        ConservationDrift drift;
    };
    auto one = [&](double eps) {
        EpsResult out;
        SpectralField z0 = target + eps * eta;
        const RunResult r = run(z0, solver_for(cfg, 0), {}, [&](double t, const SpectralField& z) {
            const double d = polar ? dist_polar_orbit(z, target, cfg.p).distance : dist_so3_orbit(z, target, cfg.p).distance;
            out.d.push_back({t, d});
        });
        out.drift = conservation_drift(r, cfg.omega);
        return out;
    };

    std::vector<EpsResult> results(cfg.epsilons.size());
    if (cfg.threads > 1) {
        for (size_t start = 0; start < cfg.epsilons.size(); start += cfg.threads) {
            std::vector<std::future<EpsResult>> fut;
            for (size_t i = start; i < std::min(cfg.epsilons.size(), start + cfg.threads); ++i)
                fut.push_back(std::async(std::launch::async, one, cfg.epsilons[i]));
            for (size_t i = 0; i < fut.size(); ++i) results[start + i] = fut[i].get();
        }
    } else {
        for (size_t i = 0; i < cfg.epsilons.size(); ++i) results[i] = one(cfg.epsilons[i]);
    }

    rep.table.columns = {"epsilon", "t", "orbit_distance"};
    std::vector<double> sup(results.size(), 0.0);
    std::vector<Check> checks;
    for (size_t i = 0; i < results.size(); ++i) {
        const double eps = cfg.epsilons[i];
        for (const auto& [t, d] : results[i].d) {
            rep.table.rows.push_back({eps, t, d});
            sup[i] = std::max(sup[i], d);
        }
        const double d0 = results[i].d.front()[1];
        const std::string tag = "eps=" + fmt_short(eps);
        checks.push_back(make_check("d0<=eps*|eta|_p[" + tag + "]", d0 <= eps * eta_p * (1.0 + 1e-12) + 1e-14,
                                    "d0=" + fmt_short(d0) + " bound=" + fmt_short(eps * eta_p)));
        checks.push_back(make_check("energy_drift<1e-6[" + tag + "]", results[i].drift.energy < 1e-6,
                                    "drift=" + fmt_short(results[i].drift.energy)));
        checks.push_back(make_check("c1_drift<1e-8[" + tag + "]", results[i].drift.c1 < 1e-8,
                                    "drift=" + fmt_short(results[i].drift.c1)));
        rep.comments.push_back("sup_distance[" + tag + "]=" + fmt(sup[i]));
    }
    for (size_t i = 1; i < sup.size(); ++i)
        checks.push_back(make_check("sup_trend[" + fmt_short(cfg.epsilons[i]) + "<=1.1*" + fmt_short(cfg.epsilons[i - 1]) + "]",
                                    sup[i] <= 1.1 * sup[i - 1],
                                    "ratio=" + fmt_short(sup[i] / sup[i - 1])));
    if (conjecture) {
        rep.notes.push_back("alpha=0 with omega!=0 under polar rotations is an open regime; results are reported only");
        for (const auto& c : checks) rep.notes.push_back(c.name + (c.passed ? " holds " : " fails ") + c.detail);
    } else {
        rep.checks = std::move(checks);
    }
    return rep;
}

double traversal_dip_time(const ExperimentConfig& cfg) {
    const SpectralField Y = cfg.y_field();
    const RHState rh = make_rh(cfg.omega, cfg.alpha + cfg.delta, Y);
    const int g = longitude_symmetry(Y);
    if (g == 0 || std::abs(rh.speed_c) < 1e-12) return std::numeric_limits<double>::infinity();
    const double period = 2.0 * kPi / g;
    double shift = std::fmod(rh.speed_c > 0.0 ? cfg.target_beta : -cfg.target_beta, period);
    if (shift < 0.0) shift += period;
    if (shift < 1e-12 * period) shift = period;  // target equals the initial state: one full revolution
    return shift / std::abs(rh.speed_c);
}

ExperimentReport exp_orbit_traversal(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    rep.experiment = "traversal";
    const SpectralField Y = cfg.y_field();
    const RHState rh = make_rh(cfg.omega, cfg.alpha + cfg.delta, Y);
    const SpectralField target = rotate_polar(Y, -cfg.target_beta) + sin_theta(cfg.L, cfg.alpha);
    const double sin_p = lp_norm(sin_theta(cfg.L), cfg.p);
    const double t_pred = traversal_dip_time(cfg);
    const bool moving = std::isfinite(t_pred);

    ExperimentConfig run_cfg = cfg;
    if (moving) run_cfg.t_end = std::max(cfg.t_end, 1.25 * t_pred);
    rep.comments = provenance_comments(rep.experiment, run_cfg);
    rep.comments.push_back("speed_c_n=" + fmt(rh.speed_c) + " predicted_dip_time=" + fmt(t_pred) +
                           " sin_norm_p=" + fmt(sin_p));
    rep.table.columns = {"t", "distance", "exact_distance"};
    run(exact_state(rh, 0.0), solver_for(run_cfg, 0), {}, [&](double t, const SpectralField& z) {
        rep.table.rows.push_back({t, lp_distance(z, target, cfg.p), lp_distance(exact_state(rh, t), target, cfg.p)});
    });

    const auto& rows = rep.table.rows;
    const double d0 = rows.front()[1];
    if (!moving) {
        double lowest = d0;
        for (const auto& r : rows) lowest = std::min(lowest, r[1]);
        rep.checks.push_back(make_check("no_traversal", lowest >= d0 - 1e-8,
                                        "min-d0=" + fmt_short(lowest - d0)));
        return rep;
    }
    // First dip: search up to half a symmetry period past the prediction.
    const double window = t_pred + 0.5 * (2.0 * kPi / longitude_symmetry(Y)) / std::abs(rh.speed_c);
    double best = std::numeric_limits<double>::infinity(), t_best = 0.0;
    for (const auto& r : rows)
        if (r[0] <= window && r[1] < best) {
            best = r[1];
            t_best = r[0];
        }
    rep.comments.push_back("dip_time=" + fmt(t_best) + " dip_distance=" + fmt(best));
    rep.checks.push_back(make_check("dip<2*delta*|sin|_p", best < 2.0 * cfg.delta * sin_p,
                                    "min=" + fmt_short(best) + " bound=" + fmt_short(2.0 * cfg.delta * sin_p)));
    rep.checks.push_back(make_check("dip_time_within_5%", std::abs(t_best - t_pred) <= 0.05 * t_pred,
                                    "t=" + fmt_short(t_best) + " predicted=" + fmt_short(t_pred)));
    return rep;
}

SpectralField rearrangement_stream(const ExperimentConfig& cfg) {
    SpectralField chi(cfg.L);
    if (cfg.stream_terms.empty()) {
        chi(3, 1) = 1.0 / std::sqrt(2.0);  // Re Y_3^1 with unit L2 norm
        return chi;
    }
    for (const auto& [jm, v] : cfg.stream_terms) {
        if (jm.first > cfg.L) throw std::invalid_argument("rearrangement: stream degree exceeds L");
        if (jm.second == 0 && v.imag() != 0.0) throw std::invalid_argument("rearrangement: order-0 stream terms are real");
        chi(jm.first, jm.second) = v;
    }
    return chi;
}

ExperimentReport exp_rearrangement_bound(const ExperimentConfig& cfg) {
    const auto* y = std::get_if<E2Coeffs>(&cfg.Y);
    if (!y) throw std::invalid_argument("rearrangement: requires a degree-2 Y");
    ExperimentReport rep;
    rep.experiment = "rearrange";
    rep.comments = provenance_comments(rep.experiment, cfg);
    const SpectralField Y = cfg.y_field();
    const SpectralField z0 = Y + sin_theta(cfg.L, cfg.alpha);
    const double M = e_deg2_max(cfg.alpha, Y.norm2());
    rep.comments.push_back("M=" + fmt(M));

    SolverConfig s = solver_for(cfg, 7);
    s.omega = 0.0;
    s.prescribed_stream = rearrangement_stream(cfg);
    const NamedFunctional e2{"e_deg2", [&](const SpectralField& f) { return e_deg2(f, cfg.alpha); }};
    const RunResult r = run(z0, s, {e2});

    rep.table.columns = {"t", "e_deg2_minus_M", "drift_I2", "drift_I3", "drift_I4", "drift_I5", "drift_I6", "drift_I7"};
    const auto& a = r.records.front();
    double worst_excess = -std::numeric_limits<double>::infinity(), worst_drift = 0.0;
    for (const auto& b : r.records) {
        std::vector<double> row{b.t, b.functional_values[0] - M};
        worst_excess = std::max(worst_excess, row[1]);
        for (int k = 0; k < 6; ++k) {
            const double d = std::abs(b.moments[k] - a.moments[k]) / std::max(std::abs(a.moments[k]), 1e-300);
            worst_drift = std::max(worst_drift, d);
            row.push_back(d);
        }
        rep.table.rows.push_back(std::move(row));
    }
    const double e0 = a.functional_values[0] - M;
    rep.checks.push_back(make_check("initial_value_is_M", std::abs(e0) <= 1e-12 * std::max(1.0, std::abs(M)),
                                    "e0-M=" + fmt_short(e0)));
    rep.checks.push_back(make_check("e_deg2<=M+1e-6", worst_excess <= 1e-6, "max=" + fmt_short(worst_excess)));
    rep.checks.push_back(make_check("moment_drift<1e-6", worst_drift < 1e-6, "max=" + fmt_short(worst_drift)));
    rep.notes.push_back("final e_deg2-M=" + fmt(rep.table.rows.back()[1]));
    return rep;
}

}  // namespace rhlab
