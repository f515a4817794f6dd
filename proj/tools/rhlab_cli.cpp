#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rhlab/config.hpp"
#include "rhlab/invariants.hpp"
#include "rhlab/lab.hpp"
#include "rhlab/operators.hpp"
#include "rhlab/orbit_metrics.hpp"

using namespace rhlab;

namespace {

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonOptions& o) {
    sub->add_option("--config", o.config_path, "flat key=value configuration file");
    sub->add_option("--set", o.overrides, "key=value override, applied after the file")->take_all();
}

Config load_config(const CommonOptions& o) {
    Config c = o.config_path.empty() ? Config{} : Config::load(o.config_path);
    for (const auto& kv : o.overrides) c.apply_override(kv);
    return c;
}

E2Coeffs require_e2(const ExperimentConfig& cfg) {
    if (const auto* y = std::get_if<E2Coeffs>(&cfg.Y)) return *y;
    throw std::invalid_argument("this command needs a degree-2 Y (5 values)");
}

E2Coeffs parse_e2(const std::string& s) {
    Config c;
    c.set("Y", s);
    const auto v = c.get_list("Y");
    if (v.size() != 5) throw std::invalid_argument("expected 5 comma-separated E2 coefficients");
    return {v[0], v[1], v[2], v[3], v[4]};
}

// Writes the report CSV to cfg.output_path or stdout; checks go to stderr. Returns the exit code.
int emit(const ExperimentReport& r, const ExperimentConfig& cfg) {
    if (cfg.output_path.empty()) {
        write_csv(std::cout, r);
    } else {
        std::ofstream f(cfg.output_path);
        if (!f) throw std::runtime_error("cannot write " + cfg.output_path);
        write_csv(f, r);
    }
    for (const auto& c : r.checks) std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << ' ' << c.detail << '\n';
    for (const auto& n : r.notes) std::cerr << "NOTE " << n << '\n';
    return r.passed() ? 0 : 1;
}

bool rel_close(double x, double y, double tol) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); }

int cmd_invariants(const ExperimentConfig& cfg) {
    const E2Coeffs y = require_e2(cfg);
    const ReducedInvariants r = reduced_invariants(y);
    const auto [p1, p0] = char_poly(y);
    const MomentSet ms = moments_analytic(cfg.alpha, y);
    std::cout << "a,u,v,w,p1,p0,I2,I3,I4,I5,I6,I7\n" << std::setprecision(17) << r.a << ',' << r.u << ',' << r.v
              << ',' << r.w << ',' << p1 << ',' << p0;
    for (double v : ms.I) std::cout << ',' << v;
    std::cout << '\n';

    bool ok = true;
    const SpectralField f = e2_to_spectral(y, cfg.L) + sin_theta(cfg.L, cfg.alpha);
    const auto num = moments_numeric(f, 7);
    for (int k = 0; k < 6; ++k) {
        const double scale = std::max(std::abs(ms.I[k]), 1e-300);
        if (std::abs(num[k] - ms.I[k]) > 1e-10 * std::max(scale, 1.0)) {
            std::cerr << "FAIL moment I" << k + 2 << " analytic " << ms.I[k] << " numeric " << num[k] << '\n';
            ok = false;
        }
    }
    const double res = verify_abcde_system(cfg.alpha, y).max_relative();
    std::cerr << (res < 1e-9 ? "PASS" : "FAIL") << " identity_residual " << res << '\n';
    ok = ok && res < 1e-9;
    if (cfg.alpha != 0.0) {
        const PolySolution sol = solve_polysys(polysystem_from_moments(ms));
        bool found = false;
        for (const auto& x : sol.roots)
            found = found || (rel_close(x[0], r.a, 1e-8) && rel_close(x[1], r.u, 1e-8) && rel_close(x[2], r.v, 1e-8) &&
                              rel_close(x[3], r.w, 1e-8));
        std::cerr << (found ? "PASS" : "FAIL") << " polysys_recovery roots=" << sol.roots.size() << ' ' << sol.report
                  << '\n';
        ok = ok && found;
    }
    return ok ? 0 : 1;
}

int cmd_classify(const ExperimentConfig& cfg, const std::string& other) {
    const E2Coeffs y = require_e2(cfg);
    const E2Coeffs yp = parse_e2(other);
    const bool h = same_h_orbit_deg2(y, yp);
    const bool o3 = same_o3_orbit(y, yp);
    std::cout << "same_h_orbit,same_o3_orbit\n" << h << ',' << o3 << '\n';
    // The polar-rotation orbit lies inside the O(3) orbit.
    const bool consistent = !h || o3;
    std::cerr << (consistent ? "PASS" : "FAIL") << " h_orbit_implies_o3_orbit\n";
    return consistent ? 0 : 1;
}

int cmd_orbit_dist(const ExperimentConfig& cfg, const std::string& group, const std::string& field_path,
                   const std::string& snapshot_path) {
    const SpectralField target = e2_to_spectral(require_e2(cfg), cfg.L) + sin_theta(cfg.L, cfg.alpha);
    const SpectralField f = field_path.empty()
                                ? target + cfg.epsilons.front() * random_perturbation(cfg.L, cfg.perturbation)
                                : load_spectral(field_path).truncated(cfg.L);
    SpectralField nearest;
    std::cout << std::setprecision(17);
    if (group == "polar") {
        const PolarOrbitDistance d = dist_polar_orbit(f, target, cfg.p, true);
        const SpectralField t = d.reflected ? reflect_longitude(target) : target;
        nearest = rotate_polar(t, -d.beta_star);
        std::cout << "distance,beta_star,reflected\n" << d.distance << ',' << d.beta_star << ',' << d.reflected << '\n';
    } else {
        const So3OrbitDistance d = dist_so3_orbit(f, target, cfg.p);
        nearest = rotate_so3(target, d.euler_star);
        std::cout << "distance,euler_alpha,euler_beta,euler_gamma\n"
                  << d.distance << ',' << d.euler_star.alpha << ',' << d.euler_star.beta << ',' << d.euler_star.gamma
                  << '\n';
    }
    if (!snapshot_path.empty()) save_spectral(snapshot_path, nearest);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rossby-Haurwitz stability laboratory"};
    app.set_version_flag("--version", std::string("rhlab ") + RHLAB_VERSION);
    app.require_subcommand(1);

    CommonOptions o;
    std::string group = "polar", other, field_path, snapshot_path;

    auto* rh = app.add_subcommand("rh-verify", "evolve an RH state against its closed form");
    auto* st = app.add_subcommand("stability", "epsilon sweep of orbit distances");
    auto* tr = app.add_subcommand("traversal", "distance of an alpha-shifted RH state to a fixed target");
    auto* re = app.add_subcommand("rearrange", "transport by a prescribed stream, tracking e_deg2 and moments");
    auto* inv = app.add_subcommand("invariants", "print a,u,v,w,p1,p0,I2..I7 and check the algebra");
    auto* cl = app.add_subcommand("classify", "orbit membership of two degree-2 fields");
    auto* od = app.add_subcommand("orbit-dist", "distance of a field to the RH orbit");
    for (auto* s : {rh, st, tr, re, inv, cl, od}) add_common(s, o);
    st->add_option("--group", group, "polar or so3")->check(CLI::IsMember({"polar", "so3"}));
    od->add_option("--group", group, "polar or so3")->check(CLI::IsMember({"polar", "so3"}));
    cl->add_option("--with", other, "second field as a,b,c,d,e")->required();
    od->add_option("--field", field_path, "field in spectral text format; default is the perturbed RH state");
    od->add_option("--snapshot", snapshot_path, "write the nearest orbit point in spectral text format");

    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentConfig cfg = experiment_config(load_config(o));
        if (rh->parsed()) {
            int code = emit(exp_rh_exactness(cfg), cfg);
            if (!cfg.convergence_dts.empty()) {
                ExperimentConfig c2 = cfg;
                if (!c2.output_path.empty()) c2.output_path += ".convergence.csv";
                code = std::max(code, emit(exp_rh_convergence(c2), c2));
            }
            return code;
        }
        if (st->parsed()) return emit(exp_stability(cfg, group == "so3" ? OrbitGroup::so3 : OrbitGroup::polar), cfg);
        if (tr->parsed()) return emit(exp_orbit_traversal(cfg), cfg);
        if (re->parsed()) return emit(exp_rearrangement_bound(cfg), cfg);
        if (inv->parsed()) return cmd_invariants(cfg);
        if (cl->parsed()) return cmd_classify(cfg, other);
        if (od->parsed()) return cmd_orbit_dist(cfg, group, field_path, snapshot_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
