#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "rhlab/config.hpp"
#include "rhlab/lab.hpp"

using namespace rhlab;

namespace {
constexpr double kPi = std::numbers::pi;

ExperimentConfig parse(const std::string& text) {
    std::istringstream is(text);
    return experiment_config(Config::parse(is));
}

bool has_comment(const ExperimentReport& r, const std::string& prefix) {
    for (const auto& c : r.comments)
        if (c.rfind(prefix, 0) == 0) return true;
    return false;
}
}  // namespace

TEST_CASE("config files and overrides") {
    std::istringstream is("# a run\nname = demo\nL=12\n\nomega = 0.25  # slow\nepsilons = 0.1, 0.05\n");
    Config c = Config::parse(is);
    CHECK(c.get("name") == "demo");
    CHECK(c.get_int("L", 0) == 12);
    CHECK(c.get_double("omega", 0) == 0.25);
    CHECK(c.get_double("missing", 7.5) == 7.5);
    CHECK(c.get_list("epsilons") == std::vector<double>{0.1, 0.05});
    c.apply_override("L=16");
    CHECK(c.get_int("L", 0) == 16);
    CHECK_THROWS_AS(c.apply_override("L16"), std::invalid_argument);

    const ExperimentConfig e = experiment_config(c);
    CHECK(e.L == 16);
    CHECK(e.omega == 0.25);
    CHECK(e.alpha == 1.0);
    CHECK(e.epsilons.size() == 2);

    std::istringstream bad("L=4\nnot a pair\n");
    try {
        Config::parse(bad);
        FAIL("malformed line accepted");
    } catch (const std::invalid_argument& err) {
        CHECK(std::string(err.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("L=4.5\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("speed=3\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("epsilons=0.01,0.02\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("epsilons=0.01,-0.001\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("dt=0\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("p=1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("Y=1,2,3\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse("L=6\nmax_degree=7\n"), std::invalid_argument);
    CHECK_THROWS_AS(Config::load("/nonexistent/rhlab.cfg"), std::runtime_error);
}

TEST_CASE("config field values") {
    const ExperimentConfig e = parse("L=8\nY=0.1,0,0,0,0.2\nstream=3:1:0.5:0,2:0:0.25:0\n");
    const SpectralField y = e.y_field();
    CHECK(y.L() == 8);
    const E2Coeffs back = spectral_to_e2(y);
    CHECK(std::abs(back.a - 0.1) < 1e-15);
    CHECK(std::abs(back.e - 0.2) < 1e-15);
    CHECK(e.stream_terms.size() == 2);

    const ExperimentConfig d1 = parse("L=4\nmax_degree=4\nY=0.3,0,0.1,0.2,-0.1,0.2\n");
    CHECK(degree1_component(d1.y_field()).a.real() == doctest::Approx(0.3));
    CHECK_THROWS_AS(parse("stream=1:2:0:0\n"), std::invalid_argument);
}

TEST_CASE("random perturbations") {
    const SpectralField a = random_perturbation(12, {42, 5});
    const SpectralField b = random_perturbation(12, {42, 5});
    const SpectralField c = random_perturbation(12, {43, 5});
    CHECK((a - b).norm() == 0.0);
    CHECK((a - c).norm() > 0.1);
    CHECK(std::abs(a.norm() - 1.0) < 1e-14);
    CHECK(a.degree_norm2(6) == 0.0);
    CHECK(a(0, 0) == cplx(0.0));
    CHECK_THROWS_AS(random_perturbation(4, {1, 5}), std::invalid_argument);
}

TEST_CASE("CSV round trip") {
    ExperimentConfig cfg;
    ExperimentReport r;
    r.experiment = "demo";
    r.comments = provenance_comments("demo", cfg);
    r.table.columns = {"t", "x"};
    r.table.rows = {{0.0, 1.0 / 3.0}, {0.1, -2.5e-300}, {1e300, std::nextafter(1.0, 2.0)}};
    r.checks.push_back({"ok", true, "fine"});
    r.notes.push_back("informational");

    CHECK(has_comment(r, "experiment=demo"));
    CHECK(has_comment(r, "seed=1"));
    CHECK(has_comment(r, "config="));
    CHECK(has_comment(r, "version="));

    std::stringstream ss;
    write_csv(ss, r);
    const std::string text = ss.str();
    CHECK(text.find("# check ok PASS") != std::string::npos);
    CHECK(text.find("# note informational") != std::string::npos);
    const CsvTable t = read_csv(ss);
    CHECK(t.columns == r.table.columns);
    REQUIRE(t.rows.size() == r.table.rows.size());
    for (size_t i = 0; i < t.rows.size(); ++i) CHECK(t.rows[i] == r.table.rows[i]);

    std::istringstream ragged("a,b\n1,2\n3\n");
    CHECK_THROWS(read_csv(ragged));
}

TEST_CASE("traversal dip time") {
    ExperimentConfig cfg;
    // Shifted speed (alpha + delta)/3 - omega; Y has orders 1 and 2, so a half turn takes pi/|c|.
    const double c = (cfg.alpha + cfg.delta) / 3.0 - cfg.omega;
    CHECK(std::abs(traversal_dip_time(cfg) - kPi / std::abs(c)) < 1e-12);
    CHECK(std::abs(traversal_dip_time(cfg) - 20.944) < 1e-3);

    // Only order 2: rotating by pi is the identity, so the first return is a full symmetry period.
    cfg.Y = E2Coeffs{0, 0, 0, 1, 0};
    CHECK(std::abs(traversal_dip_time(cfg) - kPi / std::abs(c)) < 1e-12);
    cfg.target_beta = kPi / 2;
    CHECK(std::abs(traversal_dip_time(cfg) - (kPi / 2) / std::abs(c)) < 1e-12);

    cfg.Y = E2Coeffs{0.4, 0, 0, 0, 0};
    CHECK(std::isinf(traversal_dip_time(cfg)));

    ExperimentConfig still;
    still.omega = (still.alpha + still.delta) / 3.0;
    CHECK(std::isinf(traversal_dip_time(still)));
}

TEST_CASE("orbit traversal on a coarse grid") {
    ExperimentConfig cfg;
    cfg.L = 6;
    cfg.dt = 1e-2;
    cfg.t_end = 1.0;
    cfg.diag_every = 10;
    const ExperimentReport r = exp_orbit_traversal(cfg);
    CHECK(r.passed());
    CHECK(r.table.rows.back()[0] >= 1.25 * traversal_dip_time(cfg) - 1e-9);

    ExperimentConfig still = cfg;
    still.omega = (still.alpha + still.delta) / 3.0;
    still.t_end = 2.0;
    const ExperimentReport s = exp_orbit_traversal(still);
    CHECK(s.passed());
    bool saw = false;
    for (const auto& ch : s.checks) saw = saw || ch.name == "no_traversal";
    CHECK(saw);
}

TEST_CASE("RH exactness and convergence reports") {
    ExperimentConfig cfg;
    cfg.L = 10;
    cfg.dt = 1e-2;
    cfg.t_end = 0.5;
    cfg.diag_every = 10;
    const ExperimentReport e = exp_rh_exactness(cfg);
    CHECK(e.passed());
    CHECK(e.table.columns == std::vector<std::string>{"t", "rel_error"});
    CHECK(e.table.rows.size() == 6);

    cfg.omega = 5.0;
    cfg.t_end = 1.0;
    cfg.convergence_dts = {0.02, 0.01, 0.005};
    const ExperimentReport c = exp_rh_convergence(cfg);
    CHECK(c.passed());
    REQUIRE(c.table.rows.size() == 3);
    CHECK(c.table.rows[2][2] == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("stability preconditions") {
    ExperimentConfig cfg;
    cfg.L = 6;
    cfg.dt = 1e-2;
    cfg.t_end = 0.1;
    cfg.diag_every = 5;
    cfg.perturbation.max_degree = 4;
    CHECK_THROWS_AS(exp_stability(cfg, OrbitGroup::so3), std::invalid_argument);

    ExperimentConfig still = cfg;
    still.alpha = 0.0;
    still.omega = 0.0;
    CHECK_THROWS_AS(exp_stability(still, OrbitGroup::polar), std::invalid_argument);

    ExperimentConfig open = cfg;
    open.alpha = 0.0;
    const ExperimentReport r = exp_stability(open, OrbitGroup::polar);
    CHECK(r.checks.empty());
    CHECK_FALSE(r.notes.empty());

    ExperimentConfig zonal = cfg;
    zonal.Y = Degree1{0.3, 0.0, 0.0};
    CHECK_THROWS_AS(exp_stability(zonal, OrbitGroup::polar), std::invalid_argument);

    const ExperimentReport p = exp_stability(cfg, OrbitGroup::polar);
    CHECK(p.passed());
    CHECK(p.table.columns == std::vector<std::string>{"epsilon", "t", "orbit_distance"});
    CHECK(has_comment(p, "sup_distance[eps="));
}

TEST_CASE("rearrangement report") {
    ExperimentConfig cfg;
    cfg.omega = 0.0;
    cfg.t_end = 0.1;
    cfg.diag_every = 50;
    const ExperimentReport r = exp_rearrangement_bound(cfg);
    CHECK(r.passed());
    CHECK(r.table.columns.size() == 8);
    CHECK(std::abs(r.table.rows.front()[1]) < 1e-12);
    CHECK(r.table.rows.back()[1] < 0.0);

    // The prescribed stream replaces the Euler stream, so the rotation rate plays no part.
    ExperimentConfig spinning = cfg;
    spinning.omega = 0.5;
    CHECK(exp_rearrangement_bound(spinning).table.rows == r.table.rows);

    ExperimentConfig deg1 = cfg;
    deg1.Y = Degree1{0.3, 0.0, 0.0};
    CHECK_THROWS_AS(exp_rearrangement_bound(deg1), std::invalid_argument);
}
