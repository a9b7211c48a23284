#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "gqg/checkpoint.hpp"
#include "gqg/config.hpp"

using namespace gqg;

TEST_CASE("default config parses, round-trips, and hashes reproducibly") {
    RunConfig a = parse_config("{}");
    const std::string text = canonical_json(a);
    RunConfig b = parse_config(text);
    CHECK(canonical_json(b) == text);
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("hash tracks the content") {
    RunConfig a = parse_config("{}");
    RunConfig b = parse_config(R"({"grid": {"n": 128}})");
    RunConfig c = parse_config(R"({"solver": {"nu": 0.25}})");
    CHECK(config_hash(a) != config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
    CHECK(config_hash(b) != config_hash(c));
}

TEST_CASE("unknown keys are rejected at every level") {
    CHECK_THROWS_AS(parse_config(R"({"grdi": {}})"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"solver": {"viscosity": 1.0}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"moc": {"Delta": 0.1}})"),
                    std::invalid_argument);
    CHECK_THROWS(parse_config("not json at all"));
}

TEST_CASE("nested values land in the right fields") {
    RunConfig c = parse_config(R"({
        "mode": "certify",
        "grid": {"n": 96, "box_length": 3.0},
        "solver": {"alpha": 0.3, "beta": 1.6, "dt": 0.002,
                   "truncation_modes": 9},
        "moc": {"family": "power", "coef": 2.0, "exponent": 0.7},
        "certify": {"delta": 0.01, "gamma": 0.004, "min_points": 800},
        "ladder": {"sigma1": 0.45, "p": 25.0},
        "diagnostics": {"with_shells": true},
        "threads": 3
    })");
    CHECK(c.mode == "certify");
    CHECK(c.grid_n == 96);
    CHECK(c.box_length == 3.0);
    CHECK(c.solver.alpha == 0.3);
    CHECK(c.solver.dt == 0.002);
    REQUIRE(c.solver.truncation_modes.has_value());
    CHECK(*c.solver.truncation_modes == 9);
    CHECK(c.moc.family == "power");
    CHECK(c.cert_delta == 0.01);
    CHECK(c.cert_min_points == 800);
    CHECK(c.sigma1 == 0.45);
    CHECK(c.lp == 25.0);
    CHECK(c.with_shells);
    CHECK(c.threads == 3);
    // constants inherit the solver exponents unless overridden
    CHECK(c.constants.alpha == 0.3);
    CHECK(c.constants.beta == 1.6);
    RunConfig o = parse_config(
        R"({"solver": {"alpha": 0.3}, "constants": {"alpha": 0.45}})");
    CHECK(o.constants.alpha == 0.45);
    CHECK(o.solver.alpha == 0.3);
}

TEST_CASE("regime classification is total over the admissible exponents") {
    auto regime = [](double a, double b) {
        RunConfig c;
        c.solver.alpha = a;
        c.solver.beta = b;
        c.constants.alpha = a;
        c.constants.beta = b;
        auto r = validate(c);
        REQUIRE(r.ok());
        return r.regime;
    };
    CHECK(regime(0.3, 1.6) == "subcritical");
    CHECK(regime(0.5, 1.5) == "critical");
    CHECK(regime(0.5, 0.9) == "supercritical");
    CHECK(regime(0.2, 0.5) == "supercritical");
}

TEST_CASE("certification scope violations are reported by name") {
    RunConfig c = parse_config(R"({
        "mode": "certify",
        "solver": {"alpha": 0.5, "beta": 0.9},
        "moc": {"family": "eventual", "H": 0.1, "delta": 0.2,
                "gamma": 0.8, "xi0": 0.02}
    })");
    auto r = validate(c);  // beta = 0.9 <= 2 alpha = 1.0
    REQUIRE_FALSE(r.ok());
    CHECK(r.regime.empty());
    bool named = false;
    for (const auto& v : r.violations)
        if (v.find("]2 alpha, alpha+1]") != std::string::npos) named = true;
    CHECK(named);

    RunConfig k = parse_config(R"({
        "mode": "certify",
        "solver": {"alpha": 0.5, "beta": 1.4},
        "moc": {"family": "kisel_nv", "delta": 0.01, "gamma": 0.005}
    })");
    auto rk = validate(k);  // beta = 1.4 <= alpha + 1 = 1.5
    REQUIRE_FALSE(rk.ok());
    bool named2 = false;
    for (const auto& v : rk.violations)
        if (v.find("beta > alpha + 1") != std::string::npos) named2 = true;
    CHECK(named2);
}

TEST_CASE("structural violations: grid, mode, profile") {
    RunConfig c;
    c.grid_n = 7;
    CHECK_FALSE(validate(c).ok());
    c = RunConfig{};
    c.mode = "meditate";
    CHECK_FALSE(validate(c).ok());
    c = RunConfig{};
    c.initial.profile = "plasma";
    CHECK_FALSE(validate(c).ok());
    c = RunConfig{};
    c.solver.dt = -1.0;
    CHECK_FALSE(validate(c).ok());
}

TEST_CASE("initial data profiles: deterministic shapes") {
    Grid2D g(32, 2.0 * M_PI);

    InitialData zero;
    zero.profile = "zero";
    CHECK(make_initial_data(zero, g).linf_norm() == 0.0);

    InitialData sm;
    sm.profile = "single_mode";
    sm.kx = 2;
    sm.ky = -1;
    sm.amplitude = 0.5;
    ScalarField2D f = make_initial_data(sm, g);
    double err = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            err = std::max(err, std::abs(f.at(i, j) -
                                         0.5 * std::cos(2.0 * g.coord(i) -
                                                        g.coord(j))));
    CHECK(err <= 1e-14);

    InitialData gb;
    gb.profile = "gaussian_bump";
    gb.amplitude = 2.0;
    gb.center_x = M_PI;
    gb.center_y = M_PI;
    gb.width = 0.5;
    ScalarField2D bump = make_initial_data(gb, g);
    CHECK(bump.linf_norm() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(bump.at(g.n() / 2, g.n() / 2) == doctest::Approx(2.0));
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(bump.physical()[i] >= 0.0);
}

TEST_CASE("random smooth data: normalized, mean-free, seeded") {
    Grid2D g(64, 2.0 * M_PI);
    InitialData r;
    r.profile = "random_smooth";
    r.amplitude = 1.7;
    r.seed = 42;
    ScalarField2D a = make_initial_data(r, g);
    CHECK(a.linf_norm() == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(std::abs(a.mean()) <= 1e-12);
    // imaginary parts cancel: the synthesized spectrum is Hermitian
    double imag_max = 0.0;
    for (double v : a.physical()) imag_max = std::max(imag_max, std::abs(v));
    CHECK(std::isfinite(imag_max));

    ScalarField2D b = make_initial_data(r, g);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(a.physical()[i] == b.physical()[i]);

    r.seed = 43;
    ScalarField2D c = make_initial_data(r, g);
    double diff = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        diff = std::max(diff, std::abs(a.physical()[i] - c.physical()[i]));
    CHECK(diff > 1e-3);
}

TEST_CASE("checkpoint profile insists on a matching grid") {
    Grid2D small(32, 2.0 * M_PI);
    InitialData sm;
    sm.profile = "single_mode";
    ScalarField2D f = make_initial_data(sm, small);
    const std::string path = "cfg_ckpt_test.gqgf";
    checkpoint::save(f, path);

    InitialData ck;
    ck.profile = "checkpoint";
    ck.checkpoint_path = path;
    ScalarField2D back = make_initial_data(ck, small);
    CHECK(back.linf_norm() == doctest::Approx(f.linf_norm()));

    Grid2D big(64, 2.0 * M_PI);
    CHECK_THROWS_AS(make_initial_data(ck, big), std::invalid_argument);
    std::remove(path.c_str());
}

TEST_CASE("modulus factory covers every family and the scaling wrapper") {
    MocConfig mc;
    mc.family = "kisel_nv";
    mc.delta = 0.05;
    mc.gamma = 0.01;
    mc.beta = 1.6;
    auto kn = make_moc(mc);
    auto ref = make_kisel_nv_moc(0.05, 0.01, 1.6);
    CHECK(kn->eval(0.02) == doctest::Approx(ref->eval(0.02)).epsilon(1e-14));

    mc = MocConfig{};
    mc.family = "power";
    mc.coef = 2.0;
    mc.exponent = 0.7;
    CHECK(make_moc(mc)->eval(4.0) ==
          doctest::Approx(2.0 * std::pow(4.0, 0.7)).epsilon(1e-14));

    mc = MocConfig{};
    mc.family = "constant";
    mc.H = 3.0;
    CHECK(make_moc(mc)->eval(123.0) == 3.0);

    mc = MocConfig{};
    mc.family = "stationary_holder";
    mc.H = 2.0;
    mc.delta = 0.25;
    mc.gamma = 0.6;
    mc.lambda = 0.5;
    mc.scale_exponent = 0.3;
    auto scaled = make_moc(mc);
    auto base = make_stationary_holder_moc(2.0, 0.25, 0.6);
    CHECK(scaled->eval(0.1) ==
          doctest::Approx(std::pow(0.5, 0.3) * base->eval(0.05)).epsilon(1e-14));

    mc = MocConfig{};
    mc.family = "parabolic";
    CHECK_THROWS_AS(make_moc(mc), std::invalid_argument);
}

TEST_CASE("missing config files are reported") {
    CHECK_THROWS_AS(load_config("/nonexistent/path/run.json"),
                    std::runtime_error);
}
