#include <doctest.h>

#include <cmath>

#include "gqg/certify.hpp"
#include "gqg/moc.hpp"

using namespace gqg;
using namespace gqg::certify;

namespace {

CriterionConstants consts(double alpha, double beta, double nu = 1.0) {
    CriterionConstants c;
    c.alpha = alpha;
    c.beta = beta;
    c.nu = nu;
    return c;
}

// closed-form sufficient thresholds for the two-piece family scan
double delta_bound(double a, double b, double nu = 1.0) {
    return std::pow(3.0 * nu * a * (1.0 - a) / 16.0, 1.0 / (b - a - 0.5));
}
double gamma_bound(double delta, double a, double nu = 1.0) {
    return std::min(delta, nu * a * (1.0 - a) * std::pow(delta, a) / 2.0);
}

} // namespace

TEST_CASE("log grid covers the span, stays sorted, brackets breakpoints") {
    auto g = build_log_grid(1e-4, 1e4, {1.0}, 125);
    CHECK(g.front() == doctest::Approx(1e-4));
    CHECK(g.back() == doctest::Approx(1e4));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK(g.size() >= std::size_t(8 * 125));
    bool lo = false, hi = false;
    for (double x : g) {
        if (x == 1.0 * (1.0 - 1e-9)) lo = true;
        if (x == 1.0 * (1.0 + 1e-9)) hi = true;
    }
    CHECK(lo);
    CHECK(hi);
}

TEST_CASE("subcritical scan passes at half the closed-form thresholds") {
    const double a = 0.3, b = 1.6;
    const double d = 0.5 * delta_bound(a, b);
    const double g = 0.5 * gamma_bound(d, a);
    auto cert = certify_subcritical(d, g, consts(a, b), 500);
    CHECK(cert.pass);
    CHECK(cert.kind == "subcritical");
    CHECK(cert.grid_points >= 500);
    CHECK(cert.worst_margin < 0.0);
    CHECK(std::isfinite(cert.max_quad_error));
    // PASS means margin + error < 0 at every sample
    for (const auto& s : cert.samples) CHECK(s.margin + s.quad_error < 0.0);
    // recorded thresholds match the closed forms
    CHECK(cert.thresholds.at("delta_bound") ==
          doctest::Approx(delta_bound(a, b)).epsilon(1e-12));
    CHECK(cert.thresholds.at("gamma_bound") ==
          doctest::Approx(gamma_bound(d, a)).epsilon(1e-12));
    CHECK(cert.parameters.at("concave") == 1.0);
}

TEST_CASE("subcritical scan fails with a recorded witness at inflated slope") {
    const double a = 0.3, b = 1.6;
    const double d = 0.5 * delta_bound(a, b);
    const double g = 100.0 * 0.5 * gamma_bound(d, a);
    auto cert = certify_subcritical(d, g, consts(a, b), 500);
    CHECK_FALSE(cert.pass);
    CHECK(cert.worst_margin >= 0.0);
    CHECK(cert.worst_xi > 0.0);
    // failures extend above the seam
    bool above = false;
    for (const auto& s : cert.samples)
        if (s.xi > d && s.margin + s.quad_error >= 0.0) above = true;
    CHECK(above);
    CHECK(cert.parameters.at("concave") == 0.0);
}

TEST_CASE("subcritical scan reports a strictly negative far-tail margin") {
    const double a = 0.3, b = 1.6;
    const double d = 0.5 * delta_bound(a, b);
    auto cert = certify_subcritical(d, 0.5 * gamma_bound(d, a), consts(a, b), 500);
    const auto& tail = cert.samples.back();
    CHECK(tail.xi == doctest::Approx(1e8 * d).epsilon(1e-9));
    CHECK(tail.margin < 0.0);
    CHECK(tail.dissipation_term < 0.0);
}

TEST_CASE("subcritical scan rejects the wrong scaling regime") {
    CHECK_THROWS_AS(certify_subcritical(0.01, 0.001, consts(0.5, 1.4), 100),
                    std::domain_error);
}

TEST_CASE("verdicts are monotone in the dissipation strength") {
    const double a = 0.3, b = 1.6;
    const double d = 0.5 * delta_bound(a, b);
    const double g = 0.5 * gamma_bound(d, a);
    auto c1 = certify_subcritical(d, g, consts(a, b, 1.0), 300);
    auto c2 = certify_subcritical(d, g, consts(a, b, 2.0), 300);
    CHECK(c1.pass);
    CHECK(c2.pass);
    // margins are affine in nu with a negative dissipation coefficient
    for (std::size_t i = 0; i < c1.samples.size(); ++i)
        CHECK(c2.samples[i].margin <= c1.samples[i].margin + 1e-12);
}

TEST_CASE("certificates serialize reproducibly across thread counts") {
    const double a = 0.3, b = 1.6;
    const double d = 0.5 * delta_bound(a, b);
    const double g = 0.5 * gamma_bound(d, a);
    set_max_threads(1);
    auto c1 = certify_subcritical(d, g, consts(a, b), 300);
    set_max_threads(8);
    auto c2 = certify_subcritical(d, g, consts(a, b), 300);
    set_max_threads(0);
    CHECK(c1.to_json() == c2.to_json());
}

TEST_CASE("shrinking-head certification passes at half the coefficient bounds") {
    const double a = 0.3, b = 0.9, gam = 0.8;
    CriterionConstants c = consts(a, b);
    const double c2_bound = c.c_beta_prime * c.nu / (2.0 * gam);       // 0.625
    const double c1_bound =
        std::min(c.nu * c.c_beta_prime * (1.0 - gam) / (2.0 * c.A * gam),
                 c.nu / (c.A * gam));                                  // 0.125
    const double delta = 0.2;
    const double H = 0.5 * c1_bound * std::pow(delta, a + 1.0 - b);
    auto cert = certify_eventual(H, delta, gam, 1e-4 * delta, delta,
                                 0.5 * c2_bound, c, 200, 50);
    CHECK(cert.pass);
    CHECK(cert.kind == "eventual");
    CHECK(cert.thresholds.at("c2_bound") == doctest::Approx(c2_bound));
    CHECK(cert.thresholds.at("c1_bound") == doctest::Approx(c1_bound));
    for (const auto& s : cert.samples)
        if (s.label != "truncation-coefficient")
            CHECK(s.margin < 0.0);
}

TEST_CASE("shrinking-head certification fails on the time-derivative margin at 10x") {
    const double a = 0.3, b = 0.9, gam = 0.8;
    CriterionConstants c = consts(a, b);
    const double delta = 0.2;
    const double H = 0.5 * 0.125 * std::pow(delta, a + 1.0 - b);
    auto cert = certify_eventual(H, delta, gam, 1e-4 * delta, delta,
                                 10.0 * 0.625, c, 200, 50);
    CHECK_FALSE(cert.pass);
    CHECK(cert.worst_label == "time-derivative");
    // the sign flips where the shrinking scale meets the probe scale
    CHECK(cert.worst_xi == doctest::Approx(cert.worst_xi0).epsilon(1e-9));
}

TEST_CASE("truncation-coefficient margin at the seam reduces to nu >= A gamma C1") {
    const double a = 0.3, b = 0.9, gam = 0.8;
    CriterionConstants c = consts(a, b);
    const double delta = 0.2;
    // C1 slightly above nu/(A gamma) = 1.25 must fail exactly that check
    const double H = 1.3 * std::pow(delta, a + 1.0 - b);
    auto cert = certify_eventual(H, delta, gam, delta, delta, 1e-6, c, 50, 1);
    CHECK_FALSE(cert.pass);
    bool flagged = false;
    for (const auto& s : cert.samples)
        if (s.label == "truncation-coefficient" && s.margin > 0.0) flagged = true;
    CHECK(flagged);
}

TEST_CASE("shrinking-head certification rejects out-of-scope exponents") {
    CriterionConstants c = consts(0.3, 1.6);  // beta > alpha + 1
    CHECK_THROWS_AS(certify_eventual(0.1, 0.2, 0.8, 0.01, 0.2, 0.1, c),
                    std::domain_error);
    CriterionConstants c2 = consts(0.5, 0.9);  // gamma below alpha/2..alpha+1-beta gate
    CHECK_THROWS_AS(certify_eventual(0.1, 0.2, 0.55, 0.01, 0.2, 0.1, c2),
                    std::domain_error);
}

TEST_CASE("exponent ladder reproduces the worked example") {
    auto r = regularity_ladder(0.5, 1.2, 0.4, 40.0);
    CHECK(r.sigma0 == doctest::Approx(0.3));
    CHECK(r.p1 == doctest::Approx(2.0 / 0.7));
    CHECK(r.p2 == doctest::Approx(20.0));
    CHECK(r.increment == doctest::Approx(0.05));
    CHECK_FALSE(r.stalls);
    CHECK(r.p_admissible);
    CHECK(r.n0 == 4);
    REQUIRE(r.sigma.size() >= 5);
    CHECK(r.sigma[0] == doctest::Approx(0.4));
    CHECK(r.sigma[1] == doctest::Approx(0.45));
    CHECK(r.sigma[4] == doctest::Approx(1.15));
}

TEST_CASE("exponent ladder explicit form equals the recurrence") {
    const double a = 0.37, b = 1.51, s1 = 0.42, p = 31.0;
    auto r = regularity_ladder(a, b, s1, p, 12);
    const double c = b - 1.0 - a - 2.0 / p;
    double sig = s1;
    for (int n = 0; n + 1 < int(r.sigma.size()) && n < 10; ++n) {
        sig = 2.0 * sig + c;
        const double expl = std::pow(2.0, n + 1) * (s1 + c) - c;
        CHECK(r.sigma[n + 1] == doctest::Approx(sig).epsilon(1e-12));
        CHECK(r.sigma[n + 1] == doctest::Approx(expl).epsilon(1e-12));
    }
}

TEST_CASE("exponent ladder stalls at the critical integrability index") {
    auto r = regularity_ladder(0.5, 1.2, 0.4, 19.9);  // just below p2 = 20
    CHECK(r.stalls);
    CHECK(r.increment <= 0.0);
    CHECK(r.minimal_p == doctest::Approx(20.0));
    CHECK_FALSE(r.p_admissible);
}

TEST_CASE("scale selection: small data with a small gradient needs no rescaling") {
    const double a = 0.3, b = 1.6;
    auto m = make_kisel_nv_moc(0.05, 0.01, b);
    const double c0 = 0.9 * m->sup();
    const double M = c0 / 4.0;
    auto sel = lambda_for_data(M, 1e-12, c0, *m, a, b);
    CHECK(sel.lambda == doctest::Approx(1.0));
    CHECK(sel.delta0 ==
          doctest::Approx(m->inverse(2.0 * M)).epsilon(1e-10));
}

TEST_CASE("scale selection grows with the data gradient") {
    const double a = 0.3, b = 1.6;
    auto m = make_kisel_nv_moc(0.05, 0.01, b);
    const double c0 = 0.5 * m->sup(), M = 0.1;
    // gradients large enough that the gradient branch of the max dominates
    const double l1 = lambda_for_data(M, 1e7, c0, *m, a, b).lambda;
    const double l2 = lambda_for_data(M, 2e7, c0, *m, a, b).lambda;
    CHECK(l2 == doctest::Approx(2.0 * l1).epsilon(1e-12));
    CHECK_THROWS_AS(lambda_for_data(M, 1.0, 2.0 * m->sup(), *m, a, b),
                    std::domain_error);
}

TEST_CASE("decay envelope: initial value, monotonicity, asymptotics") {
    const double M = 2.0, L2 = 5.0, b = 1.5, C = 0.7;
    CHECK(decay_bound(M, L2, b, C, 0.0) == doctest::Approx(M));
    double prev = decay_bound(M, L2, b, C, 0.0);
    for (double t : {0.1, 1.0, 10.0, 1e3}) {
        const double v = decay_bound(M, L2, b, C, t);
        CHECK(v < prev);
        prev = v;
    }
    const double t = 1e6;
    const double asym = L2 / std::pow(C * t, 1.0 / b);
    CHECK(decay_bound(M, L2, b, C, t) == doctest::Approx(asym).epsilon(0.01));
}

TEST_CASE("constants block validation") {
    CriterionConstants c;
    CHECK_NOTHROW(c.validate());
    c.c_alpha = 0.0;
    CHECK_THROWS_AS(c.validate(), std::domain_error);
    c = CriterionConstants{};
    c.alpha = 1.2;
    CHECK_THROWS_AS(c.validate(), std::domain_error);
    c = CriterionConstants{};
    c.beta = 2.3;
    CHECK_THROWS_AS(c.validate(), std::domain_error);
}
