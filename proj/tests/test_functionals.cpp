#include <doctest.h>

#include <cmath>
#include <functional>

#include "gqg/functionals.hpp"
#include "gqg/moc.hpp"

using namespace gqg;

namespace {

// Composite midpoint Riemann sum on a log-spaced mesh; the independent check
// against the adaptive quadrature.
double log_riemann(const std::function<double(double)>& f, double a, double b,
                   std::size_t n) {
    const double sa = std::log(a), sb = std::log(b);
    const double h = (sb - sa) / double(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = sa + (i + 0.5) * h;
        const double eta = std::exp(s);
        sum += f(eta) * eta;
    }
    return sum * h;
}

// Brute-force dissipation functional (c_beta = 1): near integral from a tiny
// cutoff (the integrand is O(eta^{1-beta}) there) and far integral with an
// analytic constant-level tail beyond the horizon.
double upsilon_oracle(const Moc& m, double xi, double beta,
                      std::size_t n = 200000) {
    const double om = m.eval(xi);
    auto near = [&](double eta) {
        return (m.eval(xi + 2.0 * eta) + m.eval(xi - 2.0 * eta) - 2.0 * om) *
               std::pow(eta, -1.0 - beta);
    };
    auto far = [&](double eta) {
        return (m.eval(2.0 * eta + xi) - m.eval(2.0 * eta - xi) - 2.0 * om) *
               std::pow(eta, -1.0 - beta);
    };
    const double R = 1e8 * xi;
    // the cutoff must stay above the level where the second difference
    // drowns in rounding noise; the remainder is the exact leading-order mass
    const double a = 1e-5 * xi;
    const double head =
        4.0 * m.deriv2(xi) * std::pow(a, 2.0 - beta) / (2.0 - beta);
    return head + log_riemann(near, a, 0.5 * xi, n) +
           log_riemann(far, 0.5 * xi, R, n) -
           2.0 * om * std::pow(R, -beta) / beta;
}

// Brute-force drift modulus (c_alpha = 1) with family-aware analytic head and
// tail corrections so the oracle itself is accurate to ~1e-8.
double omega1_oracle(const Moc& m, double xi, double alpha,
                     double origin_exponent, std::size_t n = 200000) {
    auto nearf = [&](double eta) {
        return m.eval(eta) * std::pow(eta, -1.0 - alpha);
    };
    auto farf = [&](double eta) {
        return m.eval(eta) * std::pow(eta, -2.0 - alpha);
    };
    const double a = 1e-8 * xi;
    // below a, omega ~ c eta^g with g the origin exponent
    const double head = (m.eval(a) / std::pow(a, origin_exponent)) *
                        std::pow(a, origin_exponent - alpha) /
                        (origin_exponent - alpha);
    const double R = 1e8 * xi;
    // beyond R treat omega as the constant m(R) (families here are bounded)
    const double tail = m.eval(R) * std::pow(R, -1.0 - alpha) / (1.0 + alpha);
    return head + log_riemann(nearf, a, xi, n) +
           xi * (log_riemann(farf, xi, R, n) + tail);
}

} // namespace

TEST_CASE("linear modulus has vanishing dissipation functional") {
    auto m = make_linear_moc(2.0);
    for (double xi : {0.01, 1.0, 50.0}) {
        auto r = func::upsilon_beta(*m, xi, 1.3);
        CHECK(r.converged);
        CHECK(std::abs(r.value) <= 1e-8);
    }
}

TEST_CASE("constant modulus matches the closed form at 20 combinations") {
    const double H = 1.7;
    auto m = make_constant_moc(H);
    for (double beta : {0.5, 0.9, 1.2, 1.6, 1.9}) {
        for (double xi : {0.01, 0.3, 1.0, 42.0}) {
            auto r = func::upsilon_beta(*m, xi, beta);
            const double closed =
                -std::pow(2.0, 1.0 + beta) * H / (beta * std::pow(xi, beta));
            CHECK(r.converged);
            CHECK(r.value ==
                  doctest::Approx(closed).epsilon(1e-8));
        }
    }
}

TEST_CASE("dissipation functional matches the brute-force oracle") {
    auto p = make_power_moc(1.0, 0.6);
    auto r = func::upsilon_beta(*p, 1.0, 1.3);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(upsilon_oracle(*p, 1.0, 1.3)).epsilon(1e-6));

    auto kn = make_kisel_nv_moc(0.05, 0.01, 1.6);
    for (double xi : {0.02, 0.2}) {
        auto rk = func::upsilon_beta(*kn, xi, 1.6);
        CHECK(rk.converged);
        CHECK(rk.value ==
              doctest::Approx(upsilon_oracle(*kn, xi, 1.6)).epsilon(1e-6));
    }
}

TEST_CASE("drift modulus: closed form for the pure power modulus") {
    // Omega1 = xi^{g-a} (1/(g-a) + 1/(1+a-g)) for omega = xi^g
    const double g = 0.6, a = 0.3;
    auto p = make_power_moc(1.0, g);
    for (double xi : {0.05, 1.0, 20.0}) {
        auto r = func::omega1(*p, xi, a);
        const double closed =
            std::pow(xi, g - a) * (1.0 / (g - a) + 1.0 / (1.0 + a - g));
        CHECK(r.converged);
        CHECK(r.value == doctest::Approx(closed).epsilon(1e-8));
    }
}

TEST_CASE("drift modulus matches the brute-force oracle") {
    auto p = make_power_moc(1.0, 0.6);
    auto rp = func::omega1(*p, 1.0, 0.3);
    CHECK(rp.value ==
          doctest::Approx(omega1_oracle(*p, 1.0, 0.3, 0.6)).epsilon(1e-6));

    auto kn = make_kisel_nv_moc(0.05, 0.01, 1.6);
    auto rk = func::omega1(*kn, 0.025, 0.3);
    CHECK(rk.value ==
          doctest::Approx(omega1_oracle(*kn, 0.025, 0.3, 1.0)).epsilon(1e-6));
}

TEST_CASE("dissipation functional is nonpositive for concave families") {
    std::vector<MocPtr> fams = {
        make_kisel_nv_moc(1.0 / 9.0, 0.05, 1.6),
        make_stationary_holder_moc(2.0, 0.25, 0.6),
        make_eventual_moc(2.0, 0.25, 0.6, 0.1),
        make_power_moc(1.0, 0.5),
    };
    for (const auto& m : fams) {
        for (int i = 0; i < 100; ++i) {
            const double xi = 1e-6 * std::pow(10.0, 10.0 * i / 99.0);
            auto r = func::upsilon_beta(*m, xi, 1.4);
            CHECK(r.converged);
            CHECK(r.value <= r.error);
        }
    }
}

TEST_CASE("derivative kink: divergent for order >= 1, finite below") {
    auto st = make_stationary_holder_moc(2.0, 0.25, 0.6);
    auto hi = func::upsilon_beta(*st, 0.25, 1.3);
    CHECK(hi.converged);
    CHECK(hi.value == -kInf);

    auto lo = func::upsilon_beta(*st, 0.25, 0.8);
    CHECK(lo.converged);
    CHECK(std::isfinite(lo.value));
    CHECK(lo.value < 0.0);
}

TEST_CASE("scaling covariance of both functionals") {
    // with omega_l(xi) = l^{b-a-1} omega(l xi):
    //   Omega1_l(xi) = l^{b-1} Omega1(l xi)
    //   Upsilon_l(xi) = l^{2b-a-1} Upsilon(l xi)
    const double a = 0.3, b = 1.6, e = b - a - 1.0;
    auto base = make_kisel_nv_moc(0.05, 0.01, b);
    for (double lam : {0.1, 1.0, 10.0}) {
        auto sc = make_scaled_moc(base, lam, e);
        for (double xi : {0.003, 0.04, 0.8, 30.0}) {
            auto o_s = func::omega1(*sc, xi, a);
            auto o_b = func::omega1(*base, lam * xi, a);
            CHECK(o_s.value ==
                  doctest::Approx(std::pow(lam, b - 1.0) * o_b.value)
                      .epsilon(1e-8));
            auto u_s = func::upsilon_beta(*sc, xi, b);
            auto u_b = func::upsilon_beta(*base, lam * xi, b);
            CHECK(u_s.value ==
                  doctest::Approx(std::pow(lam, 2.0 * b - a - 1.0) * u_b.value)
                      .epsilon(1e-8));
        }
    }
}

TEST_CASE("plateau-family tail obeys the Holder tail bound below the knee") {
    // xi * int_xi^inf omega/eta^{2+alpha} <= xi^{-alpha} omega(xi)/(1+alpha-gamma)
    const double H = 2.0, delta = 0.25, gamma = 0.6, alpha = 0.3;
    auto st = make_stationary_holder_moc(H, delta, gamma);
    for (int i = 0; i < 50; ++i) {
        const double xi = delta * std::pow(10.0, -4.0 + 4.0 * i / 49.0);
        auto total = func::omega1(*st, xi, alpha);
        REQUIRE(total.converged);
        auto nearf = [&](double eta) {
            return st->eval(eta) * std::pow(eta, -1.0 - alpha);
        };
        const double a0 = 1e-10 * xi;
        const double near =
            (st->eval(a0) / std::pow(a0, gamma)) *
                std::pow(a0, gamma - alpha) / (gamma - alpha) +
            log_riemann(nearf, a0, xi, 100000);
        const double far = total.value - near;
        const double bound =
            std::pow(xi, -alpha) * st->eval(xi) / (1.0 + alpha - gamma);
        CHECK(far <= bound * (1.0 + 1e-6));
    }
}

TEST_CASE("refusals: domain and hypothesis violations are rejected") {
    auto kn = make_kisel_nv_moc(0.05, 0.01, 1.6);
    CHECK_THROWS_AS(func::upsilon_beta(*kn, -1.0, 1.6), std::domain_error);
    CHECK_THROWS_AS(func::upsilon_beta(*kn, 1.0, 2.0), std::domain_error);
    CHECK_THROWS_AS(func::upsilon_beta(*kn, 1.0, 0.0), std::domain_error);

    // non-concave modulus refused when the concavity gate is on
    auto bent = make_kisel_nv_moc(0.0088, 0.4, 1.6);
    CHECK_THROWS_AS(func::upsilon_beta(*bent, 0.01, 1.6, 1.0, true),
                    std::domain_error);
    CHECK_NOTHROW(func::upsilon_beta(*bent, 0.01, 1.6, 1.0, false));

    // positive value at the origin diverges in the drift integral
    auto ev = make_eventual_moc(2.0, 0.25, 0.6, 0.25);
    CHECK_THROWS_AS(func::omega1(*ev, 0.1, 0.3), std::domain_error);
    // origin exponent at or below alpha diverges too
    auto shallow = make_power_moc(1.0, 0.3);
    CHECK_THROWS_AS(func::omega1(*shallow, 0.1, 0.3), std::domain_error);
    CHECK_THROWS_AS(func::omega1(*kn, 0.0, 0.3), std::domain_error);
}

TEST_CASE("reported error bounds hold against the oracle") {
    auto kn = make_kisel_nv_moc(0.05, 0.01, 1.6);
    for (double xi : {0.02, 0.3, 5.0}) {
        auto r = func::upsilon_beta(*kn, xi, 1.6);
        const double truth = upsilon_oracle(*kn, xi, 1.6, 400000);
        CHECK(std::abs(r.value - truth) <=
              std::max(r.error, 1e-6 * std::abs(truth)) + 1e-10);
    }
}
