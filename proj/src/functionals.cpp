#include "gqg/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gqg {
namespace func {

namespace {

// omega(0) is only defined as a limit; clamp roundoff-negative arguments too.
double safe_eval(const Moc& moc, double x) {
    return x > 0.0 ? moc.eval(x) : moc.value_at_zero();
}

// int_0^{eta_hi} f(eta) d eta for f with an integrable algebraic singularity
// at 0: substitute eta = e^s and extend downward one decade at a time until
// the block contribution is negligible (the integrand decays geometrically
// in s).  `splits` are eta-space seam locations.
quad::Result vanishing_origin_integral(const quad::Integrand& f, double eta_hi,
                                       const std::vector<double>& splits,
                                       double tol) {
    quad::Result total;
    auto g = [&f](double s) {
        const double eta = std::exp(s);
        return f(eta) * eta;
    };
    const double block_w = std::log(10.0);
    double s_hi = std::log(eta_hi);
    const double s_floor = std::log(1e-280);
    for (int blocks = 0; s_hi > s_floor; ++blocks) {
        const double s_lo = s_hi - block_w;
        std::vector<double> s_splits;
        for (double b : splits)
            if (b > 0.0) {
                const double sb = std::log(b);
                if (sb > s_lo && sb < s_hi) s_splits.push_back(sb);
            }
        const double block_tol =
            std::max({0.05 * tol, 1e-11 * std::abs(total.value), 1e-15});
        quad::Result blk = quad::integrate(g, s_lo, s_hi, block_tol, s_splits, 400);
        total += blk;
        if (blocks >= 2 && std::abs(blk.value) + blk.error < block_tol) {
            // remaining blocks decay geometrically; dominate them crudely
            total.error += 3.0 * (std::abs(blk.value) + blk.error);
            break;
        }
        s_hi = s_lo;
    }
    return total;
}

// two-phase adaptive call: quick pass fixes a relative tolerance target
quad::Result integrate_rel(const quad::Integrand& f, double a, double b,
                           double abs_tol, const std::vector<double>& splits) {
    quad::Result coarse = quad::integrate(f, a, b, 1e300, splits, 40);
    const double tol =
        std::max(abs_tol, 1e-10 * std::abs(coarse.value));
    quad::Result fine = quad::integrate(f, a, b, tol, splits);
    fine.evaluations += coarse.evaluations;
    // rounding noise on the integrand puts a floor under the error estimate
    // that refinement cannot beat; a small relative estimate is still a
    // converged answer
    if (!fine.converged &&
        fine.error <= std::max(abs_tol, 1e-7 * std::abs(fine.value)))
        fine.converged = true;
    return fine;
}

// same, but after the substitution eta = e^s; algebraic decay over many
// decades becomes mild exponential decay the adaptive rule resolves cheaply
quad::Result integrate_rel_log(const quad::Integrand& f, double a, double b,
                               double abs_tol,
                               const std::vector<double>& splits) {
    auto g = [&f](double s) {
        const double eta = std::exp(s);
        return f(eta) * eta;
    };
    std::vector<double> s_splits;
    for (double v : splits)
        if (v > a && v < b) s_splits.push_back(std::log(v));
    return integrate_rel(g, std::log(a), std::log(b), abs_tol, s_splits);
}

std::vector<double> interior_splits(const Moc& moc, double lo, double hi,
                                    const std::vector<double>& extra = {}) {
    std::vector<double> s;
    for (double b : moc.breakpoints())
        if (b > lo && b < hi) s.push_back(b);
    for (double b : extra)
        if (b > lo && b < hi) s.push_back(b);
    return s;
}

} // namespace

Eval upsilon_beta(const Moc& moc, double xi, double beta, double c_beta,
                  bool check_concavity, double abs_tol) {
    if (!(xi > 0.0)) throw std::domain_error("upsilon_beta: need xi > 0");
    if (!(beta > 0.0) || !(beta < 2.0))
        throw std::domain_error("upsilon_beta: need beta in ]0, 2[");
    if (check_concavity && !moc.is_concave())
        throw std::domain_error(
            "upsilon_beta: modulus is not concave; sign structure unusable");

    const double om_xi = moc.eval(xi);
    Eval out;

    // near part: int_0^{xi/2} (omega(xi+2e) + omega(xi-2e) - 2 omega(xi)) / e^{1+beta}
    {
        // a derivative kink at xi makes the second difference ~ -jump * eta,
        // so the integral diverges to -inf for beta >= 1 (genuinely, not as a
        // numerical artifact)
        const double dl = moc.deriv(xi, Side::Left);
        const double dr = moc.deriv(xi, Side::Right);
        const double jump = dl - dr;
        const bool kink = jump > 1e-10 * std::max({std::abs(dl), std::abs(dr), 1e-300});
        if (kink && beta >= 1.0) {
            out.value = -kInf;
            out.error = 0.0;
            out.converged = true;
            return out;
        }

        // cutoff below which the second difference is handled by the Taylor
        // bracket g(eta) in 4 eta^2 [min, max] omega'' near xi; direct
        // evaluation there would be pure rounding noise amplified by
        // eta^{-1-beta}
        double eta_c = 1e-3 * xi;
        for (double b : moc.breakpoints()) {
            const double d = std::abs(xi - b);
            if (d > 1e-14 * xi) eta_c = std::min(eta_c, 0.25 * d);
        }
        if (kink) eta_c = 1e-10 * xi;  // beta < 1: integrable kink at xi
        eta_c = std::min(eta_c, 0.499 * xi);

        if (kink) {
            // bound the discarded [0, eta_c] mass by the kink term
            const double m = 2.0 * jump * std::pow(eta_c, 1.0 - beta) / (1.0 - beta);
            out.value += -0.5 * m;
            out.error += 0.5 * m;
        } else {
            double m = kInf, M = -kInf;
            for (double x : {xi - 2.0 * eta_c, xi - eta_c, xi, xi + eta_c,
                             xi + 2.0 * eta_c}) {
                const double d2 = moc.deriv2(x);
                m = std::min(m, d2);
                M = std::max(M, d2);
            }
            const double scale = 2.0 * std::pow(eta_c, 2.0 - beta) / (2.0 - beta);
            out.value += scale * (m + M);
            out.error += scale * (M - m) + 1e-12 * scale * std::abs(m + M);
        }

        // numeric piece on [eta_c, xi/2], integrated in log space; second
        // differences below the rounding floor are zeroed and their largest
        // possible mass is booked as error instead of being chased adaptively
        const double noise_floor =
            32.0 * 2.3e-16 * std::abs(safe_eval(moc, 2.0 * xi));
        out.error += noise_floor * std::pow(eta_c, -beta) / beta;
        auto g = [&](double s) {
            const double eta = std::exp(s);
            double diff = safe_eval(moc, xi + 2.0 * eta) +
                          safe_eval(moc, xi - 2.0 * eta) - 2.0 * om_xi;
            if (std::abs(diff) < noise_floor) diff = 0.0;
            return diff * std::pow(eta, -beta);
        };
        std::vector<double> s_splits;
        for (double b : moc.breakpoints())
            for (double e : {0.5 * (b - xi), 0.5 * (xi - b)})
                if (e > eta_c && e < 0.5 * xi) s_splits.push_back(std::log(e));
        quad::Result near =
            integrate_rel(g, std::log(eta_c), std::log(0.5 * xi), abs_tol,
                          s_splits);
        out.value += near.value;
        out.error += near.error;
        out.evaluations += near.evaluations;
        out.converged = out.converged && near.converged;
    }

    // far part
    {
        auto f = [&](double eta) {
            const double d = moc.eval(2.0 * eta + xi) -
                             safe_eval(moc, 2.0 * eta - xi) - 2.0 * om_xi;
            return d / std::pow(eta, 1.0 + beta);
        };
        std::vector<double> splits;
        for (double b : moc.breakpoints()) {
            splits.push_back(0.5 * (b - xi));
            splits.push_back(0.5 * (b + xi));
        }

        const auto tail = moc.constant_tail();
        if (tail) {
            // beyond eta_c both omega terms equal the tail value: the
            // integrand is exactly -2 omega(xi) eta^{-1-beta}
            const double eta_c = std::max(0.5 * (tail->start + xi), 0.5 * xi);
            if (eta_c > 0.5 * xi) {
                quad::Result head = integrate_rel_log(
                    f, 0.5 * xi, eta_c, abs_tol,
                    interior_splits(moc, 0.5 * xi, eta_c, splits));
                out.value += head.value;
                out.error += head.error;
                out.evaluations += head.evaluations;
                out.converged = out.converged && head.converged;
            }
            out.value += -2.0 * om_xi * std::pow(eta_c, -beta) / beta;
        } else {
            // double the horizon until the bracketed remainder is tight:
            // remainder in [-2 omega(xi), P(R) - 2 omega(xi)] * R^-beta / beta
            // with P(R) = omega(2R+xi) - omega(2R-xi) >= 0 decreasing.
            double brk_max = 0.0;
            for (double b : moc.breakpoints()) brk_max = std::max(brk_max, b);
            double R = std::max({xi, 1.0});
            double prev = 0.5 * xi;
            bool tail_ok = false;
            for (int it = 0; it < 60; ++it) {
                quad::Result part = integrate_rel_log(
                    f, prev, R, std::max(abs_tol, 1e-12),
                    interior_splits(moc, prev, R, splits));
                out.value += part.value;
                out.error += part.error;
                out.evaluations += part.evaluations;
                out.converged = out.converged && part.converged;
                const double P =
                    moc.eval(2.0 * R + xi) - moc.eval(2.0 * R - xi);
                const double scale = std::pow(R, -beta) / beta;
                const double half_width = 0.5 * P * scale;
                const double rel_gate =
                    1e-10 * std::max(std::abs(out.value), 2.0 * om_xi * scale);
                // the remainder bracket needs P decreasing, which holds once
                // the horizon has cleared every derivative seam
                if (2.0 * R - xi > brk_max &&
                    half_width < std::max(abs_tol, rel_gate)) {
                    out.value += (-2.0 * om_xi + 0.5 * P) * scale;
                    out.error += half_width;
                    tail_ok = true;
                    break;
                }
                prev = R;
                R *= 2.0;
            }
            if (!tail_ok) out.converged = false;
        }
    }

    out.value *= c_beta;
    out.error *= c_beta;
    return out;
}

Eval omega1(const Moc& moc, double xi, double alpha, double c_alpha,
            double abs_tol) {
    if (!(xi > 0.0)) throw std::domain_error("omega1: need xi > 0");
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::domain_error("omega1: need alpha in ]0, 1[");
    if (moc.value_at_zero() > 0.0)
        throw std::domain_error(
            "omega1: omega(0+) > 0 makes the near-origin integral diverge");
    if (moc.origin_exponent() <= alpha + 1e-12)
        throw std::domain_error(
            "omega1: origin exponent <= alpha; near-origin integral diverges");

    Eval out;

    // int_0^xi omega(eta) / eta^{1+alpha}
    {
        auto f = [&](double eta) {
            return moc.eval(eta) / std::pow(eta, 1.0 + alpha);
        };
        quad::Result near = vanishing_origin_integral(
            f, xi, moc.breakpoints(), abs_tol);
        out.value += near.value;
        out.error += near.error;
        out.evaluations += near.evaluations;
        out.converged = out.converged && near.converged;
    }

    // xi * int_xi^inf omega(eta) / eta^{2+alpha}
    {
        auto f = [&](double eta) {
            return moc.eval(eta) / std::pow(eta, 2.0 + alpha);
        };
        double far = 0.0, far_err = 0.0;
        const auto tail = moc.constant_tail();
        if (tail && tail->start <= xi) {
            far = tail->value * std::pow(xi, -1.0 - alpha) / (1.0 + alpha);
        } else if (tail) {
            quad::Result head = integrate_rel_log(
                f, xi, tail->start, abs_tol, interior_splits(moc, xi, tail->start));
            far = head.value +
                  tail->value * std::pow(tail->start, -1.0 - alpha) / (1.0 + alpha);
            far_err = head.error;
            out.evaluations += head.evaluations;
            out.converged = out.converged && head.converged;
        } else {
            // remainder bracket from concavity past the horizon:
            // omega(R) <= omega(eta) <= omega(R) + omega'(R) eta for eta >= R
            double R = std::max(xi, 1.0);
            double prev = xi;
            bool tail_ok = false;
            for (int it = 0; it < 60; ++it) {
                quad::Result part = integrate_rel_log(
                    f, prev, R, std::max(abs_tol, 1e-12),
                    interior_splits(moc, prev, R));
                far += part.value;
                far_err += part.error;
                out.evaluations += part.evaluations;
                out.converged = out.converged && part.converged;
                const double om_R = moc.eval(R);
                const double lo = om_R * std::pow(R, -1.0 - alpha) / (1.0 + alpha);
                const double hi =
                    lo + moc.deriv_upper(R) * std::pow(R, -alpha) / alpha;
                const double half_width = 0.5 * (hi - lo);
                if (xi * half_width <
                    std::max(abs_tol, 1e-10 * xi * (far + lo))) {
                    far += 0.5 * (lo + hi);
                    far_err += half_width;
                    tail_ok = true;
                    break;
                }
                prev = R;
                R *= 2.0;
            }
            if (!tail_ok) out.converged = false;
        }
        out.value += xi * far;
        out.error += xi * far_err;
    }

    out.value *= c_alpha;
    out.error *= c_alpha;
    return out;
}

} // namespace func
} // namespace gqg
