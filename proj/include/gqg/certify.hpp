#pragma once

#include <map>
#include <string>
#include <vector>

#include "gqg/moc.hpp"

namespace gqg {
namespace certify {

/// The criterion's absolute constants are existential in the theory; here
/// they are explicit configuration (defaults 1.0) and every verdict is
/// conditional on them.
struct CriterionConstants {
    double c_alpha = 1.0;
    double c_beta = 1.0;
    double c_beta_prime = 1.0;
    double A = 1.0;
    double nu = 1.0;
    double alpha = 0.5;
    double beta = 1.6;

    void validate() const;  // throws std::domain_error
};

struct MarginSample {
    double xi = 0.0;
    double xi0 = 0.0;          // 0 when not applicable
    double drift_term = 0.0;   // Omega1 * omega' (or the closed-form bound)
    double dissipation_term = 0.0;  // nu * Upsilon_beta contribution
    double margin = 0.0;
    double quad_error = 0.0;
    std::string label;         // which inequality / regime produced it
};

struct Certificate {
    bool pass = false;
    std::string kind;          // "subcritical" | "eventual"
    double worst_margin = -kInf;
    double worst_xi = 0.0;
    double worst_xi0 = 0.0;
    std::string worst_label;
    double max_quad_error = 0.0;
    std::map<std::string, double> parameters;
    std::map<std::string, double> thresholds;
    double grid_lo = 0.0, grid_hi = 0.0;
    std::size_t grid_points = 0;
    std::string config_hash;   // set by the runner when a config is in play
    std::vector<MarginSample> samples;

    std::string to_json() const;          // canonical serialization
    void write_csv(const std::string& path) const;  // (xi, terms, margin)
};

/// Cap worker threads used by grid scans (0 restores the hardware default).
void set_max_threads(int n);

/// Log-spaced xi grid on [lo, hi] with >= base_per_decade points per decade,
/// densified to >= dense_per_decade within one decade of each breakpoint, and
/// each breakpoint inserted with +-1e-9 relative offsets for one-sided
/// derivative evaluation.
std::vector<double> build_log_grid(double lo, double hi,
                                   const std::vector<double>& brks,
                                   int base_per_decade = 125,
                                   int dense_per_decade = 400);

/// Drift/dissipation margin Omega1(xi) omega'(xi) + nu Upsilon_beta(xi)
/// scanned over [1e-8, 1e8] * delta for the xi - xi^{3/2} family with tail
/// slope gamma / (4 (xi + xi^beta)).  Requires beta > alpha + 1.
/// PASS iff margin + quadrature error < 0 at every grid point.
Certificate certify_subcritical(double delta, double gamma,
                                const CriterionConstants& c,
                                std::size_t min_points = 4000);

/// Shrinking-head family certification via the closed-form bounding
/// expressions: the time-derivative inequality, the drift inequality over its
/// three regimes, and the sign condition on the truncated-dissipation
/// coefficient.  Requires alpha in ]0,1[, beta in ]alpha, alpha+1],
/// gamma > max{alpha+1-beta, alpha/2}.  c1 = H delta^{beta-alpha-1} and c2
/// are checked against their closed-form smallness bounds and the margins
/// are scanned over a (xi, xi0) grid.
Certificate certify_eventual(double H, double delta, double gamma,
                             double xi0_lo, double xi0_hi, double c2,
                             const CriterionConstants& c,
                             std::size_t xi_points = 400,
                             std::size_t xi0_points = 60);

/// Scale selection for initial data:
///   lambda = max{ (4 M / c0)^{1/(beta-alpha-1)}, omega^{-1}(c0) G / M },
///   delta0 = omega^{-1}(2 M / lambda^{beta-alpha-1}),
/// with M = |theta0|_inf, G = |grad theta0|_inf.  Requires beta > alpha + 1
/// and c0 < sup omega.
struct ScaleSelection {
    double lambda = 0.0;
    double delta0 = 0.0;
};
ScaleSelection lambda_for_data(double theta0_linf, double grad_theta0_linf,
                               double c0, const Moc& moc, double alpha,
                               double beta);

/// Bootstrap exponent ladder sigma_{N+1} = 2 sigma_N + beta - 1 - alpha - 2/p.
struct LadderResult {
    double sigma0 = 0.0;     // max{alpha+1-beta, alpha/2}
    double p1 = 0.0;         // 2/(1-sigma0)
    double p2 = 0.0;         // 2/(sigma1-(1+alpha-beta))
    double increment = 0.0;  // sigma1 + beta - 1 - alpha - 2/p
    bool stalls = false;     // increment <= 0
    double minimal_p = 0.0;  // infimum p restoring a positive increment
    bool p_admissible = false;  // p > max{p1, p2}
    std::vector<double> sigma;  // sigma_1 .. sigma_{N0+1}
    int n0 = -1;             // first N with sigma_{N+1} > 1
};
LadderResult regularity_ladder(double alpha, double beta, double sigma1,
                               double p, int max_steps = 64);

/// Sup-norm decay envelope M / (1 + C (M^beta / L2^beta) t)^{1/beta}.
double decay_bound(double theta0_linf, double theta0_l2, double beta, double C,
                   double t);

} // namespace certify
} // namespace gqg
