#pragma once

#include "gqg/moc.hpp"
#include "gqg/quadrature.hpp"

namespace gqg {
namespace func {

struct Eval {
    double value = 0.0;
    double error = 0.0;    // absolute error bound (quadrature + tail estimates)
    long evaluations = 0;
    bool converged = true; // false: partial estimate only
};

/// Dissipation functional
///   Upsilon_beta(xi) = c_beta * [ I_near + I_far ],
///   I_near = int_0^{xi/2} (omega(xi+2 eta) + omega(xi-2 eta) - 2 omega(xi)) / eta^{1+beta} d eta,
///   I_far  = int_{xi/2}^inf (omega(2 eta+xi) - omega(2 eta-xi) - 2 omega(xi)) / eta^{1+beta} d eta.
/// <= 0 for concave omega.  Requires 0 < beta < 2 (the near integral diverges
/// at beta = 2 for strictly concave omega; reported as non-convergence).
/// Throws std::domain_error for xi <= 0 or (when check_concavity) a
/// non-concave modulus.
Eval upsilon_beta(const Moc& moc, double xi, double beta, double c_beta = 1.0,
                  bool check_concavity = true, double abs_tol = 1e-10);

/// Drift modulus
///   Omega1(xi) = c_alpha * [ int_0^xi omega/eta^{1+alpha} d eta
///                            + xi * int_xi^inf omega/eta^{2+alpha} d eta ].
/// Throws std::domain_error when the near-origin integral diverges
/// (omega(0+) > 0, or origin exponent <= alpha).
Eval omega1(const Moc& moc, double xi, double alpha, double c_alpha = 1.0,
            double abs_tol = 1e-10);

} // namespace func
} // namespace gqg
