#pragma once

#include <functional>
#include <vector>

namespace gqg {
namespace quad {

struct Result {
    double value = 0.0;
    double error = 0.0;   // estimated absolute error bound
    long evaluations = 0;
    bool converged = true;

    Result& operator+=(const Result& o) {
        value += o.value;
        error += o.error;
        evaluations += o.evaluations;
        converged = converged && o.converged;
        return *this;
    }
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (G7,K15) on [a, b] to the given absolute tolerance.
/// `splits` pins subdivision points (piecewise seams of the integrand); they
/// are clipped to the interior of [a, b].
Result integrate(const Integrand& f, double a, double b, double abs_tol,
                 const std::vector<double>& splits = {},
                 int max_intervals = 4000);

/// Single non-adaptive K15 panel (fast path for smooth short intervals);
/// error estimate from the embedded G7 rule.
Result panel_kronrod(const Integrand& f, double a, double b);

} // namespace quad
} // namespace gqg
