#include "gqg/evolution.hpp"

#include <cmath>
#include <limits>

#include "gqg/spectral.hpp"

namespace gqg {

std::vector<std::string> SolverParams::validate() const {
    if (!(alpha > 0.0) || !(alpha < 1.0))
        throw std::invalid_argument("solver: alpha must lie in ]0, 1[");
    if (!(beta > 0.0) || beta > 2.0)
        throw std::invalid_argument("solver: beta must lie in ]0, 2]");
    if (nu < 0.0 || epsilon < 0.0)
        throw std::invalid_argument("solver: nu, epsilon must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("solver: dt must be positive");
    if (t_end < 0.0) throw std::invalid_argument("solver: t_end must be >= 0");
    if (!(cfl_safety > 0.0) || cfl_safety > 1.0)
        throw std::invalid_argument("solver: cfl_safety must lie in ]0, 1]");
    if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0)
        throw std::invalid_argument("solver: dealias_fraction must lie in ]0, 1]");
    std::vector<std::string> warnings;
    if (nu == 0.0 && epsilon == 0.0)
        warnings.push_back("no dissipation (nu = epsilon = 0): inviscid run");
    return warnings;
}

VectorField2D velocity_of(const SimulationState& state,
                          const SolverParams& params) {
    return spectral::velocity(state.theta, params.alpha);
}

double cfl_dt(const SimulationState& state, const SolverParams& params) {
    const double umax = velocity_of(state, params).linf_norm();
    if (umax == 0.0) return std::numeric_limits<double>::infinity();
    return params.cfl_safety * state.theta.grid().dx() / umax;
}

namespace {

// -div(u theta) from a dealiased copy of theta; output is dealiased too
ScalarField2D nonlinear(const ScalarField2D& theta, const SolverParams& p) {
    ScalarField2D th = spectral::dealias(theta, p.dealias_fraction);
    VectorField2D u = spectral::velocity(th, p.alpha);
    ScalarField2D n = spectral::minus_div_product(u, th);
    return spectral::dealias(n, p.dealias_fraction);
}

std::vector<double> dissipation_factor(const Grid2D& g, const SolverParams& p) {
    const std::size_t n = g.n();
    std::vector<double> e(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        const double ky = g.wavenumber(j);
        for (std::size_t i = 0; i < n; ++i) {
            const double kx = g.wavenumber(i);
            const double k2 = kx * kx + ky * ky;
            const double sym =
                p.nu * std::pow(std::sqrt(k2), p.beta) + p.epsilon * k2;
            e[j * n + i] = std::exp(-sym * p.dt);
        }
    }
    e[0] = 1.0;  // zero mode carries no dissipation, exactly
    return e;
}

} // namespace

void step(SimulationState& state, const SolverParams& params) {
    const Grid2D& g = state.theta.grid();
    const std::size_t nn = g.size();

    if (params.truncation_modes)
        state.theta = spectral::truncate_modes(
            state.theta, double(*params.truncation_modes));

    const double dt_max = cfl_dt(state, params);
    if (params.dt > dt_max && !params.force_cfl)
        throw CflViolation(params.dt, dt_max);

    const std::vector<double> E = dissipation_factor(g, params);
    const auto& th = state.theta.spectral();

    // predictor: theta~ = E (theta + dt N(theta))
    ScalarField2D n1 = nonlinear(state.theta, params);
    ScalarField2D pred(g);
    {
        auto& ps = pred.spectral_mut();
        const auto& n1s = n1.spectral();
        for (std::size_t m = 0; m < nn; ++m)
            ps[m] = E[m] * (th[m] + params.dt * n1s[m]);
    }

    // corrector: theta_{n+1} = E theta + dt/2 (E N(theta) + N(theta~))
    ScalarField2D n2 = nonlinear(pred, params);
    ScalarField2D next(g);
    {
        auto& xs = next.spectral_mut();
        const auto& n1s = n1.spectral();
        const auto& n2s = n2.spectral();
        for (std::size_t m = 0; m < nn; ++m)
            xs[m] = E[m] * th[m] +
                    0.5 * params.dt * (E[m] * n1s[m] + n2s[m]);
    }

    if (params.truncation_modes)
        next = spectral::truncate_modes(next, double(*params.truncation_modes));

    for (const auto& c : next.spectral())
        if (std::isnan(c.real()) || std::isnan(c.imag()))
            throw BlowupDetected(state.step_count, "NaN in spectrum");

    state.theta = std::move(next);
    state.t += params.dt;
    ++state.step_count;

    if (params.grad_ceiling > 0.0) {
        const double gmax =
            spectral::gradient(state.theta).linf_norm();
        if (gmax > params.grad_ceiling || std::isnan(gmax))
            throw BlowupDetected(state.step_count,
                                 "gradient ceiling exceeded (" +
                                     std::to_string(gmax) + ")");
    }
}

} // namespace gqg
