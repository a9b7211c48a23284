#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gqg/field.hpp"

namespace gqg {

struct SolverParams {
    double alpha = 0.5;            // velocity-law exponent, in ]0,1[
    double beta = 1.6;             // dissipation order, in ]0,2]
    double nu = 1.0;               // fractional dissipation strength, >= 0
    double epsilon = 0.0;          // extra viscosity, >= 0
    double dt = 1e-3;
    double t_end = 1.0;
    double cfl_safety = 0.8;       // in ]0,1]
    double dealias_fraction = 2.0 / 3.0;
    std::optional<std::size_t> truncation_modes;  // spectral cutoff |k|/k_unit
    double grad_ceiling = 0.0;     // 0 disables the gradient blow-up guard
    bool force_cfl = false;        // step through CFL violations

    /// Throws std::invalid_argument on hard violations; returns advisory
    /// warnings (e.g. no dissipation at all).
    std::vector<std::string> validate() const;
};

struct SimulationState {
    double t = 0.0;
    std::size_t step_count = 0;
    ScalarField2D theta;

    explicit SimulationState(ScalarField2D initial)
        : theta(std::move(initial)) {}
};

struct CflViolation : std::runtime_error {
    CflViolation(double dt_requested_, double dt_max_)
        : std::runtime_error("CFL violation: dt " +
                             std::to_string(dt_requested_) + " > limit " +
                             std::to_string(dt_max_)),
          dt_requested(dt_requested_), dt_max(dt_max_) {}
    double dt_requested, dt_max;
};

struct BlowupDetected : std::runtime_error {
    BlowupDetected(std::size_t step_index_, const std::string& what_)
        : std::runtime_error("blow-up detected at step " +
                             std::to_string(step_index_) + ": " + what_),
          step_index(step_index_) {}
    std::size_t step_index;
};

/// Largest advective step the current velocity admits:
/// cfl_safety * dx / |u|_inf, +inf when u vanishes.
double cfl_dt(const SimulationState& state, const SolverParams& params);

/// Transport velocity of the current state.
VectorField2D velocity_of(const SimulationState& state,
                          const SolverParams& params);

/// One step of the integrating-factor Heun scheme: dissipation
/// exp(-(nu |k|^beta + eps |k|^2) dt) applied exactly, advection -div(u theta)
/// advanced explicitly at order 2 with 2/3-rule dealiasing.  Throws
/// CflViolation (unless force_cfl) and BlowupDetected (NaN, or gradient
/// ceiling when enabled).
void step(SimulationState& state, const SolverParams& params);

} // namespace gqg
