#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gqg/config.hpp"
#include "gqg/diagnostics.hpp"

namespace gqg {

struct SimulationResult {
    std::vector<diag::TimeSeriesRecord> series;
    bool truncated = false;            // run stopped early (CFL / blow-up)
    std::string truncation_reason;
    std::optional<ScalarField2D> final_theta;
    double fitted_decay_c = 0.0;
};

/// Advance the configured simulation, sampling diagnostics on the configured
/// cadence.  Step failures truncate the series instead of propagating, so a
/// partial record set is always returned.
SimulationResult run_simulation(const RunConfig& cfg);

/// Versioned CSV emission; a trailing `truncated` line marks partial series.
void write_series_csv(const SimulationResult& result, const std::string& hash,
                      const std::string& path);

struct RunOutcome {
    int exit_code = 0;       // 0 ok, 1 domain/validation, 2 numerical
    std::string summary;     // human-readable result lines
    std::string error_json;  // machine-readable error record when nonzero
    std::vector<std::string> artifacts;  // paths written
};

/// Execute one configured workflow (simulate / certify / ladder / diagnose /
/// decay-fit), write its artifacts and a run manifest under cfg.output_dir.
RunOutcome execute(const RunConfig& cfg);

} // namespace gqg
