#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gqg/certify.hpp"
#include "gqg/evolution.hpp"
#include "gqg/moc.hpp"

namespace gqg {

struct InitialData {
    std::string profile = "random_smooth";  // single_mode | gaussian_bump |
                                            // random_smooth | zero | checkpoint
    int kx = 1, ky = 0;                     // single_mode wavevector
    double amplitude = 1.0;
    double center_x = 3.141592653589793, center_y = 3.141592653589793;
    double width = 0.5;                     // gaussian_bump
    std::uint64_t seed = 1;
    double spectrum_decay = 4.0;            // random_smooth |k|^-decay envelope
    std::string checkpoint_path;
};

struct MocConfig {
    std::string family = "kisel_nv";  // kisel_nv | stationary_holder |
                                      // eventual | power | constant | tabulated
    double delta = 0.1;
    double gamma = 0.05;
    double beta = 1.6;      // kisel_nv tail exponent
    double H = 1.0;
    double xi0 = 0.1;       // eventual head scale
    double coef = 1.0;      // power coefficient
    double exponent = 0.5;  // power exponent
    double lambda = 1.0;    // scaling wrapper; applied when != 1
    double scale_exponent = 0.0;
    std::string csv_path;   // tabulated
};

struct RunConfig {
    std::string mode = "simulate";  // simulate | certify | ladder | diagnose |
                                    // decay-fit
    std::size_t grid_n = 64;
    double box_length = 6.283185307179586;
    SolverParams solver;
    InitialData initial;
    MocConfig moc;
    certify::CriterionConstants constants;

    // certification inputs
    double cert_delta = 0.0;   // 0: derive from moc block
    double cert_gamma = 0.0;
    double cert_H = 0.0;
    double cert_c2 = 0.0;
    double cert_xi0_lo = 0.0, cert_xi0_hi = 0.0;
    std::size_t cert_min_points = 4000;

    // ladder inputs
    double sigma1 = 0.4;
    double lp = 40.0;

    // diagnostics / cadence
    double sample_interval = 0.1;
    double holder_gamma = 0.5;
    double decay_fit_time = 0.0;
    bool with_shells = false;
    bool track_moc = false;

    std::string output_dir = ".";
    std::string input_path;  // checkpoint or series file for diagnose/decay-fit
    std::uint64_t seed = 1;
    int threads = 0;         // 0: library default
};

/// Parse a JSON config document (strict: unknown keys rejected).
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Canonical serialization; equal configs produce identical text.
std::string canonical_json(const RunConfig& cfg);

/// FNV-1a 64-bit hash of the canonical serialization, hex-encoded.
std::string config_hash(const RunConfig& cfg);

/// Either a regime label or a non-empty violation list, never both.
struct ValidationResult {
    std::string regime;  // "subcritical" | "critical" | "supercritical"
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};
ValidationResult validate(const RunConfig& cfg);

/// Construct the configured initial field (smooth profiles only).
ScalarField2D make_initial_data(const InitialData& init, const Grid2D& grid);

/// Construct the configured modulus of continuity.
MocPtr make_moc(const MocConfig& mc);

} // namespace gqg
