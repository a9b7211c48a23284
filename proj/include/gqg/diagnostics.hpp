#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gqg/evolution.hpp"
#include "gqg/moc.hpp"

namespace gqg {
namespace diag {

struct TimeSeriesRecord {
    double t = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    double grad_linf = 0.0;
    double holder_seminorm = 0.0;
    double moc_obedience_ratio = 0.0;  // 0 when no modulus configured
    double blowup_integral = 0.0;      // running int |grad|_inf^{2+2a-b}
    double energy_residual = 0.0;      // |th|^2 + 2 nu int |L^{b/2}th|^2 - |th0|^2
    double decay_envelope_ratio = 0.0; // 0 until the envelope constant is fitted
    std::vector<double> shell_energy;  // per-dyadic-shell L2 energy, optional
};

/// Max of |f(x)-f(y)| / dist(x,y)^gamma over grid pairs with torus geodesic
/// distances; exhaustive for n <= exhaustive_limit, deterministic stratified
/// sampling otherwise.
double holder_seminorm(const ScalarField2D& f, double gamma,
                       std::size_t exhaustive_limit = 48,
                       std::uint64_t seed = 0);

/// Sobolev-type seminorm of order s measured two ways: the dyadic shell sum
/// sqrt(sum_j 2^{2js} E_j) and the direct |k|^{2s}-weighted spectral sum.
/// The two agree within shell-edge factors 2^{+-s}.
struct BesovResult {
    double shell_sum = 0.0;
    double direct = 0.0;
    bool band_limited_warning = false;  // s-weighting dominated by the last shell
};
BesovResult besov_seminorm(const ScalarField2D& f, double s);

struct TrackerOptions {
    double alpha = 0.5;
    double beta = 1.6;
    double nu = 1.0;
    double holder_gamma = 0.5;
    MocPtr moc;                 // optional obedience monitor
    double decay_fit_time = 0.0;  // 0: never fit the envelope
    double decay_c = 0.0;         // preset envelope constant (0: fit)
    bool with_shells = false;
    std::uint64_t seed = 0;
};

/// Stateful series collector: call sample() at (non-decreasing) times; the
/// running time integrals use trapezoids between consecutive samples.
class Tracker {
public:
    Tracker(const ScalarField2D& theta0, TrackerOptions opts);

    TimeSeriesRecord sample(double t, const ScalarField2D& theta);
    const std::vector<TimeSeriesRecord>& series() const { return series_; }
    double fitted_decay_c() const { return decay_c_; }

private:
    TrackerOptions opts_;
    double theta0_linf_, theta0_l2_;
    double decay_c_ = 0.0;
    double prev_t_ = 0.0, prev_blowup_integrand_ = 0.0, prev_diss_ = 0.0;
    double blowup_integral_ = 0.0, diss_integral_ = 0.0;
    bool have_prev_ = false;
    std::vector<TimeSeriesRecord> series_;
};

} // namespace diag
} // namespace gqg
