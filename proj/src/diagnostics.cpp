#include "gqg/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

#include "gqg/certify.hpp"
#include "gqg/spectral.hpp"

namespace gqg {
namespace diag {

double holder_seminorm(const ScalarField2D& f, double gamma,
                       std::size_t exhaustive_limit, std::uint64_t seed) {
    if (!(gamma > 0.0) || gamma > 1.0)
        throw std::domain_error("holder_seminorm: gamma must lie in ]0, 1]");
    // |f(x)-f(y)| / d^gamma is the obedience ratio against omega(xi) = xi^gamma
    const MocPtr power = make_power_moc(1.0, gamma);
    return obeys(f, *power, exhaustive_limit, seed).worst_ratio;
}

BesovResult besov_seminorm(const ScalarField2D& f, double s) {
    const Grid2D& g = f.grid();
    BesovResult out;

    double shell_total = 0.0;
    const int jmax = spectral::max_shell(g);
    double last_shell_term = 0.0;
    for (int j = 0; j <= jmax; ++j) {
        const double e = spectral::dyadic_shell_energy(f, j);
        const double w = std::pow(std::pow(2.0, j) * g.k_unit(), 2.0 * s);
        last_shell_term = w * e;
        shell_total += last_shell_term;
    }
    out.shell_sum = std::sqrt(shell_total);
    out.band_limited_warning =
        shell_total > 0.0 && last_shell_term > 0.5 * shell_total;

    const std::size_t n = g.n();
    const auto& spec = f.spectral();
    const double norm = g.dx() * g.dx() / double(n * n);
    double direct = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            if (i == 0 && j == 0) continue;
            const double k = g.k_abs(i, j);
            direct += std::pow(k, 2.0 * s) * std::norm(spec[j * n + i]) * norm;
        }
    out.direct = std::sqrt(direct);
    return out;
}

// ---------------------------------------------------------------------------

Tracker::Tracker(const ScalarField2D& theta0, TrackerOptions opts)
    : opts_(std::move(opts)),
      theta0_linf_(theta0.linf_norm()),
      theta0_l2_(theta0.l2_norm()),
      decay_c_(opts_.decay_c) {}

TimeSeriesRecord Tracker::sample(double t, const ScalarField2D& theta) {
    TimeSeriesRecord rec;
    rec.t = t;
    rec.l2 = theta.l2_norm();
    rec.linf = theta.linf_norm();
    rec.grad_linf = spectral::gradient(theta).linf_norm();
    rec.holder_seminorm =
        holder_seminorm(theta, opts_.holder_gamma, 48, opts_.seed);
    if (opts_.moc)
        rec.moc_obedience_ratio =
            obeys(theta, *opts_.moc, 48, opts_.seed).worst_ratio;

    const double blowup_integrand =
        std::pow(rec.grad_linf, 2.0 + 2.0 * opts_.alpha - opts_.beta);
    ScalarField2D half_diss =
        spectral::fractional_laplacian(theta, 0.5 * opts_.beta);
    const double diss = std::pow(half_diss.l2_norm_spectral(), 2);
    if (have_prev_) {
        const double dt = t - prev_t_;
        blowup_integral_ += 0.5 * dt * (prev_blowup_integrand_ + blowup_integrand);
        diss_integral_ += 0.5 * dt * (prev_diss_ + diss);
    }
    prev_t_ = t;
    prev_blowup_integrand_ = blowup_integrand;
    prev_diss_ = diss;
    have_prev_ = true;

    rec.blowup_integral = blowup_integral_;
    rec.energy_residual = rec.l2 * rec.l2 +
                          2.0 * opts_.nu * diss_integral_ -
                          theta0_l2_ * theta0_l2_;

    if (decay_c_ == 0.0 && opts_.decay_fit_time > 0.0 &&
        t >= opts_.decay_fit_time && rec.linf > 0.0 && theta0_linf_ > 0.0) {
        const double lhs = std::pow(theta0_linf_ / rec.linf, opts_.beta) - 1.0;
        const double scale = std::pow(theta0_linf_ / theta0_l2_, opts_.beta) * t;
        decay_c_ = std::max(lhs / scale, 1e-12);
    }
    if (decay_c_ > 0.0 && theta0_linf_ > 0.0)
        rec.decay_envelope_ratio =
            rec.linf / certify::decay_bound(theta0_linf_, theta0_l2_,
                                            opts_.beta, decay_c_, t);

    if (opts_.with_shells) {
        const int jmax = spectral::max_shell(theta.grid());
        rec.shell_energy.resize(jmax + 1);
        for (int j = 0; j <= jmax; ++j)
            rec.shell_energy[j] = spectral::dyadic_shell_energy(theta, j);
    }

    series_.push_back(rec);
    return rec;
}

} // namespace diag
} // namespace gqg
