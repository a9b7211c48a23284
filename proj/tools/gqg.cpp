#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gqg/run.hpp"

namespace {

struct Overrides {
    std::optional<std::string> config_path;
    std::optional<std::string> output_dir;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;

    std::optional<std::size_t> grid_n;
    std::optional<double> box_length;
    std::optional<double> alpha, beta, nu, epsilon, dt, t_end, cfl_safety,
        dealias, grad_ceiling;
    std::optional<std::size_t> truncation_modes;
    bool force_cfl = false;

    std::optional<std::string> profile;
    std::optional<int> kx, ky;
    std::optional<double> amplitude, center_x, center_y, width, spectrum_decay;
    std::optional<std::uint64_t> data_seed;

    std::optional<std::string> family;
    std::optional<double> moc_delta, moc_gamma, moc_beta, moc_H, moc_xi0,
        moc_coef, moc_exponent, moc_lambda, moc_scale_exponent;
    std::optional<std::string> moc_csv;

    std::optional<double> c_alpha, c_beta, c_beta_prime, A;
    std::optional<double> cert_delta, cert_gamma, cert_H, cert_c2, cert_xi0_lo,
        cert_xi0_hi;
    std::optional<std::size_t> min_points;

    std::optional<double> sigma1, lp;

    std::optional<double> sample_interval, holder_gamma, decay_fit_time;
    bool with_shells = false;
    bool track_moc = false;
    std::optional<std::string> input_path;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "JSON config file");
    sub->add_option("--output-dir", o.output_dir,
                    "artifact directory (default: $GQG_OUTPUT_DIR or .)");
    sub->add_option("--threads", o.threads, "worker thread cap (0 = auto)");
    sub->add_option("--seed", o.seed, "sampling seed");
}

void add_exponents(CLI::App* sub, Overrides& o) {
    sub->add_option("--alpha", o.alpha, "velocity-law exponent, in ]0,1[");
    sub->add_option("--beta", o.beta, "dissipation order, in ]0,2]");
    sub->add_option("--nu", o.nu, "dissipation strength");
}

void add_moc(CLI::App* sub, Overrides& o) {
    sub->add_option("--family", o.family, "modulus family");
    sub->add_option("--moc-delta", o.moc_delta, "modulus delta");
    sub->add_option("--moc-gamma", o.moc_gamma, "modulus gamma");
    sub->add_option("--moc-beta", o.moc_beta, "modulus tail exponent");
    sub->add_option("--moc-H", o.moc_H, "modulus plateau H");
    sub->add_option("--moc-xi0", o.moc_xi0, "modulus head scale");
    sub->add_option("--moc-coef", o.moc_coef, "power modulus coefficient");
    sub->add_option("--moc-exponent", o.moc_exponent, "power modulus exponent");
    sub->add_option("--moc-lambda", o.moc_lambda, "scaling factor");
    sub->add_option("--moc-scale-exponent", o.moc_scale_exponent,
                    "scaling exponent (beta - alpha - 1)");
    sub->add_option("--moc-csv", o.moc_csv, "tabulated modulus CSV");
}

template <typename T, typename U>
void apply(const std::optional<T>& src, U& dst) {
    if (src) dst = static_cast<U>(*src);
}

gqg::RunConfig build_config(const Overrides& o, const std::string& mode) {
    gqg::RunConfig cfg;
    if (o.config_path) cfg = gqg::load_config(*o.config_path);
    cfg.mode = mode;

    if (const char* env = std::getenv("GQG_OUTPUT_DIR"); env && !o.config_path)
        cfg.output_dir = env;
    apply(o.output_dir, cfg.output_dir);
    apply(o.threads, cfg.threads);
    apply(o.seed, cfg.seed);

    apply(o.grid_n, cfg.grid_n);
    apply(o.box_length, cfg.box_length);
    apply(o.alpha, cfg.solver.alpha);
    apply(o.beta, cfg.solver.beta);
    apply(o.nu, cfg.solver.nu);
    apply(o.epsilon, cfg.solver.epsilon);
    apply(o.dt, cfg.solver.dt);
    apply(o.t_end, cfg.solver.t_end);
    apply(o.cfl_safety, cfg.solver.cfl_safety);
    apply(o.dealias, cfg.solver.dealias_fraction);
    apply(o.grad_ceiling, cfg.solver.grad_ceiling);
    if (o.truncation_modes) cfg.solver.truncation_modes = *o.truncation_modes;
    if (o.force_cfl) cfg.solver.force_cfl = true;

    apply(o.profile, cfg.initial.profile);
    apply(o.kx, cfg.initial.kx);
    apply(o.ky, cfg.initial.ky);
    apply(o.amplitude, cfg.initial.amplitude);
    apply(o.center_x, cfg.initial.center_x);
    apply(o.center_y, cfg.initial.center_y);
    apply(o.width, cfg.initial.width);
    apply(o.spectrum_decay, cfg.initial.spectrum_decay);
    apply(o.data_seed, cfg.initial.seed);

    if (o.family) {
        std::string f = *o.family;
        std::replace(f.begin(), f.end(), '-', '_');
        cfg.moc.family = f;
    }
    apply(o.moc_delta, cfg.moc.delta);
    apply(o.moc_gamma, cfg.moc.gamma);
    apply(o.moc_beta, cfg.moc.beta);
    apply(o.moc_H, cfg.moc.H);
    apply(o.moc_xi0, cfg.moc.xi0);
    apply(o.moc_coef, cfg.moc.coef);
    apply(o.moc_exponent, cfg.moc.exponent);
    apply(o.moc_lambda, cfg.moc.lambda);
    apply(o.moc_scale_exponent, cfg.moc.scale_exponent);
    apply(o.moc_csv, cfg.moc.csv_path);

    // certification constants follow the solver exponents unless overridden
    apply(o.alpha, cfg.constants.alpha);
    apply(o.beta, cfg.constants.beta);
    apply(o.nu, cfg.constants.nu);
    apply(o.c_alpha, cfg.constants.c_alpha);
    apply(o.c_beta, cfg.constants.c_beta);
    apply(o.c_beta_prime, cfg.constants.c_beta_prime);
    apply(o.A, cfg.constants.A);
    apply(o.cert_delta, cfg.cert_delta);
    apply(o.cert_gamma, cfg.cert_gamma);
    apply(o.cert_H, cfg.cert_H);
    apply(o.cert_c2, cfg.cert_c2);
    apply(o.cert_xi0_lo, cfg.cert_xi0_lo);
    apply(o.cert_xi0_hi, cfg.cert_xi0_hi);
    apply(o.min_points, cfg.cert_min_points);

    apply(o.sigma1, cfg.sigma1);
    apply(o.lp, cfg.lp);

    apply(o.sample_interval, cfg.sample_interval);
    apply(o.holder_gamma, cfg.holder_gamma);
    apply(o.decay_fit_time, cfg.decay_fit_time);
    if (o.with_shells) cfg.with_shells = true;
    if (o.track_moc) cfg.track_moc = true;
    apply(o.input_path, cfg.input_path);
    return cfg;
}

int dispatch(const Overrides& o, const std::string& mode) {
    gqg::RunConfig cfg;
    try {
        cfg = build_config(o, mode);
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":{\"category\":\"config\",\"message\":\""
                  << e.what() << "\"}}\n";
        return 1;
    }
    const gqg::RunOutcome out = gqg::execute(cfg);
    if (!out.summary.empty()) std::cout << out.summary << '\n';
    if (!out.error_json.empty()) std::cerr << out.error_json;
    return out.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral solver and modulus-of-continuity certifier "
                 "for 2D active scalars with fractional dissipation"};
    app.require_subcommand(1);
    Overrides o;

    CLI::App* sim = app.add_subcommand("simulate", "advance the dynamics");
    add_common(sim, o);
    add_exponents(sim, o);
    add_moc(sim, o);
    sim->add_option("--n", o.grid_n, "grid points per axis (even, >= 8)");
    sim->add_option("--box-length", o.box_length, "domain side length");
    sim->add_option("--epsilon", o.epsilon, "extra viscosity");
    sim->add_option("--dt", o.dt, "time step");
    sim->add_option("--t-end", o.t_end, "final time");
    sim->add_option("--cfl-safety", o.cfl_safety, "CFL safety factor");
    sim->add_option("--dealias", o.dealias, "dealias fraction (default 2/3)");
    sim->add_option("--truncation-modes", o.truncation_modes,
                    "spectral cutoff radius (Galerkin truncation)");
    sim->add_option("--grad-ceiling", o.grad_ceiling,
                    "gradient blow-up ceiling (0 = off)");
    sim->add_flag("--force-cfl", o.force_cfl, "step through CFL violations");
    sim->add_option("--profile", o.profile,
                    "initial data: single_mode | gaussian_bump | "
                    "random_smooth | zero | checkpoint");
    sim->add_option("--kx", o.kx, "single-mode wavevector x");
    sim->add_option("--ky", o.ky, "single-mode wavevector y");
    sim->add_option("--amplitude", o.amplitude, "initial data amplitude");
    sim->add_option("--center-x", o.center_x, "bump center x");
    sim->add_option("--center-y", o.center_y, "bump center y");
    sim->add_option("--width", o.width, "bump width");
    sim->add_option("--spectrum-decay", o.spectrum_decay,
                    "random data spectral decay exponent");
    sim->add_option("--data-seed", o.data_seed, "random data seed");
    sim->add_option("--sample-interval", o.sample_interval,
                    "diagnostic cadence");
    sim->add_option("--holder-gamma", o.holder_gamma,
                    "Holder seminorm exponent");
    sim->add_option("--decay-fit-time", o.decay_fit_time,
                    "time at which the decay envelope constant is fitted");
    sim->add_flag("--with-shells", o.with_shells, "emit shell spectra");
    sim->add_flag("--track-moc", o.track_moc,
                  "monitor modulus obedience during the run");

    CLI::App* cert = app.add_subcommand("certify",
                                        "verify the criterion inequalities");
    add_common(cert, o);
    add_exponents(cert, o);
    add_moc(cert, o);
    cert->add_option("--c-alpha", o.c_alpha, "drift constant");
    cert->add_option("--c-beta", o.c_beta, "dissipation constant");
    cert->add_option("--c-beta-prime", o.c_beta_prime,
                     "reduced dissipation constant");
    cert->add_option("--A", o.A, "drift bound constant");
    cert->add_option("--delta", o.cert_delta, "modulus delta");
    cert->add_option("--gamma", o.cert_gamma, "modulus gamma");
    cert->add_option("--H", o.cert_H, "modulus plateau");
    cert->add_option("--c2", o.cert_c2, "head shrink speed");
    cert->add_option("--xi0-lo", o.cert_xi0_lo, "head scale range, low end");
    cert->add_option("--xi0-hi", o.cert_xi0_hi, "head scale range, high end");
    cert->add_option("--min-points", o.min_points, "minimum xi grid points");

    CLI::App* lad = app.add_subcommand("ladder",
                                       "bootstrap exponent arithmetic");
    add_common(lad, o);
    add_exponents(lad, o);
    lad->add_option("--sigma1", o.sigma1, "starting exponent");
    lad->add_option("--p", o.lp, "integrability index");

    CLI::App* diag = app.add_subcommand("diagnose",
                                        "measure a checkpointed field");
    add_common(diag, o);
    add_exponents(diag, o);
    add_moc(diag, o);
    diag->add_option("--input", o.input_path, "checkpoint file");
    diag->add_option("--holder-gamma", o.holder_gamma,
                     "Holder seminorm exponent");
    diag->add_flag("--with-shells", o.with_shells, "emit shell spectra");
    diag->add_flag("--track-moc", o.track_moc, "modulus obedience check");

    CLI::App* fit = app.add_subcommand("decay-fit",
                                       "fit the sup-norm decay envelope");
    add_common(fit, o);
    add_exponents(fit, o);
    fit->add_option("--input", o.input_path, "series CSV from a simulate run");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (sim->parsed()) return dispatch(o, "simulate");
    if (cert->parsed()) return dispatch(o, "certify");
    if (lad->parsed()) return dispatch(o, "ladder");
    if (diag->parsed()) return dispatch(o, "diagnose");
    return dispatch(o, "decay-fit");
}
