#include "gqg/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "gqg/checkpoint.hpp"

namespace gqg {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

void reject_unknown(const json& j, const char* block,
                    std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok)
            throw std::invalid_argument(std::string("config: unknown key '") +
                                        it.key() + "' in " + block);
    }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    json j = json::parse(json_text);
    reject_unknown(j, "root",
                   {"mode", "grid", "solver", "initial", "moc", "constants",
                    "certify", "ladder", "diagnostics", "output_dir",
                    "input_path", "seed", "threads"});
    RunConfig cfg;
    get_if(j, "mode", cfg.mode);
    if (j.contains("grid")) {
        const json& g = j["grid"];
        reject_unknown(g, "grid", {"n", "box_length"});
        get_if(g, "n", cfg.grid_n);
        get_if(g, "box_length", cfg.box_length);
    }
    if (j.contains("solver")) {
        const json& s = j["solver"];
        reject_unknown(s, "solver",
                       {"alpha", "beta", "nu", "epsilon", "dt", "t_end",
                        "cfl_safety", "dealias_fraction", "truncation_modes",
                        "grad_ceiling", "force_cfl"});
        get_if(s, "alpha", cfg.solver.alpha);
        get_if(s, "beta", cfg.solver.beta);
        get_if(s, "nu", cfg.solver.nu);
        get_if(s, "epsilon", cfg.solver.epsilon);
        get_if(s, "dt", cfg.solver.dt);
        get_if(s, "t_end", cfg.solver.t_end);
        get_if(s, "cfl_safety", cfg.solver.cfl_safety);
        get_if(s, "dealias_fraction", cfg.solver.dealias_fraction);
        if (s.contains("truncation_modes") && !s["truncation_modes"].is_null())
            cfg.solver.truncation_modes = s["truncation_modes"].get<std::size_t>();
        get_if(s, "grad_ceiling", cfg.solver.grad_ceiling);
        get_if(s, "force_cfl", cfg.solver.force_cfl);
    }
    if (j.contains("initial")) {
        const json& i = j["initial"];
        reject_unknown(i, "initial",
                       {"profile", "kx", "ky", "amplitude", "center_x",
                        "center_y", "width", "seed", "spectrum_decay",
                        "checkpoint_path"});
        get_if(i, "profile", cfg.initial.profile);
        get_if(i, "kx", cfg.initial.kx);
        get_if(i, "ky", cfg.initial.ky);
        get_if(i, "amplitude", cfg.initial.amplitude);
        get_if(i, "center_x", cfg.initial.center_x);
        get_if(i, "center_y", cfg.initial.center_y);
        get_if(i, "width", cfg.initial.width);
        get_if(i, "seed", cfg.initial.seed);
        get_if(i, "spectrum_decay", cfg.initial.spectrum_decay);
        get_if(i, "checkpoint_path", cfg.initial.checkpoint_path);
    }
    if (j.contains("moc")) {
        const json& m = j["moc"];
        reject_unknown(m, "moc",
                       {"family", "delta", "gamma", "beta", "H", "xi0", "coef",
                        "exponent", "lambda", "scale_exponent", "csv_path"});
        get_if(m, "family", cfg.moc.family);
        get_if(m, "delta", cfg.moc.delta);
        get_if(m, "gamma", cfg.moc.gamma);
        get_if(m, "beta", cfg.moc.beta);
        get_if(m, "H", cfg.moc.H);
        get_if(m, "xi0", cfg.moc.xi0);
        get_if(m, "coef", cfg.moc.coef);
        get_if(m, "exponent", cfg.moc.exponent);
        get_if(m, "lambda", cfg.moc.lambda);
        get_if(m, "scale_exponent", cfg.moc.scale_exponent);
        get_if(m, "csv_path", cfg.moc.csv_path);
    }
    // constants default to the solver exponents unless overridden
    cfg.constants.alpha = cfg.solver.alpha;
    cfg.constants.beta = cfg.solver.beta;
    if (j.contains("constants")) {
        const json& c = j["constants"];
        reject_unknown(c, "constants",
                       {"c_alpha", "c_beta", "c_beta_prime", "A", "nu",
                        "alpha", "beta"});
        get_if(c, "c_alpha", cfg.constants.c_alpha);
        get_if(c, "c_beta", cfg.constants.c_beta);
        get_if(c, "c_beta_prime", cfg.constants.c_beta_prime);
        get_if(c, "A", cfg.constants.A);
        get_if(c, "nu", cfg.constants.nu);
        get_if(c, "alpha", cfg.constants.alpha);
        get_if(c, "beta", cfg.constants.beta);
    }
    if (j.contains("certify")) {
        const json& c = j["certify"];
        reject_unknown(c, "certify",
                       {"delta", "gamma", "H", "c2", "xi0_lo", "xi0_hi",
                        "min_points"});
        get_if(c, "delta", cfg.cert_delta);
        get_if(c, "gamma", cfg.cert_gamma);
        get_if(c, "H", cfg.cert_H);
        get_if(c, "c2", cfg.cert_c2);
        get_if(c, "xi0_lo", cfg.cert_xi0_lo);
        get_if(c, "xi0_hi", cfg.cert_xi0_hi);
        get_if(c, "min_points", cfg.cert_min_points);
    }
    if (j.contains("ladder")) {
        const json& l = j["ladder"];
        reject_unknown(l, "ladder", {"sigma1", "p"});
        get_if(l, "sigma1", cfg.sigma1);
        get_if(l, "p", cfg.lp);
    }
    if (j.contains("diagnostics")) {
        const json& d = j["diagnostics"];
        reject_unknown(d, "diagnostics",
                       {"sample_interval", "holder_gamma", "decay_fit_time",
                        "with_shells", "track_moc"});
        get_if(d, "sample_interval", cfg.sample_interval);
        get_if(d, "holder_gamma", cfg.holder_gamma);
        get_if(d, "decay_fit_time", cfg.decay_fit_time);
        get_if(d, "with_shells", cfg.with_shells);
        get_if(d, "track_moc", cfg.track_moc);
    }
    get_if(j, "output_dir", cfg.output_dir);
    get_if(j, "input_path", cfg.input_path);
    get_if(j, "seed", cfg.seed);
    get_if(j, "threads", cfg.threads);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string canonical_json(const RunConfig& c) {
    ordered_json j;
    j["mode"] = c.mode;
    j["grid"] = {{"n", c.grid_n}, {"box_length", c.box_length}};
    ordered_json s;
    s["alpha"] = c.solver.alpha;
    s["beta"] = c.solver.beta;
    s["nu"] = c.solver.nu;
    s["epsilon"] = c.solver.epsilon;
    s["dt"] = c.solver.dt;
    s["t_end"] = c.solver.t_end;
    s["cfl_safety"] = c.solver.cfl_safety;
    s["dealias_fraction"] = c.solver.dealias_fraction;
    s["truncation_modes"] =
        c.solver.truncation_modes ? json(*c.solver.truncation_modes) : json();
    s["grad_ceiling"] = c.solver.grad_ceiling;
    s["force_cfl"] = c.solver.force_cfl;
    j["solver"] = s;
    j["initial"] = {{"profile", c.initial.profile},
                    {"kx", c.initial.kx},
                    {"ky", c.initial.ky},
                    {"amplitude", c.initial.amplitude},
                    {"center_x", c.initial.center_x},
                    {"center_y", c.initial.center_y},
                    {"width", c.initial.width},
                    {"seed", c.initial.seed},
                    {"spectrum_decay", c.initial.spectrum_decay},
                    {"checkpoint_path", c.initial.checkpoint_path}};
    j["moc"] = {{"family", c.moc.family},     {"delta", c.moc.delta},
                {"gamma", c.moc.gamma},       {"beta", c.moc.beta},
                {"H", c.moc.H},               {"xi0", c.moc.xi0},
                {"coef", c.moc.coef},         {"exponent", c.moc.exponent},
                {"lambda", c.moc.lambda},
                {"scale_exponent", c.moc.scale_exponent},
                {"csv_path", c.moc.csv_path}};
    j["constants"] = {{"c_alpha", c.constants.c_alpha},
                      {"c_beta", c.constants.c_beta},
                      {"c_beta_prime", c.constants.c_beta_prime},
                      {"A", c.constants.A},
                      {"nu", c.constants.nu},
                      {"alpha", c.constants.alpha},
                      {"beta", c.constants.beta}};
    j["certify"] = {{"delta", c.cert_delta},   {"gamma", c.cert_gamma},
                    {"H", c.cert_H},           {"c2", c.cert_c2},
                    {"xi0_lo", c.cert_xi0_lo}, {"xi0_hi", c.cert_xi0_hi},
                    {"min_points", c.cert_min_points}};
    j["ladder"] = {{"sigma1", c.sigma1}, {"p", c.lp}};
    j["diagnostics"] = {{"sample_interval", c.sample_interval},
                        {"holder_gamma", c.holder_gamma},
                        {"decay_fit_time", c.decay_fit_time},
                        {"with_shells", c.with_shells},
                        {"track_moc", c.track_moc}};
    j["output_dir"] = c.output_dir;
    j["input_path"] = c.input_path;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& cfg) {
    const std::string text = canonical_json(cfg);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// ---------------------------------------------------------------------------

ValidationResult validate(const RunConfig& cfg) {
    ValidationResult res;
    auto bad = [&res](const std::string& msg) { res.violations.push_back(msg); };

    static const std::vector<std::string> modes = {
        "simulate", "certify", "ladder", "diagnose", "decay-fit"};
    if (std::find(modes.begin(), modes.end(), cfg.mode) == modes.end())
        bad("unknown mode '" + cfg.mode + "'");

    if (cfg.grid_n < 8 || cfg.grid_n % 2 != 0)
        bad("grid n must be even and >= 8");
    if (!(cfg.box_length > 0.0)) bad("box_length must be positive");

    try {
        cfg.solver.validate();
    } catch (const std::invalid_argument& e) {
        bad(e.what());
    }

    static const std::vector<std::string> profiles = {
        "single_mode", "gaussian_bump", "random_smooth", "zero", "checkpoint"};
    if (std::find(profiles.begin(), profiles.end(), cfg.initial.profile) ==
        profiles.end())
        bad("unknown initial profile '" + cfg.initial.profile + "'");

    const double a = cfg.constants.alpha, b = cfg.constants.beta;
    try {
        cfg.constants.validate();
    } catch (const std::domain_error& e) {
        bad(e.what());
    }

    if (cfg.mode == "certify") {
        if (cfg.moc.family == "kisel_nv") {
            if (!(b > a + 1.0))
                bad("certify (subcritical family) requires beta > alpha + 1");
        } else if (cfg.moc.family == "eventual" ||
                   cfg.moc.family == "stationary_holder") {
            if (!(b > 2.0 * a) || !(b <= a + 1.0))
                bad("certify (shrinking-head family) requires beta in "
                    "]2 alpha, alpha+1]");
        } else {
            bad("certify requires moc family kisel_nv, stationary_holder, or "
                "eventual");
        }
    }

    if (!res.violations.empty()) return res;
    if (b > a + 1.0)
        res.regime = "subcritical";
    else if (b == a + 1.0)
        res.regime = "critical";
    else
        res.regime = "supercritical";
    return res;
}

// ---------------------------------------------------------------------------

ScalarField2D make_initial_data(const InitialData& init, const Grid2D& grid) {
    const std::size_t n = grid.n();
    ScalarField2D f(grid);

    if (init.profile == "zero") {
        f.physical_mut().assign(n * n, 0.0);
        return f;
    }
    if (init.profile == "single_mode") {
        auto& p = f.physical_mut();
        const double ku = grid.k_unit();
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                p[j * n + i] =
                    init.amplitude * std::cos(ku * (init.kx * grid.coord(i) +
                                                    init.ky * grid.coord(j)));
        return f;
    }
    if (init.profile == "gaussian_bump") {
        auto& p = f.physical_mut();
        const double L = grid.box_length();
        auto geo = [L](double d) {
            d = std::fmod(std::abs(d), L);
            return std::min(d, L - d);
        };
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) {
                const double dx = geo(grid.coord(i) - init.center_x);
                const double dy = geo(grid.coord(j) - init.center_y);
                p[j * n + i] = init.amplitude *
                               std::exp(-(dx * dx + dy * dy) /
                                        (2.0 * init.width * init.width));
            }
        return f;
    }
    if (init.profile == "random_smooth") {
        std::mt19937_64 rng(init.seed);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.141592653589793);
        auto& spec = f.spectral_mut();
        spec.assign(n * n, {0.0, 0.0});
        const double kcut = double(n) / 4.0;
        for (std::size_t j = 0; j < n; ++j) {
            const int mj = grid.mode(j);
            for (std::size_t i = 0; i < n; ++i) {
                const int mi = grid.mode(i);
                // fill one half-plane; mirror with the conjugate
                if (!(mj > 0 || (mj == 0 && mi > 0))) continue;
                if (grid.is_nyquist(i) || grid.is_nyquist(j)) continue;
                const double km = std::hypot(double(mi), double(mj));
                if (km > kcut) continue;
                const double mag = std::pow(km, -init.spectrum_decay);
                const double ph = phase(rng);
                const std::complex<double> c(mag * std::cos(ph),
                                             mag * std::sin(ph));
                spec[j * n + i] = c;
                const std::size_t ic = (n - i) % n, jc = (n - j) % n;
                spec[jc * n + ic] = std::conj(c);
            }
        }
        // scale the realization to the requested sup amplitude
        const double m = f.linf_norm();
        if (m > 0.0) {
            auto& p = f.physical_mut();
            for (double& v : p) v *= init.amplitude / m;
        }
        return f;
    }
    if (init.profile == "checkpoint") {
        ScalarField2D loaded = checkpoint::load(init.checkpoint_path);
        if (!(loaded.grid() == grid))
            throw std::invalid_argument(
                "initial data: checkpoint grid does not match configured grid");
        return loaded;
    }
    throw std::invalid_argument("initial data: unknown profile '" +
                                init.profile + "'");
}

MocPtr make_moc(const MocConfig& mc) {
    MocPtr base;
    if (mc.family == "kisel_nv")
        base = make_kisel_nv_moc(mc.delta, mc.gamma, mc.beta);
    else if (mc.family == "stationary_holder")
        base = make_stationary_holder_moc(mc.H, mc.delta, mc.gamma);
    else if (mc.family == "eventual")
        base = make_eventual_moc(mc.H, mc.delta, mc.gamma, mc.xi0);
    else if (mc.family == "power")
        base = make_power_moc(mc.coef, mc.exponent);
    else if (mc.family == "constant")
        base = make_constant_moc(mc.H);
    else if (mc.family == "linear")
        base = make_linear_moc(mc.coef);
    else if (mc.family == "tabulated")
        base = load_tabulated_moc_csv(mc.csv_path);
    else
        throw std::invalid_argument("moc: unknown family '" + mc.family + "'");
    if (mc.lambda != 1.0 || mc.scale_exponent != 0.0)
        return make_scaled_moc(base, mc.lambda, mc.scale_exponent);
    return base;
}

} // namespace gqg
