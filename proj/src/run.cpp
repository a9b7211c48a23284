#include "gqg/run.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gqg/checkpoint.hpp"

namespace gqg {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

SimulationResult run_simulation(const RunConfig& cfg) {
    const Grid2D grid(cfg.grid_n, cfg.box_length);
    ScalarField2D theta0 = make_initial_data(cfg.initial, grid);

    diag::TrackerOptions topts;
    topts.alpha = cfg.solver.alpha;
    topts.beta = cfg.solver.beta;
    topts.nu = cfg.solver.nu;
    topts.holder_gamma = cfg.holder_gamma;
    topts.decay_fit_time = cfg.decay_fit_time;
    topts.with_shells = cfg.with_shells;
    topts.seed = cfg.seed;
    if (cfg.track_moc) topts.moc = make_moc(cfg.moc);

    diag::Tracker tracker(theta0, topts);
    SimulationState state(std::move(theta0));

    SimulationResult out;
    tracker.sample(state.t, state.theta);

    const double dt = cfg.solver.dt;
    double next_sample = cfg.sample_interval;
    try {
        while (state.t < cfg.solver.t_end - 0.5 * dt) {
            step(state, cfg.solver);
            if (state.t >= next_sample - 0.5 * dt ||
                state.t >= cfg.solver.t_end - 0.5 * dt) {
                tracker.sample(state.t, state.theta);
                while (next_sample <= state.t + 0.5 * dt)
                    next_sample += cfg.sample_interval;
            }
        }
    } catch (const std::runtime_error& e) {
        out.truncated = true;
        out.truncation_reason = e.what();
    }
    out.series = tracker.series();
    out.fitted_decay_c = tracker.fitted_decay_c();
    out.final_theta = std::move(state.theta);
    return out;
}

void write_series_csv(const SimulationResult& result, const std::string& hash,
                      const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("series: cannot open " + path);
    os.precision(17);
    os << "schema_version,1\n";
    os << "config_hash," << hash << '\n';
    std::size_t shells = 0;
    for (const auto& r : result.series)
        shells = std::max(shells, r.shell_energy.size());
    os << "t,l2,linf,grad_linf,holder_seminorm,moc_obedience_ratio,"
          "blowup_integral,energy_budget_residual,decay_envelope_ratio";
    for (std::size_t j = 0; j < shells; ++j) os << ",shell_" << j;
    os << '\n';
    for (const auto& r : result.series) {
        os << r.t << ',' << r.l2 << ',' << r.linf << ',' << r.grad_linf << ','
           << r.holder_seminorm << ',' << r.moc_obedience_ratio << ','
           << r.blowup_integral << ',' << r.energy_residual << ','
           << r.decay_envelope_ratio;
        for (std::size_t j = 0; j < shells; ++j)
            os << ',' << (j < r.shell_energy.size() ? r.shell_energy[j] : 0.0);
        os << '\n';
    }
    if (result.truncated)
        os << "truncated," << result.truncation_reason << '\n';
}

// ---------------------------------------------------------------------------

namespace {

std::string now_iso() {
    const auto t = std::chrono::system_clock::to_time_t(
        std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
}

std::string error_record(const std::string& category, const std::string& what) {
    ordered_json j;
    j["schema_version"] = 1;
    j["error"] = {{"category", category}, {"message", what}};
    return j.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << text;
}

struct Workflow {
    const RunConfig& cfg;
    std::string hash;
    fs::path dir;
    RunOutcome out;
    ordered_json verdicts = ordered_json::object();

    explicit Workflow(const RunConfig& c)
        : cfg(c), hash(config_hash(c)), dir(c.output_dir) {
        fs::create_directories(dir);
    }

    std::string artifact(const std::string& name) {
        const std::string p = (dir / name).string();
        out.artifacts.push_back(p);
        return p;
    }

    void simulate() {
        SimulationResult res = run_simulation(cfg);
        write_series_csv(res, hash, artifact("series.csv"));
        if (res.final_theta)
            checkpoint::save(*res.final_theta, artifact("final.ckpt"));
        verdicts["records"] = res.series.size();
        verdicts["truncated"] = res.truncated;
        if (res.truncated) verdicts["truncation_reason"] = res.truncation_reason;
        std::ostringstream ss;
        ss << "simulate: " << res.series.size() << " records";
        if (res.truncated) ss << " (truncated: " << res.truncation_reason << ")";
        out.summary = ss.str();
        if (res.truncated) {
            // partial artifacts are on disk; the failure is still a failure
            out.exit_code = 2;
            out.error_json = error_record("numerical", res.truncation_reason);
        }
    }

    void certify_mode() {
        certify::Certificate cert;
        if (cfg.moc.family == "kisel_nv") {
            const double delta =
                cfg.cert_delta > 0.0 ? cfg.cert_delta : cfg.moc.delta;
            const double gamma =
                cfg.cert_gamma > 0.0 ? cfg.cert_gamma : cfg.moc.gamma;
            cert = certify::certify_subcritical(delta, gamma, cfg.constants,
                                                cfg.cert_min_points);
        } else {
            const double delta =
                cfg.cert_delta > 0.0 ? cfg.cert_delta : cfg.moc.delta;
            const double gamma =
                cfg.cert_gamma > 0.0 ? cfg.cert_gamma : cfg.moc.gamma;
            const double H = cfg.cert_H > 0.0 ? cfg.cert_H : cfg.moc.H;
            double lo = cfg.cert_xi0_lo, hi = cfg.cert_xi0_hi;
            if (cfg.moc.family == "stationary_holder") {
                // stationary case: the head has already collapsed
                lo = hi = 1e-8 * delta;
            } else {
                if (lo <= 0.0) lo = 1e-4 * delta;
                if (hi <= 0.0) hi = delta;
            }
            const double c2 = cfg.cert_c2 > 0.0 ? cfg.cert_c2 : 1e-12;
            cert = certify::certify_eventual(H, delta, gamma, lo, hi, c2,
                                             cfg.constants);
        }
        cert.config_hash = hash;
        if (!std::isfinite(cert.max_quad_error))
            throw std::runtime_error(
                "certify: quadrature failed to converge at some grid point");
        write_text(artifact("certificate.json"), cert.to_json());
        cert.write_csv(artifact("margins.csv"));
        verdicts["verdict"] = cert.pass ? "PASS" : "FAIL";
        verdicts["worst_margin"] = cert.worst_margin;
        verdicts["worst_xi"] = cert.worst_xi;
        std::ostringstream ss;
        ss << "certify (" << cert.kind << "): "
           << (cert.pass ? "PASS" : "FAIL") << "  worst margin "
           << cert.worst_margin << " at xi = " << cert.worst_xi;
        out.summary = ss.str();
    }

    void ladder_mode() {
        const auto r = certify::regularity_ladder(
            cfg.constants.alpha, cfg.constants.beta, cfg.sigma1, cfg.lp);
        ordered_json j;
        j["schema_version"] = 1;
        j["config_hash"] = hash;
        j["sigma0"] = r.sigma0;
        j["p1"] = r.p1;
        j["p2"] = r.p2;
        j["increment"] = r.increment;
        j["stalls"] = r.stalls;
        if (r.stalls) j["minimal_p"] = r.minimal_p;
        j["p_admissible"] = r.p_admissible;
        j["sigma"] = r.sigma;
        j["n0"] = r.n0;
        write_text(artifact("ladder.json"), j.dump(2) + "\n");
        std::ostringstream ss;
        if (r.stalls)
            ss << "ladder stalls (increment " << r.increment
               << "); minimal p = " << r.minimal_p;
        else
            ss << "ladder: N0 = " << r.n0 << ", sigma_" << (r.n0 + 1) << " = "
               << r.sigma.back() << ", increment " << r.increment;
        out.summary = ss.str();
        verdicts["stalls"] = r.stalls;
        verdicts["n0"] = r.n0;
    }

    void diagnose_mode() {
        if (cfg.input_path.empty())
            throw std::invalid_argument("diagnose: input_path required");
        ScalarField2D theta = checkpoint::load(cfg.input_path);
        diag::TrackerOptions topts;
        topts.alpha = cfg.solver.alpha;
        topts.beta = cfg.solver.beta;
        topts.nu = cfg.solver.nu;
        topts.holder_gamma = cfg.holder_gamma;
        topts.with_shells = cfg.with_shells;
        topts.seed = cfg.seed;
        if (cfg.track_moc) topts.moc = make_moc(cfg.moc);
        diag::Tracker tracker(theta, topts);
        const auto rec = tracker.sample(0.0, theta);
        const auto besov = diag::besov_seminorm(theta, cfg.holder_gamma);
        ordered_json j;
        j["schema_version"] = 1;
        j["config_hash"] = hash;
        j["l2"] = rec.l2;
        j["linf"] = rec.linf;
        j["grad_linf"] = rec.grad_linf;
        j["holder_seminorm"] = rec.holder_seminorm;
        j["moc_obedience_ratio"] = rec.moc_obedience_ratio;
        j["besov"] = {{"s", cfg.holder_gamma},
                      {"shell_sum", besov.shell_sum},
                      {"direct", besov.direct},
                      {"band_limited_warning", besov.band_limited_warning}};
        if (cfg.with_shells) j["shell_energy"] = rec.shell_energy;
        write_text(artifact("diagnose.json"), j.dump(2) + "\n");
        std::ostringstream ss;
        ss << "diagnose: l2 " << rec.l2 << ", linf " << rec.linf
           << ", grad_linf " << rec.grad_linf;
        out.summary = ss.str();
    }

    void decay_fit_mode() {
        if (cfg.input_path.empty())
            throw std::invalid_argument("decay-fit: input_path required");
        std::ifstream is(cfg.input_path);
        if (!is)
            throw std::runtime_error("decay-fit: cannot open " + cfg.input_path);
        // our own series.csv layout: two metadata lines, a header, then rows
        std::string line;
        std::getline(is, line);  // schema_version
        std::getline(is, line);  // config_hash
        std::getline(is, line);  // column header
        std::vector<double> ts, linfs;
        double l2_0 = 0.0;
        while (std::getline(is, line)) {
            if (line.rfind("truncated,", 0) == 0) break;
            std::istringstream ls(line);
            std::string cell;
            std::vector<double> row;
            while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
            if (row.size() < 3) continue;
            ts.push_back(row[0]);
            linfs.push_back(row[2]);
            if (ts.size() == 1) l2_0 = row[1];
        }
        if (ts.size() < 2 || ts.front() != 0.0)
            throw std::invalid_argument(
                "decay-fit: series must start at t = 0 with at least 2 rows");
        const double m0 = linfs.front();
        const double beta = cfg.solver.beta;
        // least squares through the origin on the linearized envelope
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 1; i < ts.size(); ++i) {
            if (!(linfs[i] > 0.0)) continue;
            const double x = std::pow(m0 / l2_0, beta) * ts[i];
            const double y = std::pow(m0 / linfs[i], beta) - 1.0;
            sxy += x * y;
            sxx += x * x;
        }
        const double C = sxx > 0.0 ? std::max(sxy / sxx, 1e-12) : 1e-12;
        double worst_ratio = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i)
            if (linfs[i] > 0.0)
                worst_ratio = std::max(
                    worst_ratio, linfs[i] / certify::decay_bound(
                                                m0, l2_0, beta, C, ts[i]));
        ordered_json j;
        j["schema_version"] = 1;
        j["config_hash"] = hash;
        j["C"] = C;
        j["beta"] = beta;
        j["theta0_linf"] = m0;
        j["theta0_l2"] = l2_0;
        j["worst_envelope_ratio"] = worst_ratio;
        write_text(artifact("decay_fit.json"), j.dump(2) + "\n");
        std::ostringstream ss;
        ss << "decay-fit: C = " << C << ", worst envelope ratio "
           << worst_ratio;
        out.summary = ss.str();
        verdicts["C"] = C;
    }
};

} // namespace

RunOutcome execute(const RunConfig& cfg) {
    const auto check = validate(cfg);
    if (!check.ok()) {
        RunOutcome out;
        out.exit_code = 1;
        std::string msg;
        for (const auto& v : check.violations)
            msg += (msg.empty() ? "" : "; ") + v;
        out.error_json = error_record("validation", msg);
        out.summary = "invalid config: " + msg;
        return out;
    }
    certify::set_max_threads(cfg.threads);

    Workflow wf(cfg);
    const std::string started = now_iso();
    try {
        if (cfg.mode == "simulate") wf.simulate();
        else if (cfg.mode == "certify") wf.certify_mode();
        else if (cfg.mode == "ladder") wf.ladder_mode();
        else if (cfg.mode == "diagnose") wf.diagnose_mode();
        else wf.decay_fit_mode();
    } catch (const std::domain_error& e) {
        wf.out.exit_code = 1;
        wf.out.error_json = error_record("domain", e.what());
        wf.out.summary = std::string("domain error: ") + e.what();
    } catch (const std::invalid_argument& e) {
        wf.out.exit_code = 1;
        wf.out.error_json = error_record("domain", e.what());
        wf.out.summary = std::string("domain error: ") + e.what();
    } catch (const std::exception& e) {
        wf.out.exit_code = 2;
        wf.out.error_json = error_record("numerical", e.what());
        wf.out.summary = std::string("numerical error: ") + e.what();
    }

    ordered_json manifest;
    manifest["schema_version"] = 1;
    manifest["config_hash"] = wf.hash;
    manifest["tool_version"] = "gqg 1.0.0";
    manifest["regime"] = check.regime;
    manifest["started"] = started;
    manifest["finished"] = now_iso();
    manifest["mode"] = cfg.mode;
    manifest["exit_code"] = wf.out.exit_code;
    manifest["artifacts"] = wf.out.artifacts;
    manifest["verdicts"] = wf.verdicts;
    try {
        write_text((wf.dir / "manifest.json").string(),
                   manifest.dump(2) + "\n");
        write_text((wf.dir / "config.json").string(), canonical_json(cfg));
    } catch (const std::exception&) {
        // manifest write failure must not mask the primary outcome
    }
    return wf.out;
}

} // namespace gqg
