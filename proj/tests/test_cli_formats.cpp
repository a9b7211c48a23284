#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gqg/checkpoint.hpp"
#include "gqg/run.hpp"

using namespace gqg;
namespace fs = std::filesystem;

namespace {

ScalarField2D test_field(const Grid2D& g) {
    InitialData init;
    init.profile = "random_smooth";
    init.amplitude = 1.0;
    init.seed = 17;
    return make_initial_data(init, g);
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE(is.good());
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("checkpoint round trip preserves the field bit for bit") {
    Grid2D g(32, 2.0 * M_PI);
    ScalarField2D f = test_field(g);
    const std::string path = "fmt_ckpt_phys.gqgf";
    checkpoint::save(f, path);
    ScalarField2D back = checkpoint::load(path);
    CHECK(back.grid() == g);
    for (std::size_t i = 0; i < g.size(); ++i)
        CHECK(back.physical()[i] == f.physical()[i]);

    // the header carries the advertised magic
    CHECK(slurp(path).substr(0, 4) == "GQGF");
    fs::remove(path);
}

TEST_CASE("spectral-representation checkpoints restore the same field") {
    Grid2D g(32, 2.0 * M_PI);
    ScalarField2D f = test_field(g);
    const std::string path = "fmt_ckpt_spec.gqgf";
    checkpoint::save(f, path, /*spectral=*/true);
    ScalarField2D back = checkpoint::load(path);
    double err = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        err = std::max(err, std::abs(back.physical()[i] - f.physical()[i]));
    CHECK(err <= 1e-12);
    fs::remove(path);
}

TEST_CASE("corrupt checkpoints are rejected") {
    const std::string path = "fmt_ckpt_bad.gqgf";
    {
        std::ofstream os(path, std::ios::binary);
        os << "NOPE" << std::string(64, '\0');
    }
    CHECK_THROWS_AS(checkpoint::load(path), std::runtime_error);

    Grid2D g(32, 2.0 * M_PI);
    checkpoint::save(test_field(g), path);
    fs::resize_file(path, 40);  // truncate the payload
    CHECK_THROWS_AS(checkpoint::load(path), std::runtime_error);
    fs::remove(path);
    CHECK_THROWS_AS(checkpoint::load(path), std::runtime_error);
}

TEST_CASE("CSV field export is one row per grid row") {
    Grid2D g(16, 2.0 * M_PI);
    ScalarField2D f = test_field(g);
    const std::string path = "fmt_field.csv";
    checkpoint::export_csv(f, path);
    auto rows = lines_of(slurp(path));
    REQUIRE(rows.size() == 16);
    std::stringstream first(rows[0]);
    std::string cell;
    std::size_t cells = 0;
    while (std::getline(first, cell, ',')) ++cells;
    CHECK(cells == 16);
    fs::remove(path);
}

TEST_CASE("simulate workflow writes the full artifact set") {
    TempDir dir("fmt_out_sim");
    RunConfig cfg = parse_config(R"({
        "mode": "simulate",
        "grid": {"n": 32},
        "solver": {"alpha": 0.5, "beta": 1.5, "nu": 1.0,
                   "dt": 0.001, "t_end": 0.03},
        "initial": {"profile": "random_smooth", "seed": 3},
        "diagnostics": {"sample_interval": 0.01}
    })");
    cfg.output_dir = dir.path.string();
    RunOutcome out = execute(cfg);
    CHECK(out.exit_code == 0);
    CHECK(out.error_json.empty());
    CHECK(out.summary.find("records") != std::string::npos);

    CHECK(fs::exists(dir.path / "series.csv"));
    CHECK(fs::exists(dir.path / "final.ckpt"));
    CHECK(fs::exists(dir.path / "manifest.json"));
    CHECK(fs::exists(dir.path / "config.json"));

    auto rows = lines_of(slurp((dir.path / "series.csv").string()));
    REQUIRE(rows.size() >= 4);
    CHECK(rows[0] == "schema_version,1");
    CHECK(rows[1] == "config_hash," + config_hash(cfg));
    CHECK(rows[2].rfind("t,l2,linf,grad_linf", 0) == 0);
    CHECK(rows.back().rfind("truncated", 0) == std::string::npos);

    auto manifest =
        nlohmann::json::parse(slurp((dir.path / "manifest.json").string()));
    CHECK(manifest["schema_version"] == 1);
    CHECK(manifest["config_hash"] == config_hash(cfg));
    CHECK(manifest["mode"] == "simulate");
    CHECK(manifest["exit_code"] == 0);
    CHECK(manifest["regime"] == "critical");
    CHECK(manifest["artifacts"].size() == out.artifacts.size());

    // the echoed config reproduces the hash
    RunConfig echoed = load_config((dir.path / "config.json").string());
    CHECK(config_hash(echoed) == config_hash(cfg));
}

TEST_CASE("a tripped blow-up sentinel truncates the series and exits 2") {
    TempDir dir("fmt_out_blow");
    RunConfig cfg = parse_config(R"({
        "mode": "simulate",
        "grid": {"n": 32},
        "solver": {"dt": 0.001, "t_end": 0.02, "grad_ceiling": 1e-12},
        "initial": {"profile": "random_smooth", "seed": 3},
        "diagnostics": {"sample_interval": 0.005}
    })");
    cfg.output_dir = dir.path.string();
    RunOutcome out = execute(cfg);
    CHECK(out.exit_code == 2);
    auto err = nlohmann::json::parse(out.error_json);
    CHECK(err["schema_version"] == 1);
    CHECK(err["error"]["category"] == "numerical");
    CHECK_FALSE(err["error"]["message"].get<std::string>().empty());

    // partial series still lands on disk, flagged as truncated
    auto rows = lines_of(slurp((dir.path / "series.csv").string()));
    CHECK(rows.back().rfind("truncated,", 0) == 0);
}

TEST_CASE("invalid configurations exit 1 with a validation record") {
    RunConfig cfg;
    cfg.mode = "certify";
    cfg.moc.family = "power";  // not a certifiable family
    cfg.output_dir = "fmt_out_unused";
    RunOutcome out = execute(cfg);
    CHECK(out.exit_code == 1);
    auto err = nlohmann::json::parse(out.error_json);
    CHECK(err["error"]["category"] == "validation");
    CHECK_FALSE(fs::exists("fmt_out_unused"));  // rejected before any writes

    RunConfig diag_cfg;
    diag_cfg.mode = "diagnose";  // input_path missing: a domain error
    TempDir dir("fmt_out_diag_err");
    diag_cfg.output_dir = dir.path.string();
    RunOutcome d = execute(diag_cfg);
    CHECK(d.exit_code == 1);
    CHECK(nlohmann::json::parse(d.error_json)["error"]["category"] == "domain");
}

TEST_CASE("certification artifacts are byte-identical across reruns") {
    auto run_once = [] {
        TempDir dir("fmt_out_cert");
        RunConfig cfg = parse_config(R"({
            "mode": "certify",
            "solver": {"alpha": 0.3, "beta": 0.9},
            "moc": {"family": "eventual", "H": 0.02, "delta": 0.2,
                    "gamma": 0.8, "xi0": 0.02},
            "certify": {"c2": 0.3}
        })");
        cfg.output_dir = dir.path.string();
        RunOutcome out = execute(cfg);
        CHECK(out.exit_code == 0);
        CHECK(out.summary.find("certify (eventual)") != std::string::npos);
        return std::pair{slurp((dir.path / "certificate.json").string()),
                         slurp((dir.path / "margins.csv").string())};
    };
    auto [cert1, csv1] = run_once();
    auto [cert2, csv2] = run_once();
    CHECK(cert1 == cert2);
    CHECK(csv1 == csv2);
    auto j = nlohmann::json::parse(cert1);
    CHECK(j["schema_version"] == 1);
    CHECK((j["verdict"] == "PASS" || j["verdict"] == "FAIL"));

    auto rows = lines_of(csv1);
    REQUIRE(rows.size() >= 3);
    CHECK(rows[0] == "schema_version,1");
    CHECK(rows[1] ==
          "xi,xi0,drift_term,dissipation_term,margin,quad_error,label");
}

TEST_CASE("ladder workflow prints the worked example and writes its record") {
    TempDir dir("fmt_out_ladder");
    RunConfig cfg = parse_config(R"({
        "mode": "ladder",
        "constants": {"alpha": 0.5, "beta": 1.2},
        "ladder": {"sigma1": 0.4, "p": 40.0}
    })");
    cfg.output_dir = dir.path.string();
    RunOutcome out = execute(cfg);
    CHECK(out.exit_code == 0);
    CHECK(out.summary.find("N0 = 4") != std::string::npos);
    CHECK(out.summary.find("sigma_5 = 1.15") != std::string::npos);
    CHECK(out.summary.find("increment 0.05") != std::string::npos);

    auto j = nlohmann::json::parse(slurp((dir.path / "ladder.json").string()));
    CHECK(j["n0"] == 4);
    CHECK(j["stalls"] == false);
    CHECK(j["sigma"].size() == 5);
}

TEST_CASE("decay-fit workflow consumes a series and fits the envelope") {
    TempDir dir("fmt_out_decay");
    RunConfig sim = parse_config(R"({
        "mode": "simulate",
        "grid": {"n": 32},
        "solver": {"alpha": 0.5, "beta": 1.5, "nu": 1.0,
                   "dt": 0.001, "t_end": 0.1},
        "initial": {"profile": "random_smooth", "seed": 3},
        "diagnostics": {"sample_interval": 0.01}
    })");
    sim.output_dir = (dir.path / "sim").string();
    REQUIRE(execute(sim).exit_code == 0);

    RunConfig fit = parse_config(R"({
        "mode": "decay-fit",
        "solver": {"alpha": 0.5, "beta": 1.5}
    })");
    fit.input_path = (dir.path / "sim" / "series.csv").string();
    fit.output_dir = (dir.path / "fit").string();
    RunOutcome out = execute(fit);
    CHECK(out.exit_code == 0);
    CHECK(out.summary.find("decay-fit: C = ") != std::string::npos);

    auto j = nlohmann::json::parse(
        slurp((dir.path / "fit" / "decay_fit.json").string()));
    CHECK(j["C"].get<double>() > 0.0);
    CHECK(j["worst_envelope_ratio"].get<double>() > 0.0);
    // a fitted envelope should not be violated by much anywhere on the series
    CHECK(j["worst_envelope_ratio"].get<double>() <= 1.2);
}
