#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fsi/commands.hpp"
#include "fsi/config.hpp"
#include "fsi/diagnostics.hpp"

using namespace fsi;

namespace {

SimulationConfig tiny_config() {
    SimulationConfig cfg;
    cfg.n_radial = 2;
    cfg.n_angular = 12;
    cfg.final_time = 0.05;
    cfg.energy_stride = 1;
    return cfg;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parse / serialize round trip") {
    SimulationConfig cfg = tiny_config();
    cfg.penalty.alpha = 42.5;
    cfg.wave_kind = "pulse";
    cfg.wave_mode = "cylindrical";
    cfg.step_is_ratio = false;
    cfg.step_value = 0.003;
    const std::string text = cfg.to_string();
    const SimulationConfig back = SimulationConfig::from_string(text);
    CHECK(back == cfg);
    CHECK(back.to_string() == text);

    // ratio syntax
    const SimulationConfig ratio = SimulationConfig::from_string("time.step = h/25\n");
    CHECK(ratio.step_is_ratio);
    CHECK(ratio.step_ratio == 25.0);
    CHECK(ratio.time_step(0.5) == doctest::Approx(0.02));
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(SimulationConfig::from_string("nonsense\n"), ConfigError);
    CHECK_THROWS_WITH_AS(SimulationConfig::from_string("\n\nunknown.key = 3\n"),
                         doctest::Contains("line 3"), ConfigError);
    CHECK_THROWS_AS(SimulationConfig::from_string("physics.c = fast\n"), ConfigError);
    CHECK_THROWS_AS(SimulationConfig::from_file("/nonexistent.cfg"), ConfigError);

    SimulationConfig bad = tiny_config();
    bad.penalty.alpha = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = tiny_config();
    bad.wave_kind = "tsunami";
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = tiny_config();
    bad.geometry_kind = "msh";
    CHECK_THROWS_AS(bad.validate(), ConfigError);  // missing path
}

TEST_CASE("cmd_mesh writes MSH files and a manifest with all edge kinds") {
    const std::string out = "/tmp/fsi_test_cmd_mesh";
    std::filesystem::remove_all(out);
    SimulationConfig cfg = tiny_config();
    CHECK(cmd_mesh(cfg, out, 2) == 0);

    const auto manifest = nlohmann::json::parse(slurp(out + "/manifest.json"));
    REQUIRE(manifest.size() == 3);
    for (const auto& entry : manifest) {
        CHECK(entry["edges"]["interface"].get<int>() > 0);
        CHECK(entry["edges"]["artificial"].get<int>() > 0);
        CHECK(entry["edges"]["interior_elastic"].get<int>() > 0);
        CHECK(entry["edges"]["interior_fluid"].get<int>() > 0);
    }
    // refine level 2: h ratio ~ 1/4 of base
    const double h0 = manifest[0]["h"].get<double>();
    const double h2 = manifest[2]["h"].get<double>();
    CHECK(h2 / h0 > 0.2);
    CHECK(h2 / h0 < 0.3);
    CHECK(std::filesystem::exists(out + "/mesh_l0.msh"));
    CHECK(std::filesystem::exists(out + "/mesh_l2.msh"));
}

TEST_CASE("cmd_run writes the energy series and is byte-deterministic") {
    const std::string out = "/tmp/fsi_test_cmd_run";
    std::filesystem::remove_all(out);
    SimulationConfig cfg = tiny_config();
    cfg.snapshot_stride = 1;
    CHECK(cmd_run(cfg, out) == 0);
    const std::string first = slurp(out + "/energy.csv");
    CHECK(first.find("t,E,F,iterations,residual") == 0);
    CHECK(std::filesystem::exists(out + "/snapshot_1.vtk"));

    CHECK(cmd_run(cfg, out) == 0);
    CHECK(slurp(out + "/energy.csv") == first);
}

TEST_CASE("zero incident wave keeps the energy at zero") {
    const std::string out = "/tmp/fsi_test_cmd_zero";
    std::filesystem::remove_all(out);
    SimulationConfig cfg = tiny_config();
    cfg.wave_kind = "none";
    CHECK(cmd_run(cfg, out) == 0);
    std::ifstream csv(out + "/energy.csv");
    std::string line;
    std::getline(csv, line);  // header
    while (std::getline(csv, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double E = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(std::abs(E) <= 1e-14);
    }
}

TEST_CASE("cmd_check passes at alpha=100 and fails when under-penalized") {
    SimulationConfig cfg = tiny_config();
    CHECK(cmd_check(cfg) == 0);
    cfg.penalty.alpha = 0.001;
    CHECK(cmd_check(cfg) == 3);
}

TEST_CASE("run_checks symmetry hook detects tampering") {
    SimulationConfig cfg = tiny_config();
    const Problem problem(cfg);
    const CheckReport ok = run_checks(problem, cfg);
    CHECK(ok.symmetry_ok());
    CHECK(ok.all_ok());
    CHECK(ok.mass_block_condition < 1e3);

    const CheckReport bad = run_checks(problem, cfg, [](SparseMatrix& A) {
        auto t = A.to_triplets();
        t.push_back({0, 1, A.max_abs()});
        A = SparseMatrix::from_triplets(A.dim(), std::move(t));
    });
    CHECK(!bad.symmetry_ok());
    CHECK(!bad.all_ok());
}

TEST_CASE("unstable configuration aborts with a numerical error") {
    SimulationConfig cfg = tiny_config();
    cfg.cfl_guard = false;
    cfg.step_is_ratio = false;
    cfg.step_value = 5.0;  // far beyond the explicit limit
    cfg.final_time = 500.0;
    CHECK_THROWS_AS(cmd_run(cfg, "/tmp/fsi_test_cmd_nan"), Error);
}

}  // TEST_SUITE
