#include <CLI11.hpp>
#include <iostream>

#include "fsi/commands.hpp"
#include "fsi/threading.hpp"

int main(int argc, char** argv) {
    CLI::App app{"2D acoustic-elastic wave interaction simulator (interior penalty DG + Newmark)"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir;
    int threads = 1;
    int levels = -1;
    int snapshot_stride = -1;

    app.add_option("--config", config_path, "configuration file (key = value)")->required();
    app.add_option("--threads", threads, "assembly worker count (default 1)");
    app.add_option("--output", output_dir, "output directory (overrides config)");

    CLI::App* mesh = app.add_subcommand("mesh", "generate or import the mesh, write MSH + manifest");
    mesh->add_option("--levels", levels, "also emit this many uniform refinements");
    CLI::App* run = app.add_subcommand("run", "run the simulation, write energy CSV and snapshots");
    run->add_option("--snapshot-stride", snapshot_stride, "steps between VTK snapshots");
    CLI::App* converge = app.add_subcommand("converge", "mesh refinement convergence study");
    converge->add_option("--levels", levels, "number of study levels (>= 3)");
    CLI::App* check = app.add_subcommand("check", "matrix property checks (symmetry, coercivity)");

    CLI11_PARSE(app, argc, argv);
    fsi::set_thread_count(threads);

    try {
        fsi::SimulationConfig cfg = fsi::SimulationConfig::from_file(config_path);
        cfg.validate();
        if (snapshot_stride >= 0) cfg.snapshot_stride = snapshot_stride;
        const std::string out = output_dir.empty() ? cfg.resolved_output_dir() : output_dir;

        if (mesh->parsed()) return fsi::cmd_mesh(cfg, out, levels < 0 ? 0 : levels);
        if (run->parsed()) return fsi::cmd_run(cfg, out);
        if (converge->parsed())
            return fsi::cmd_converge(cfg, out, levels < 0 ? cfg.study_levels : levels);
        if (check->parsed()) return fsi::cmd_check(cfg);
    } catch (const fsi::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const fsi::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
