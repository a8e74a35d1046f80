#include "fsi/commands.hpp"

#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>

#include "fsi/msh_io.hpp"
#include "fsi/vtk_io.hpp"

namespace fsi {

namespace {

nlohmann::json mesh_manifest(const Mesh& mesh) {
    int n_elastic = 0, n_fluid = 0;
    for (const auto& t : mesh.triangles)
        (t.tag == Subdomain::Elastic ? n_elastic : n_fluid) += 1;
    int counts[4] = {0, 0, 0, 0};
    for (const auto& e : mesh.edges) counts[int(e.kind)] += 1;
    nlohmann::json j;
    j["vertices"] = mesh.vertices.size();
    j["triangles"] = {{"elastic", n_elastic}, {"fluid", n_fluid}};
    j["h"] = mesh.mesh_size;
    j["edges"] = {{"interior_elastic", counts[int(EdgeKind::InteriorElastic)]},
                  {"interior_fluid", counts[int(EdgeKind::InteriorFluid)]},
                  {"interface", counts[int(EdgeKind::Interface)]},
                  {"artificial", counts[int(EdgeKind::Artificial)]}};
    return j;
}

}  // namespace

Problem::Problem(const SimulationConfig& cfg)
    : mesh(cfg.build_mesh()),
      basis(cfg.degree),
      dofmap(mesh, basis.n_local()),
      wave(cfg.make_wave()) {
    cfg.validate();
    system.mass = assemble_mass(mesh, basis, dofmap, cfg.physics);
    system.stiffness = assemble_stiffness(mesh, basis, dofmap, cfg.physics, cfg.penalty);
    system.damping = assemble_damping(mesh, basis, dofmap);
}

bool CheckReport::dissipativity_ok() const {
    // N + N^T is a boundary mass on the absorbing circle; allow roundoff.
    return nnt_min_eigenvalue >= -1e-12 * std::max(1.0, stiffness_norm);
}

CheckReport run_checks(const Problem& problem, const SimulationConfig& cfg,
                       const StiffnessTamper& tamper) {
    CheckReport rep;
    SparseMatrix A = problem.system.stiffness;
    if (tamper) tamper(A);

    rep.symmetry_residual = A.symmetry_residual();
    rep.symmetry_tolerance = 1e-12 * std::max(A.max_abs(), 1e-300);

    if (rep.symmetry_ok()) {
        const CoercivityReport co = check_coercivity(A);
        rep.lambda_min = co.lambda_min;
        rep.stiffness_norm = co.norm;
    } else {
        rep.lambda_min = 0.0;
        rep.stiffness_norm = A.max_abs();
    }

    // N + N^T: support confined to fluid DOFs of absorbing-boundary elements.
    const SparseMatrix& N = problem.system.damping;
    std::vector<Triplet> nt;
    for (const Triplet& t : N.to_triplets()) {
        nt.push_back(t);
        nt.push_back({t.col, t.row, t.value});
    }
    const SparseMatrix S = SparseMatrix::from_triplets(N.dim(), std::move(nt));

    std::vector<char> allowed(problem.dofmap.size(), 0);
    for (const Edge& e : problem.mesh.edges) {
        if (e.kind != EdgeKind::Artificial) continue;
        for (int i = 0; i < problem.basis.n_local(); ++i)
            allowed[problem.dofmap.fluid_dof(e.elem[0], i)] = 1;
    }
    rep.nnt_support_confined = true;
    const double s_scale = std::max(S.max_abs(), 1e-300);
    std::vector<int> support;
    for (int r = 0; r < S.dim(); ++r)
        for (int k = S.row_ptr()[r]; k < S.row_ptr()[r + 1]; ++k)
            if (std::abs(S.values()[k]) > 1e-14 * s_scale) {
                if (!allowed[r] || !allowed[S.cols()[k]]) rep.nnt_support_confined = false;
            }
    for (int d = 0; d < S.dim(); ++d)
        if (allowed[d]) support.push_back(d);

    if (!support.empty()) {
        Eigen::MatrixXd sub = Eigen::MatrixXd::Zero(support.size(), support.size());
        std::vector<int> index_of(S.dim(), -1);
        for (std::size_t i = 0; i < support.size(); ++i) index_of[support[i]] = int(i);
        for (int r : support)
            for (int k = S.row_ptr()[r]; k < S.row_ptr()[r + 1]; ++k)
                if (index_of[S.cols()[k]] >= 0)
                    sub(index_of[r], index_of[S.cols()[k]]) = S.values()[k];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sub, Eigen::EigenvaluesOnly);
        rep.nnt_min_eigenvalue = eig.eigenvalues().minCoeff();
    }

    // Mass conditioning: exact per element block since M is block diagonal.
    rep.mass_block_condition = 1.0;
    const SparseMatrix& M = problem.system.mass;
    for (int t = 0; t < problem.dofmap.n_elements(); ++t) {
        const int n = problem.dofmap.n_element_dofs(t);
        const int off = problem.dofmap.offset(t);
        Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n, n);
        for (int r = 0; r < n; ++r)
            for (int k = M.row_ptr()[off + r]; k < M.row_ptr()[off + r + 1]; ++k)
                block(r, M.cols()[k] - off) = M.values()[k];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block, Eigen::EigenvaluesOnly);
        const double lo = eig.eigenvalues().minCoeff(), hi = eig.eigenvalues().maxCoeff();
        if (lo <= 0.0) throw Error("run_checks: singular element mass block");
        rep.mass_block_condition = std::max(rep.mass_block_condition, hi / lo);
    }
    (void)cfg;
    return rep;
}

int cmd_mesh(const SimulationConfig& cfg, const std::string& output_dir, int levels) {
    std::filesystem::create_directories(output_dir);
    Mesh mesh = cfg.build_mesh();
    nlohmann::json manifest = nlohmann::json::array();
    for (int l = 0; l <= std::max(levels, 0); ++l) {
        if (l > 0) mesh = refine_uniform(mesh);
        const std::string name = "mesh_l" + std::to_string(l) + ".msh";
        export_msh(mesh, output_dir + "/" + name);
        nlohmann::json entry = mesh_manifest(mesh);
        entry["file"] = name;
        entry["level"] = l;
        manifest.push_back(entry);
        std::cout << "level " << l << ": " << mesh.n_triangles() << " triangles, h = "
                  << mesh.mesh_size << "\n";
    }
    std::ofstream mf(output_dir + "/manifest.json");
    mf << manifest.dump(2) << "\n";
    return 0;
}

int cmd_run(const SimulationConfig& cfg, const std::string& output_dir) {
    std::filesystem::create_directories(output_dir);
    const Problem problem(cfg);
    const DofMap& dofmap = problem.dofmap;

    NewmarkParams np;
    np.gamma = cfg.gamma;
    np.delta = cfg.delta;
    np.step = cfg.time_step(problem.mesh.mesh_size);
    np.final_time = cfg.final_time;
    np.lumped_mass = cfg.lumped_mass;
    np.cfl_guard = cfg.cfl_guard;

    std::ofstream energy_csv(output_dir + "/energy.csv");
    energy_csv << "t,E,F,iterations,residual\n" << std::setprecision(17);

    double final_energy = 0.0;
    Observer observer = [&](const State& state, const StepInfo& info) {
        if (cfg.energy_stride > 0 && info.step % cfg.energy_stride == 0) {
            const double E = energy_monitor(state, problem.mesh, problem.basis, dofmap,
                                            cfg.physics, EnergyKind::E);
            const double F = energy_monitor(state, problem.mesh, problem.basis, dofmap,
                                            cfg.physics, EnergyKind::F);
            energy_csv << state.t << "," << E << "," << F << "," << info.iterations << ","
                       << info.residual << "\n";
            final_energy = E;
        }
        if (cfg.snapshot_stride > 0 && info.step % cfg.snapshot_stride == 0) {
            const DiscreteField field{&problem.mesh, &problem.basis, &dofmap, &state.u};
            write_vtk_snapshot(field,
                               output_dir + "/snapshot_" + std::to_string(info.step) + ".vtk");
        }
    };

    const RunResult result = run_simulation(problem.mesh, problem.basis, dofmap, problem.system,
                                            problem.wave, np, observer);
    final_energy = energy_monitor(result.state, problem.mesh, problem.basis, dofmap, cfg.physics,
                                  EnergyKind::E);
    std::cout << "final time " << result.state.t << ", E(T) = " << std::setprecision(17)
              << final_energy << "\n";
    return 0;
}

int cmd_converge(const SimulationConfig& cfg, const std::string& output_dir, int levels) {
    if (levels < 3) throw ConfigError("converge: need at least 3 levels");
    std::filesystem::create_directories(output_dir);

    StudySetup setup;
    setup.physics = cfg.physics;
    setup.penalty = cfg.penalty;
    setup.degree = cfg.degree;
    setup.wave = cfg.make_wave();
    setup.gamma = cfg.gamma;
    setup.delta = cfg.delta;
    if (cfg.step_is_ratio)
        setup.step_ratio = cfg.step_ratio;
    else
        setup.fixed_step = cfg.step_value;
    setup.final_time = cfg.final_time;
    setup.lumped_mass = cfg.lumped_mass;
    setup.cfl_guard = cfg.cfl_guard;
    setup.verbose = true;

    const Mesh base = cfg.build_mesh();
    const ConvergenceReport report = convergence_study(base, levels, setup);
    write_convergence_csv(report, output_dir + "/convergence.csv");
    print_convergence_table(report, std::cout);
    return 0;
}

int cmd_check(const SimulationConfig& cfg) {
    const Problem problem(cfg);
    const CheckReport rep = run_checks(problem, cfg);
    std::cout << std::setprecision(4);
    std::cout << "symmetry residual   " << rep.symmetry_residual << " (tol " << rep.symmetry_tolerance
              << "): " << (rep.symmetry_ok() ? "pass" : "FAIL") << "\n";
    std::cout << "lambda_min(A)       " << rep.lambda_min << " (norm " << rep.stiffness_norm
              << "): " << (rep.coercivity_ok() ? "pass" : "FAIL") << "\n";
    std::cout << "N+N^T min eig       " << rep.nnt_min_eigenvalue << ": "
              << (rep.dissipativity_ok() ? "pass" : "FAIL") << "\n";
    std::cout << "N+N^T support       "
              << (rep.nnt_support_confined ? "confined to absorbing DOFs: pass" : "FAIL") << "\n";
    std::cout << "mass block cond     " << rep.mass_block_condition << "\n";
    return rep.all_ok() ? 0 : 3;
}

}  // namespace fsi
