#pragma once

#include <functional>
#include <string>

#include "fsi/assembly.hpp"
#include "fsi/config.hpp"
#include "fsi/diagnostics.hpp"
#include "fsi/newmark.hpp"

namespace fsi {

/// Everything the pipeline derives from a configuration.
struct Problem {
    Mesh mesh;
    ReferenceBasis basis;
    DofMap dofmap;
    SemidiscreteSystem system;
    IncidentWave wave;

    explicit Problem(const SimulationConfig& cfg);
};

/// Matrix property report (symmetry, coercivity, dissipativity, mass
/// conditioning) of the assembled system of a configuration.
struct CheckReport {
    double symmetry_residual = 0.0;
    double symmetry_tolerance = 0.0;
    double lambda_min = 0.0;
    double stiffness_norm = 0.0;
    double nnt_min_eigenvalue = 0.0;
    bool nnt_support_confined = false;
    double mass_block_condition = 0.0;

    bool symmetry_ok() const { return symmetry_residual <= symmetry_tolerance; }
    bool coercivity_ok() const { return lambda_min >= -1e-10 * stiffness_norm; }
    bool dissipativity_ok() const;
    bool all_ok() const {
        return symmetry_ok() && coercivity_ok() && dissipativity_ok() && nnt_support_confined;
    }
};

/// Hook for tests to perturb the stiffness matrix before the checks run.
using StiffnessTamper = std::function<void(SparseMatrix&)>;

CheckReport run_checks(const Problem& problem, const SimulationConfig& cfg,
                       const StiffnessTamper& tamper = {});

/// CLI entry points. All return process exit codes:
/// 0 success, 1 config error, 2 numerical failure, 3 check failure
/// (config and numerical errors are thrown as ConfigError / Error and mapped
/// by the caller).
int cmd_mesh(const SimulationConfig& cfg, const std::string& output_dir, int levels);
int cmd_run(const SimulationConfig& cfg, const std::string& output_dir);
int cmd_converge(const SimulationConfig& cfg, const std::string& output_dir, int levels);
int cmd_check(const SimulationConfig& cfg);

}  // namespace fsi
