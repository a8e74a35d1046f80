#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fsi/fields.hpp"
#include "fsi/incident.hpp"
#include "fsi/newmark.hpp"
#include "fsi/params.hpp"

namespace fsi {

/// Broken energy norm: material-weighted strain/divergence (elastic) and
/// gradient (fluid) terms plus (1/h)-weighted jump terms over interface and
/// interior edges, with one-sided traces on the interface. The reported value
/// is sqrt(elastic^2 + fluid^2).
struct DgNormParts {
    double elastic_sq = 0.0;
    double fluid_sq = 0.0;
    double total() const;
};

DgNormParts dg_energy_norm_parts(const DiscreteField& field, const PhysicalParams& params);
double dg_energy_norm(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap,
                      const Vector& coeffs, const PhysicalParams& params);

struct L2NormParts {
    double elastic_sq = 0.0;
    double fluid_sq = 0.0;
    double total() const;
};

L2NormParts l2_norm_parts(const DiscreteField& field);
double l2_norm(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap,
               const Vector& coeffs);

enum class EnergyKind { E, F };

/// Energy functions: E(t) from (u_t, strains of u, phi_t, grad phi), F(t) the
/// same one time derivative up.
double energy_monitor(const State& state, const Mesh& mesh, const ReferenceBasis& basis,
                      const DofMap& dofmap, const PhysicalParams& params,
                      EnergyKind kind = EnergyKind::E);

struct ErrorRecord {
    double h = 0.0;
    double energy_error = 0.0;
    double l2_error = 0.0;
    // per-field breakdown
    double energy_elastic = 0.0;
    double energy_fluid = 0.0;
    double l2_elastic = 0.0;
    double l2_fluid = 0.0;
};

enum class ErrorNorm { Energy, L2, Both };

/// Error between a coarse solution and a reference solution living on a
/// refinement descendant (or any mesh on which point location succeeds).
/// Both fields are evaluated at the coarse quadrature points; jump terms use
/// one-sided traces of both fields on the coarse edges.
ErrorRecord cross_mesh_error(const DiscreteField& coarse, const DiscreteField& reference,
                             const PhysicalParams& params, ErrorNorm norm = ErrorNorm::Both);

struct ConvergenceReport {
    std::vector<ErrorRecord> records;
    std::vector<double> energy_orders;  // records.size()-1 entries
    std::vector<double> l2_orders;
};

/// Observed order between consecutive records.
void compute_orders(ConvergenceReport& report);

struct StudySetup {
    PhysicalParams physics;
    PenaltyParams penalty;
    int degree = 1;
    IncidentWave wave;
    double gamma = 0.5;
    double delta = 0.0;
    double step_ratio = 20.0;  // l = h / step_ratio (per level)
    double fixed_step = 0.0;   // overrides the ratio when > 0
    double final_time = 1.0;
    bool lumped_mass = true;
    bool cfl_guard = true;
    bool verbose = false;
};

/// Mesh hierarchy study: run levels refinements of the base mesh plus one
/// extra level as reference, measure cross-mesh errors at the final time.
ConvergenceReport convergence_study(const Mesh& base_mesh, int levels, const StudySetup& setup);

void write_convergence_csv(const ConvergenceReport& report, const std::string& path);
void print_convergence_table(const ConvergenceReport& report, std::ostream& out);

}  // namespace fsi
