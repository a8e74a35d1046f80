#pragma once

#include "fsi/basis.hpp"
#include "fsi/dofmap.hpp"
#include "fsi/incident.hpp"
#include "fsi/mesh.hpp"
#include "fsi/params.hpp"
#include "fsi/sparse.hpp"

namespace fsi {

/// Mass matrix: block diagonal, elastic blocks scaled rho2/rho1 per
/// displacement component, fluid blocks scaled 1/c^2.
SparseMatrix assemble_mass(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap,
                           const PhysicalParams& params);

struct StiffnessOptions {
    bool volume = true;
    bool flux = true;    // symmetrized consistency terms on interior edges
    bool penalty = true;
};

/// Stiffness matrix: elastic volume terms (lambda/rho1) div-div +
/// (2 mu/rho1) strain-strain and fluid grad-grad, plus symmetric interior
/// penalty terms on interior edges of each subdomain. No elastic/fluid
/// coupling. The displacement jump is the scalar sum of normal traces, the
/// potential jump the vector-valued one; the matching flux averages are the
/// normal-normal stress and the normal gradient.
SparseMatrix assemble_stiffness(const Mesh& mesh, const ReferenceBasis& basis,
                                const DofMap& dofmap, const PhysicalParams& params,
                                const PenaltyParams& penalty, StiffnessOptions opts = {});

/// Damping/coupling matrix N = [[0, B], [-B^T, D]]: B couples the interface
/// pressure to the solid equations, D is the absorbing boundary mass.
SparseMatrix assemble_damping(const Mesh& mesh, const ReferenceBasis& basis,
                              const DofMap& dofmap);

/// Jump Gram matrix of the DG energy norm: weight * sum over interface and
/// interior edges of the jump products, with the one-sided boundary
/// convention on interface edges.
SparseMatrix assemble_jump_gram(const Mesh& mesh, const ReferenceBasis& basis,
                                const DofMap& dofmap, double weight);

/// Time-dependent load from the incident field, supported on DOFs of
/// elements adjacent to the interface. Precomputes traces and geometry once.
class LoadAssembler {
public:
    LoadAssembler(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap);

    void assemble(const IncidentWave& wave, double t, Vector& out) const;
    Vector assemble(const IncidentWave& wave, double t) const;

private:
    struct QuadSample {
        Vec2 point;
        double weight;  // physical edge weight
    };
    struct EdgeRecord {
        Vec2 normal;
        std::vector<QuadSample> samples;
        std::vector<int> elastic_dofs;           // 2 * n_local
        std::vector<int> fluid_dofs;             // n_local
        std::vector<std::vector<double>> elastic_trace;  // [q][i]
        std::vector<std::vector<double>> fluid_trace;    // [q][j]
    };
    int size_;
    std::vector<EdgeRecord> edges_;
};

Vector assemble_load(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap,
                     const IncidentWave& wave, double t);

struct CoercivityReport {
    double lambda_min = 0.0;
    double norm = 0.0;  // largest |eigenvalue| estimate
    bool positive_semidefinite() const { return lambda_min >= -1e-10 * norm; }
};

/// Estimate the smallest eigenvalue of a symmetric matrix: dense eigensolve
/// for dim <= 2000, Lanczos otherwise. Throws if A is not symmetric to
/// 1e-12 * max|A|.
CoercivityReport check_coercivity(const SparseMatrix& A);

}  // namespace fsi
