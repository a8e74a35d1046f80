#pragma once

#include <functional>

#include "fsi/basis.hpp"
#include "fsi/dofmap.hpp"
#include "fsi/mesh.hpp"

namespace fsi {

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

/// Element-wise L2 projection of a scalar field onto the fluid block. Entries
/// outside the fluid block are left untouched.
void l2_project_scalar(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap,
                       const ScalarField& f, Vector& coeffs);

/// Element-wise L2 projection of a vector field onto the elastic block.
void l2_project_vector(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap,
                       const VectorField& f, Vector& coeffs);

/// Discrete field bundle: one coefficient vector over one mesh.
struct DiscreteField {
    const Mesh* mesh;
    const ReferenceBasis* basis;
    const DofMap* dofmap;
    const Vector* coeffs;

    /// Potential value at a reference point of a fluid element.
    double fluid_value(int element, const Vec2& ref) const;
    Vec2 fluid_gradient(int element, const Vec2& ref) const;

    /// Displacement at a reference point of an elastic element.
    Vec2 elastic_value(int element, const Vec2& ref) const;
    /// Row-major displacement gradient [du1/dx, du1/dy; du2/dx, du2/dy].
    std::array<double, 4> elastic_gradient(int element, const Vec2& ref) const;
};

}  // namespace fsi
