#pragma once

#include <vector>

#include "fsi/mesh.hpp"

namespace fsi {

/// Element-local polynomial unknowns concatenated into one global index
/// space: displacement components (2 * n_local per elastic element) first,
/// then potentials (n_local per fluid element). Within an elastic element the
/// u1 coefficients precede the u2 coefficients.
class DofMap {
public:
    DofMap(const Mesh& mesh, int n_local);

    int n_local() const { return n_local_; }
    int size() const { return size_; }
    int n_elements() const { return int(offsets_.size()); }
    /// First fluid DOF; elastic DOFs occupy [0, block_boundary).
    int block_boundary() const { return block_boundary_; }

    /// Global index of the first DOF of an element.
    int offset(int element) const { return offsets_[element]; }
    int n_element_dofs(int element) const { return counts_[element]; }

    /// Displacement DOF (component in {0,1}) of an elastic element.
    int elastic_dof(int element, int component, int i) const {
        return offsets_[element] + component * n_local_ + i;
    }
    /// Potential DOF of a fluid element.
    int fluid_dof(int element, int i) const { return offsets_[element] + i; }

private:
    int n_local_;
    int size_;
    int block_boundary_;
    std::vector<int> offsets_;
    std::vector<int> counts_;
};

}  // namespace fsi
