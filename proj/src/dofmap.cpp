#include "fsi/dofmap.hpp"

namespace fsi {

DofMap::DofMap(const Mesh& mesh, int n_local) : n_local_(n_local) {
    const std::size_t n = mesh.n_triangles();
    offsets_.assign(n, -1);
    counts_.assign(n, 0);
    int offset = 0;
    for (std::size_t t = 0; t < n; ++t) {
        if (mesh.triangles[t].tag != Subdomain::Elastic) continue;
        offsets_[t] = offset;
        counts_[t] = 2 * n_local_;
        offset += counts_[t];
    }
    block_boundary_ = offset;
    for (std::size_t t = 0; t < n; ++t) {
        if (mesh.triangles[t].tag != Subdomain::Fluid) continue;
        offsets_[t] = offset;
        counts_[t] = n_local_;
        offset += counts_[t];
    }
    size_ = offset;
}

}  // namespace fsi
