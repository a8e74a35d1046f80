#pragma once

#include <array>
#include <vector>

#include "fsi/quadrature.hpp"
#include "fsi/types.hpp"

namespace fsi {

/// Nodal Lagrange basis of degree k on the reference triangle with equispaced
/// nodes, tabulated at a volume rule of exactness >= 2k+2 and at k+1 point
/// Gauss rules on each of the three local edges (both traversal directions).
class ReferenceBasis {
public:
    explicit ReferenceBasis(int degree);

    int degree() const { return degree_; }
    int n_local() const { return n_local_; }

    /// Equispaced interpolation nodes in reference coordinates.
    const std::vector<Vec2>& nodes() const { return nodes_; }

    const QuadratureRule& volume_rule() const { return volume_; }
    const QuadratureRule& edge_rule() const { return edge_; }

    /// Tabulated value of basis i at volume quadrature point q.
    double value(std::size_t q, int i) const { return values_[q][i]; }
    /// Tabulated reference gradient of basis i at volume quadrature point q.
    Vec2 grad(std::size_t q, int i) const { return grads_[q][i]; }

    /// Trace tabulations on local edge l in {0,1,2}. Orientation 0 walks the
    /// edge in local vertex order, orientation 1 in reverse; the parameter of
    /// point q is edge_rule().points[q].x along the chosen direction.
    double edge_value(int l, int orient, std::size_t q, int i) const {
        return edge_values_[l][orient][q][i];
    }
    Vec2 edge_grad(int l, int orient, std::size_t q, int i) const {
        return edge_grads_[l][orient][q][i];
    }

    /// Point evaluation anywhere (used by cross-mesh error evaluation).
    double eval(int i, const Vec2& p) const;
    Vec2 eval_grad(int i, const Vec2& p) const;

    /// Map a parameter t on local edge l (orientation 0) to a reference point.
    static Vec2 edge_point(int l, double t);

private:
    int degree_;
    int n_local_;
    std::vector<Vec2> nodes_;
    std::vector<std::array<int, 3>> multi_;  // barycentric exponents per node
    QuadratureRule volume_;
    QuadratureRule edge_;
    std::vector<std::vector<double>> values_;
    std::vector<std::vector<Vec2>> grads_;
    std::array<std::array<std::vector<std::vector<double>>, 2>, 3> edge_values_;
    std::array<std::array<std::vector<std::vector<Vec2>>, 2>, 3> edge_grads_;
};

/// Geometry of one affine triangle.
struct ElementGeometry {
    Vec2 v0, v1, v2;

    double signed_area() const { return 0.5 * (v1 - v0).cross(v2 - v0); }
    double jacobian_det() const { return (v1 - v0).cross(v2 - v0); }
    Vec2 map(const Vec2& ref) const {
        return v0 + (v1 - v0) * ref.x + (v2 - v0) * ref.y;
    }
    /// Barycentric coordinates (lambda0, lambda1, lambda2) of a physical point.
    std::array<double, 3> barycentric(const Vec2& p) const;
};

/// Push a reference gradient through the affine map: J^{-T} grad_ref.
Vec2 map_gradient(const ElementGeometry& geom, const Vec2& ref_grad);

}  // namespace fsi
