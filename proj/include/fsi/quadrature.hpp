#pragma once

#include <vector>

#include "fsi/types.hpp"

namespace fsi {

/// Quadrature on the reference triangle {(x,y): x,y >= 0, x+y <= 1} or on the
/// unit interval [0,1]. Triangle weights sum to 1/2, edge weights to 1.
struct QuadratureRule {
    std::vector<Vec2> points;  // reference coordinates; edges use (s, 0)
    std::vector<double> weights;
    int exactness = 0;

    std::size_t size() const { return points.size(); }
};

/// Symmetric triangle rule with polynomial exactness >= degree (degree <= 10).
QuadratureRule triangle_rule(int degree);

/// Gauss-Legendre rule on [0,1] with n points (exactness 2n-1), n <= 6.
QuadratureRule edge_rule(int npoints);

}  // namespace fsi
