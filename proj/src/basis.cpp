#include "fsi/basis.hpp"

#include <cmath>

namespace fsi {

namespace {

// One-dimensional Lagrange factor P_m(t) = prod_{r<m} (k t - r)/(m - r) of the
// Silvester construction; exact product form keeps partition of unity at
// machine precision.
double silvester(int m, int k, double t) {
    double p = 1.0;
    for (int r = 0; r < m; ++r) p *= (k * t - r) / double(m - r);
    return p;
}

double silvester_deriv(int m, int k, double t) {
    double sum = 0.0;
    for (int r = 0; r < m; ++r) {
        double p = double(k) / double(m - r);
        for (int r2 = 0; r2 < m; ++r2) {
            if (r2 == r) continue;
            p *= (k * t - r2) / double(m - r2);
        }
        sum += p;
    }
    return sum;
}

}  // namespace

ReferenceBasis::ReferenceBasis(int degree) : degree_(degree) {
    if (degree < 1 || degree > 4) throw Error("ReferenceBasis: degree must be in [1,4]");
    n_local_ = (degree + 1) * (degree + 2) / 2;

    for (int j = 0; j <= degree; ++j) {
        for (int i = 0; i <= degree - j; ++i) {
            nodes_.emplace_back(double(i) / degree, double(j) / degree);
            multi_.push_back({degree - i - j, i, j});
        }
    }

    volume_ = triangle_rule(2 * degree + 2);
    edge_ = fsi::edge_rule(degree + 1);

    values_.resize(volume_.size());
    grads_.resize(volume_.size());
    for (std::size_t q = 0; q < volume_.size(); ++q) {
        values_[q].resize(n_local_);
        grads_[q].resize(n_local_);
        for (int i = 0; i < n_local_; ++i) {
            values_[q][i] = eval(i, volume_.points[q]);
            grads_[q][i] = eval_grad(i, volume_.points[q]);
        }
    }

    for (int l = 0; l < 3; ++l) {
        for (int o = 0; o < 2; ++o) {
            edge_values_[l][o].resize(edge_.size());
            edge_grads_[l][o].resize(edge_.size());
            for (std::size_t q = 0; q < edge_.size(); ++q) {
                const double s = edge_.points[q].x;
                const double t = (o == 0) ? s : 1.0 - s;
                const Vec2 p = edge_point(l, t);
                edge_values_[l][o][q].resize(n_local_);
                edge_grads_[l][o][q].resize(n_local_);
                for (int i = 0; i < n_local_; ++i) {
                    edge_values_[l][o][q][i] = eval(i, p);
                    edge_grads_[l][o][q][i] = eval_grad(i, p);
                }
            }
        }
    }
}

double ReferenceBasis::eval(int i, const Vec2& p) const {
    const double l0 = 1.0 - p.x - p.y;
    const auto& m = multi_[i];
    return silvester(m[0], degree_, l0) * silvester(m[1], degree_, p.x) *
           silvester(m[2], degree_, p.y);
}

Vec2 ReferenceBasis::eval_grad(int i, const Vec2& p) const {
    const double l0 = 1.0 - p.x - p.y;
    const auto& m = multi_[i];
    const double p0 = silvester(m[0], degree_, l0);
    const double p1 = silvester(m[1], degree_, p.x);
    const double p2 = silvester(m[2], degree_, p.y);
    const double d0 = silvester_deriv(m[0], degree_, l0);
    const double d1 = silvester_deriv(m[1], degree_, p.x);
    const double d2 = silvester_deriv(m[2], degree_, p.y);
    // grad lambda0 = (-1,-1), grad lambda1 = (1,0), grad lambda2 = (0,1)
    return Vec2{-d0 * p1 * p2 + p0 * d1 * p2, -d0 * p1 * p2 + p0 * p1 * d2};
}

Vec2 ReferenceBasis::edge_point(int l, double t) {
    switch (l) {
        case 0: return {t, 0.0};
        case 1: return {1.0 - t, t};
        default: return {0.0, 1.0 - t};
    }
}

std::array<double, 3> ElementGeometry::barycentric(const Vec2& p) const {
    const double det = jacobian_det();
    const Vec2 e1 = v1 - v0, e2 = v2 - v0, r = p - v0;
    const double b1 = (r.x * e2.y - r.y * e2.x) / det;
    const double b2 = (e1.x * r.y - e1.y * r.x) / det;
    return {1.0 - b1 - b2, b1, b2};
}

Vec2 map_gradient(const ElementGeometry& geom, const Vec2& g) {
    const Vec2 e1 = geom.v1 - geom.v0, e2 = geom.v2 - geom.v0;
    const double det = e1.cross(e2);
    if (std::abs(det) < 1e-300) throw Error("map_gradient: degenerate element");
    // J = [e1 e2], J^{-T} = 1/det [[e2.y, -e2.x],[-e1.y, e1.x]]^T applied to g
    return Vec2{(e2.y * g.x - e1.y * g.y) / det, (-e2.x * g.x + e1.x * g.y) / det};
}

}  // namespace fsi
