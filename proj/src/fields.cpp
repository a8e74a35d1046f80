#include "fsi/fields.hpp"

#include <Eigen/Dense>

namespace fsi {

namespace {

ElementGeometry geometry_of(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    return {mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]], mesh.vertices[tri.v[2]]};
}

// Local mass and its factorization are identical for every element up to the
// Jacobian determinant, so solve with the reference Gram matrix.
Eigen::MatrixXd reference_gram(const ReferenceBasis& basis) {
    const int nl = basis.n_local();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(nl, nl);
    const auto& rule = basis.volume_rule();
    for (std::size_t q = 0; q < rule.size(); ++q)
        for (int i = 0; i < nl; ++i)
            for (int j = 0; j < nl; ++j)
                g(i, j) += rule.weights[q] * basis.value(q, i) * basis.value(q, j);
    return g;
}

}  // namespace

void l2_project_scalar(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap,
                       const ScalarField& f, Vector& coeffs) {
    const int nl = basis.n_local();
    const auto& rule = basis.volume_rule();
    const Eigen::LDLT<Eigen::MatrixXd> gram(reference_gram(basis));
    Eigen::VectorXd rhs(nl);
    for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
        if (mesh.triangles[t].tag != Subdomain::Fluid) continue;
        const ElementGeometry geom = geometry_of(mesh, int(t));
        rhs.setZero();
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double fv = f(geom.map(rule.points[q]));
            for (int i = 0; i < nl; ++i) rhs(i) += rule.weights[q] * fv * basis.value(q, i);
        }
        const Eigen::VectorXd c = gram.solve(rhs);
        for (int i = 0; i < nl; ++i) coeffs[dofmap.fluid_dof(int(t), i)] = c(i);
    }
}

void l2_project_vector(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap,
                       const VectorField& f, Vector& coeffs) {
    const int nl = basis.n_local();
    const auto& rule = basis.volume_rule();
    const Eigen::LDLT<Eigen::MatrixXd> gram(reference_gram(basis));
    Eigen::VectorXd rhs0(nl), rhs1(nl);
    for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
        if (mesh.triangles[t].tag != Subdomain::Elastic) continue;
        const ElementGeometry geom = geometry_of(mesh, int(t));
        rhs0.setZero();
        rhs1.setZero();
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const Vec2 fv = f(geom.map(rule.points[q]));
            for (int i = 0; i < nl; ++i) {
                rhs0(i) += rule.weights[q] * fv.x * basis.value(q, i);
                rhs1(i) += rule.weights[q] * fv.y * basis.value(q, i);
            }
        }
        const Eigen::VectorXd c0 = gram.solve(rhs0);
        const Eigen::VectorXd c1 = gram.solve(rhs1);
        for (int i = 0; i < nl; ++i) {
            coeffs[dofmap.elastic_dof(int(t), 0, i)] = c0(i);
            coeffs[dofmap.elastic_dof(int(t), 1, i)] = c1(i);
        }
    }
}

double DiscreteField::fluid_value(int element, const Vec2& ref) const {
    double v = 0.0;
    for (int i = 0; i < basis->n_local(); ++i)
        v += (*coeffs)[dofmap->fluid_dof(element, i)] * basis->eval(i, ref);
    return v;
}

Vec2 DiscreteField::fluid_gradient(int element, const Vec2& ref) const {
    const ElementGeometry geom = geometry_of(*mesh, element);
    Vec2 g{0.0, 0.0};
    for (int i = 0; i < basis->n_local(); ++i)
        g += (*coeffs)[dofmap->fluid_dof(element, i)] * map_gradient(geom, basis->eval_grad(i, ref));
    return g;
}

Vec2 DiscreteField::elastic_value(int element, const Vec2& ref) const {
    Vec2 v{0.0, 0.0};
    for (int i = 0; i < basis->n_local(); ++i) {
        const double phi = basis->eval(i, ref);
        v.x += (*coeffs)[dofmap->elastic_dof(element, 0, i)] * phi;
        v.y += (*coeffs)[dofmap->elastic_dof(element, 1, i)] * phi;
    }
    return v;
}

std::array<double, 4> DiscreteField::elastic_gradient(int element, const Vec2& ref) const {
    const ElementGeometry geom = geometry_of(*mesh, element);
    std::array<double, 4> g{0, 0, 0, 0};
    for (int i = 0; i < basis->n_local(); ++i) {
        const Vec2 gp = map_gradient(geom, basis->eval_grad(i, ref));
        const double c0 = (*coeffs)[dofmap->elastic_dof(element, 0, i)];
        const double c1 = (*coeffs)[dofmap->elastic_dof(element, 1, i)];
        g[0] += c0 * gp.x;
        g[1] += c0 * gp.y;
        g[2] += c1 * gp.x;
        g[3] += c1 * gp.y;
    }
    return g;
}

}  // namespace fsi
