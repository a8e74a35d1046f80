#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "fsi/basis.hpp"
#include "fsi/dofmap.hpp"
#include "fsi/fields.hpp"
#include "fsi/quadrature.hpp"

using namespace fsi;

namespace {

// Exact reference-triangle integral of x^p y^q.
double monomial_integral(int p, int q) {
    double num = 1.0, den = 1.0;
    for (int k = 2; k <= p; ++k) num *= k;
    for (int k = 2; k <= q; ++k) num *= k;
    for (int k = 2; k <= p + q + 2; ++k) den *= k;
    return num / den;
}

// Independent polynomial integrator: sample on an equispaced grid, recover
// monomial coefficients, integrate them exactly.
double integrate_poly(const std::function<double(const Vec2&)>& f, int degree) {
    const int n = (degree + 1) * (degree + 2) / 2;
    std::vector<Vec2> nodes;
    for (int j = 0; j <= degree; ++j)
        for (int i = 0; i <= degree - j; ++i)
            nodes.emplace_back(double(i) / degree, double(j) / degree);
    Eigen::MatrixXd V(n, n);
    Eigen::VectorXd rhs(n);
    for (int r = 0; r < n; ++r) {
        int c = 0;
        for (int p = 0; p <= degree; ++p)
            for (int q = 0; q <= degree - p; ++q)
                V(r, c++) = std::pow(nodes[r].x, p) * std::pow(nodes[r].y, q);
        rhs(r) = f(nodes[r]);
    }
    const Eigen::VectorXd coeff = V.fullPivLu().solve(rhs);
    double integral = 0.0;
    int c = 0;
    for (int p = 0; p <= degree; ++p)
        for (int q = 0; q <= degree - p; ++q) integral += coeff(c++) * monomial_integral(p, q);
    return integral;
}

}  // namespace

TEST_SUITE("quadrature_basis") {

TEST_CASE("triangle rule weights and monomial exactness") {
    for (int deg : {1, 2, 4, 6, 8, 10}) {
        const QuadratureRule rule = triangle_rule(deg);
        double sum = 0.0;
        for (double w : rule.weights) sum += w;
        CHECK(std::abs(sum - 0.5) <= 1e-14);
        for (int p = 0; p <= rule.exactness; ++p) {
            for (int q = 0; p + q <= rule.exactness; ++q) {
                double val = 0.0;
                for (std::size_t k = 0; k < rule.size(); ++k)
                    val += rule.weights[k] * std::pow(rule.points[k].x, p) *
                           std::pow(rule.points[k].y, q);
                CHECK(std::abs(val - monomial_integral(p, q)) <= 1e-12);
            }
        }
    }
}

TEST_CASE("edge rule weights and exactness") {
    for (int n = 1; n <= 6; ++n) {
        const QuadratureRule rule = edge_rule(n);
        double sum = 0.0;
        for (double w : rule.weights) sum += w;
        CHECK(std::abs(sum - 1.0) <= 1e-14);
        for (int p = 0; p <= rule.exactness; ++p) {
            double val = 0.0;
            for (std::size_t k = 0; k < rule.size(); ++k)
                val += rule.weights[k] * std::pow(rule.points[k].x, p);
            CHECK(std::abs(val - 1.0 / (p + 1)) <= 1e-12);
        }
    }
}

TEST_CASE("degree 1 basis is the barycentric coordinates") {
    const ReferenceBasis basis(1);
    REQUIRE(basis.n_local() == 3);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        double x = unit(rng), y = unit(rng);
        if (x + y > 1.0) {
            x = 1.0 - x;
            y = 1.0 - y;
        }
        CHECK(basis.eval(0, {x, y}) == doctest::Approx(1.0 - x - y).epsilon(1e-14));
        CHECK(basis.eval(1, {x, y}) == doctest::Approx(x).epsilon(1e-14));
        CHECK(basis.eval(2, {x, y}) == doctest::Approx(y).epsilon(1e-14));
        const Vec2 g0 = basis.eval_grad(0, {x, y});
        CHECK(g0.x == doctest::Approx(-1.0));
        CHECK(g0.y == doctest::Approx(-1.0));
    }
    CHECK_THROWS_AS(ReferenceBasis(5), Error);
    CHECK_THROWS_AS(ReferenceBasis(0), Error);
}

TEST_CASE("degree 2 Lagrange property at the nodes") {
    const ReferenceBasis basis(2);
    REQUIRE(basis.n_local() == 6);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(std::abs(basis.eval(i, basis.nodes()[j]) - (i == j ? 1.0 : 0.0)) <= 1e-13);
}

TEST_CASE("partition of unity and gradient sum at tabulated points") {
    for (int k = 1; k <= 4; ++k) {
        const ReferenceBasis basis(k);
        for (std::size_t q = 0; q < basis.volume_rule().size(); ++q) {
            double sum = 0.0;
            Vec2 gsum{0.0, 0.0};
            for (int i = 0; i < basis.n_local(); ++i) {
                sum += basis.value(q, i);
                gsum += basis.grad(q, i);
            }
            CHECK(std::abs(sum - 1.0) <= 1e-13);
            CHECK(gsum.norm() <= 1e-12);
        }
    }
}

TEST_CASE("volume quadrature of phi1*phi2 equals 1/24 for k=1") {
    const ReferenceBasis basis(1);
    const auto& rule = basis.volume_rule();
    double val = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q)
        val += rule.weights[q] * basis.value(q, 1) * basis.value(q, 2);
    CHECK(val == doctest::Approx(1.0 / 24.0).epsilon(1e-13));
}

TEST_CASE("mass matrix quadrature matches symbolic integration up to k=4") {
    for (int k = 1; k <= 4; ++k) {
        const ReferenceBasis basis(k);
        const auto& rule = basis.volume_rule();
        for (int i = 0; i < basis.n_local(); ++i) {
            for (int j = i; j < basis.n_local(); ++j) {
                double quad = 0.0;
                for (std::size_t q = 0; q < rule.size(); ++q)
                    quad += rule.weights[q] * basis.value(q, i) * basis.value(q, j);
                const double symbolic = integrate_poly(
                    [&](const Vec2& p) { return basis.eval(i, p) * basis.eval(j, p); }, 2 * k);
                CHECK(std::abs(quad - symbolic) <= 5e-12);  // oracle Vandermonde conditioning
            }
        }
    }
}

TEST_CASE("edge trace tabulations agree with volume basis evaluation") {
    for (int k = 1; k <= 4; ++k) {
        const ReferenceBasis basis(k);
        const auto& erule = basis.edge_rule();
        for (int l = 0; l < 3; ++l) {
            for (int o = 0; o < 2; ++o) {
                for (std::size_t q = 0; q < erule.size(); ++q) {
                    const double s = erule.points[q].x;
                    const Vec2 p = ReferenceBasis::edge_point(l, o == 0 ? s : 1.0 - s);
                    for (int i = 0; i < basis.n_local(); ++i)
                        CHECK(std::abs(basis.edge_value(l, o, q, i) - basis.eval(i, p)) <= 1e-13);
                }
            }
        }
    }
}

TEST_CASE("map_gradient identity, scaling and affine exactness") {
    const ElementGeometry identity{{0, 0}, {1, 0}, {0, 1}};
    CHECK(map_gradient(identity, {0.3, -0.7}).x == doctest::Approx(0.3));
    CHECK(map_gradient(identity, {0.3, -0.7}).y == doctest::Approx(-0.7));

    const ElementGeometry doubled{{0, 0}, {2, 0}, {0, 2}};
    CHECK(map_gradient(doubled, {0.3, -0.7}).x == doctest::Approx(0.15));
    CHECK(map_gradient(doubled, {0.3, -0.7}).y == doctest::Approx(-0.35));

    // Linear f(x) = a . x has constant gradient a; the mapped basis gradient
    // must recover it exactly on any affine element.
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    const ReferenceBasis basis(1);
    for (int trial = 0; trial < 30; ++trial) {
        const ElementGeometry geom{{coord(rng), coord(rng)},
                                   {coord(rng), coord(rng)},
                                   {coord(rng), coord(rng)}};
        if (std::abs(geom.signed_area()) < 0.05) continue;
        const Vec2 a{coord(rng), coord(rng)};
        const double c[3] = {a.dot(geom.v0), a.dot(geom.v1), a.dot(geom.v2)};
        Vec2 g{0.0, 0.0};
        for (int i = 0; i < 3; ++i) g += c[i] * map_gradient(geom, basis.eval_grad(i, {0.3, 0.3}));
        CHECK(std::abs(g.x - a.x) <= 1e-12);
        CHECK(std::abs(g.y - a.y) <= 1e-12);
    }
    CHECK_THROWS_AS(map_gradient(ElementGeometry{{0, 0}, {1, 0}, {2, 0}}, {1, 0}), Error);
}

TEST_CASE("L2 projection: zero field, reproduction, idempotence") {
    Mesh mesh = build_annulus_mesh(1.0, 2.0, 2, 12);
    const ReferenceBasis basis(2);
    const DofMap dofmap(mesh, basis.n_local());

    Vector zero_coeffs(dofmap.size(), 0.0);
    l2_project_scalar(mesh, basis, dofmap, [](const Vec2&) { return 0.0; }, zero_coeffs);
    for (double c : zero_coeffs) CHECK(c == 0.0);

    Vector coeffs(dofmap.size(), 0.0);
    auto poly = [](const Vec2& x) { return 1.0 + 0.5 * x.x - 2.0 * x.y + 0.25 * x.x * x.y; };
    l2_project_scalar(mesh, basis, dofmap, poly, coeffs);
    const DiscreteField field{&mesh, &basis, &dofmap, &coeffs};
    for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
        if (mesh.triangles[t].tag != Subdomain::Fluid) continue;
        const auto& tri = mesh.triangles[t];
        const ElementGeometry geom{mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]],
                                   mesh.vertices[tri.v[2]]};
        for (std::size_t q = 0; q < basis.volume_rule().size(); ++q) {
            const Vec2 ref = basis.volume_rule().points[q];
            CHECK(std::abs(field.fluid_value(int(t), ref) - poly(geom.map(ref))) <= 1e-11);
        }
    }

    Vector coeffs2(dofmap.size(), 0.0);
    l2_project_scalar(mesh, basis, dofmap,
                      [&](const Vec2& x) {
                          const auto loc = locate_point(mesh, x, Subdomain::Fluid);
                          return field.fluid_value(loc.element,
                                                   {loc.barycentric[1], loc.barycentric[2]});
                      },
                      coeffs2);
    for (int d = dofmap.block_boundary(); d < dofmap.size(); ++d)
        CHECK(std::abs(coeffs[d] - coeffs2[d]) <= 1e-11);
}

TEST_CASE("single-element sine projection matches dense least squares") {
    std::vector<Vec2> verts{{0, 0}, {0.5, 0}, {0.1, 0.4}};
    std::vector<Triangle> tris{{{0, 1, 2}, Subdomain::Fluid}};
    Mesh mesh = finalize_mesh(std::move(verts), std::move(tris));
    const ReferenceBasis basis(1);
    const DofMap dofmap(mesh, basis.n_local());
    auto f = [](const Vec2& x) { return std::sin(x.x); };

    Vector coeffs(dofmap.size(), 0.0);
    l2_project_scalar(mesh, basis, dofmap, f, coeffs);

    const ElementGeometry geom{mesh.vertices[mesh.triangles[0].v[0]],
                               mesh.vertices[mesh.triangles[0].v[1]],
                               mesh.vertices[mesh.triangles[0].v[2]]};
    // Dense least-squares fit at 100 interior sample points; on this small
    // element it agrees with the projection to within the quadrature error.
    std::vector<Vec2> samples;
    for (int i = 0; i < 14 && samples.size() < 100; ++i)
        for (int j = 0; i + j < 14 && samples.size() < 100; ++j)
            samples.emplace_back((i + 0.35) / 14.5, (j + 0.35) / 14.5);
    Eigen::MatrixXd A(samples.size(), 3);
    Eigen::VectorXd b(samples.size());
    for (std::size_t r = 0; r < samples.size(); ++r) {
        for (int i = 0; i < 3; ++i) A(r, i) = basis.eval(i, samples[r]);
        b(r) = f(geom.map(samples[r]));
    }
    const Eigen::VectorXd ls = (A.transpose() * A).ldlt().solve(A.transpose() * b);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(coeffs[dofmap.fluid_dof(0, i)] - ls(i)) <= 5e-3);
}

}  // TEST_SUITE
