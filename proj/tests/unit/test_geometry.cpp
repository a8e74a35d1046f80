#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include "fsi/basis.hpp"
#include "fsi/mesh.hpp"
#include "fsi/msh_io.hpp"

using namespace fsi;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = std::string("/tmp/fsi_test_") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

const char* two_tri_msh =
    "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"
    "$Nodes\n4\n1 0 0 0\n2 1 0 0\n3 0 1 0\n4 1 1 0\n$EndNodes\n"
    "$Elements\n2\n1 2 2 1 1 1 2 3\n2 2 2 2 2 2 4 3\n$EndElements\n";

int count_kind(const Mesh& mesh, EdgeKind kind) {
    int n = 0;
    for (const auto& e : mesh.edges) n += e.kind == kind ? 1 : 0;
    return n;
}

// Subdomain Euler characteristic V - E + F over the entities of one tag.
int euler_characteristic(const Mesh& mesh, Subdomain tag) {
    std::set<int> vset;
    std::set<std::pair<int, int>> eset;
    int faces = 0;
    for (const auto& tri : mesh.triangles) {
        if (tri.tag != tag) continue;
        ++faces;
        for (int l = 0; l < 3; ++l) {
            const int a = tri.v[l], b = tri.v[(l + 1) % 3];
            vset.insert(a);
            eset.insert({std::min(a, b), std::max(a, b)});
        }
    }
    return int(vset.size()) - int(eset.size()) + faces;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("annulus mesh: structure, Euler counts, circles") {
    const Mesh mesh = build_annulus_mesh(1.0, 2.0, 4, 16);

    CHECK(count_kind(mesh, EdgeKind::Interface) > 0);
    CHECK(count_kind(mesh, EdgeKind::Artificial) > 0);
    CHECK(count_kind(mesh, EdgeKind::InteriorElastic) > 0);
    CHECK(count_kind(mesh, EdgeKind::InteriorFluid) > 0);

    // Disk is a topological disk, the annulus a ring.
    CHECK(euler_characteristic(mesh, Subdomain::Elastic) == 1);
    CHECK(euler_characteristic(mesh, Subdomain::Fluid) == 0);

    for (const auto& e : mesh.edges) {
        CHECK(std::abs(e.normal.norm() - 1.0) <= 1e-14);
        CHECK(e.length > 0.0);
        if (e.kind == EdgeKind::Interface) {
            CHECK(std::abs(mesh.vertices[e.v0].norm() - 1.0) <= 1e-12);
            CHECK(std::abs(mesh.vertices[e.v1].norm() - 1.0) <= 1e-12);
            CHECK(mesh.triangles[e.elem[0]].tag == Subdomain::Elastic);
            CHECK(mesh.triangles[e.elem[1]].tag == Subdomain::Fluid);
            const Vec2 mid = (mesh.vertices[e.v0] + mesh.vertices[e.v1]) * 0.5;
            CHECK(e.normal.dot(mesh.centroid(e.elem[1]) - mid) > 0.0);
        }
        if (e.kind == EdgeKind::Artificial) {
            CHECK(std::abs(mesh.vertices[e.v0].norm() - 2.0) <= 1e-12);
            CHECK(mesh.triangles[e.elem[0]].tag == Subdomain::Fluid);
            CHECK(e.elem[1] == -1);
        }
    }

    double hmax = 0.0;
    for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
        CHECK(mesh.area(int(t)) > 0.0);
        hmax = std::max(hmax, mesh.diameter(int(t)));
    }
    CHECK(std::abs(mesh.mesh_size - hmax) <= 1e-12 * hmax);

    CHECK_THROWS_AS(build_annulus_mesh(1.0, 0.5, 4, 16), Error);
    CHECK_THROWS_AS(build_annulus_mesh(1.0, 2.0, 4, 4), Error);
    CHECK_THROWS_AS(build_annulus_mesh(1.0, 2.0, 0, 16), Error);
}

TEST_CASE("annulus areas approach the analytic values") {
    const Mesh mesh = build_annulus_mesh(1.0, 2.0, 64, 256);
    double area_fluid = 0.0, area_elastic = 0.0;
    for (std::size_t t = 0; t < mesh.n_triangles(); ++t)
        (mesh.triangles[t].tag == Subdomain::Fluid ? area_fluid : area_elastic) +=
            mesh.area(int(t));
    const double exact = 3.0 * std::numbers::pi;
    CHECK(std::abs(area_fluid - exact) / exact < 1e-3);
    CHECK(std::abs(area_elastic - std::numbers::pi) / std::numbers::pi < 1e-3);
}

TEST_CASE("subdomain area sums match the boundary polygons") {
    const Mesh mesh = build_annulus_mesh(1.0, 2.0, 3, 24);
    auto polygon_area = [&](EdgeKind kind) {
        double twice = 0.0;
        for (const auto& e : mesh.edges) {
            if (e.kind != kind) continue;
            Vec2 a = mesh.vertices[e.v0], b = mesh.vertices[e.v1];
            if (a.cross(b) < 0.0) std::swap(a, b);
            twice += a.cross(b);
        }
        return 0.5 * twice;
    };
    const double disk = polygon_area(EdgeKind::Interface);
    const double outer = polygon_area(EdgeKind::Artificial);
    double area_fluid = 0.0, area_elastic = 0.0;
    for (std::size_t t = 0; t < mesh.n_triangles(); ++t)
        (mesh.triangles[t].tag == Subdomain::Fluid ? area_fluid : area_elastic) +=
            mesh.area(int(t));
    CHECK(std::abs(area_elastic - disk) <= 1e-12 * disk);
    CHECK(std::abs(area_fluid - (outer - disk)) <= 1e-12 * outer);
}

TEST_CASE("shared edges are traversed oppositely by their elements") {
    const Mesh mesh = build_annulus_mesh(1.0, 2.0, 3, 16);
    for (const Edge& e : mesh.edges) {
        if (e.elem[1] < 0) continue;
        int dir[2] = {0, 0};
        for (int side = 0; side < 2; ++side) {
            const auto& tri = mesh.triangles[e.elem[side]];
            for (int l = 0; l < 3; ++l) {
                if (tri.v[l] == e.v0 && tri.v[(l + 1) % 3] == e.v1) dir[side] = +1;
                if (tri.v[l] == e.v1 && tri.v[(l + 1) % 3] == e.v0) dir[side] = -1;
            }
        }
        CHECK(dir[0] * dir[1] == -1);
    }
}

TEST_CASE("msh import: two-triangle coupled mesh") {
    const std::string path = write_temp("two_tri.msh", two_tri_msh);
    const Mesh mesh = import_msh(path);
    CHECK(mesh.n_triangles() == 2);
    CHECK(count_kind(mesh, EdgeKind::Interface) == 1);
    CHECK(count_kind(mesh, EdgeKind::InteriorElastic) == 0);
    CHECK(count_kind(mesh, EdgeKind::InteriorFluid) == 0);
    CHECK(count_kind(mesh, EdgeKind::Artificial) == 2);
    // free elastic boundary edges are not stored
    CHECK(mesh.edges.size() == 3);
}

TEST_CASE("msh import: parse errors carry line numbers") {
    const std::string truncated = write_temp(
        "trunc.msh", "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n$Nodes\n4\n1 0 0 0\n2 1 0 0\n");
    CHECK_THROWS_WITH_AS(import_msh(truncated), doctest::Contains("trunc.msh:"), Error);

    const std::string bad_tag = write_temp(
        "badtag.msh",
        "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n"
        "$Nodes\n3\n1 0 0 0\n2 1 0 0\n3 0 1 0\n$EndNodes\n"
        "$Elements\n1\n1 2 2 7 7 1 2 3\n$EndElements\n");
    CHECK_THROWS_AS(import_msh(bad_tag), Error);
    CHECK_THROWS_AS(import_msh("/nonexistent/mesh.msh"), Error);
}

TEST_CASE("msh export / import round trip") {
    const Mesh mesh = build_annulus_mesh(1.0, 2.0, 2, 12);
    export_msh(mesh, "/tmp/fsi_test_roundtrip.msh");
    const Mesh back = import_msh("/tmp/fsi_test_roundtrip.msh");
    CHECK(back.n_triangles() == mesh.n_triangles());
    CHECK(back.vertices.size() == mesh.vertices.size());
    CHECK(back.edges.size() == mesh.edges.size());
    for (int kind = 0; kind < 4; ++kind)
        CHECK(count_kind(back, EdgeKind(kind)) == count_kind(mesh, EdgeKind(kind)));
}

TEST_CASE("uniform refinement of a single triangle") {
    std::vector<Vec2> verts{{0, 0}, {1, 0}, {0, 1}};
    std::vector<Triangle> tris{{{0, 1, 2}, Subdomain::Fluid}};
    const Mesh mesh = finalize_mesh(std::move(verts), std::move(tris));
    const Mesh fine = refine_uniform(mesh);
    CHECK(fine.n_triangles() == 4);
    CHECK(fine.vertices.size() == 6);
    CHECK(fine.parent_triangle == std::vector<int>{0, 0, 0, 0});
    double area = 0.0;
    for (int t = 0; t < 4; ++t) area += fine.area(t);
    CHECK(area == doctest::Approx(0.5));
}

TEST_CASE("refinement halves the mesh size and keeps the hierarchy") {
    const Mesh base = build_annulus_mesh(1.0, 2.0, 3, 16);
    const Mesh l1 = refine_uniform(base);
    const Mesh l2 = refine_uniform(l1);

    const double ratio = l1.mesh_size / base.mesh_size;
    CHECK(ratio > 0.45);
    CHECK(ratio < 0.55);

    REQUIRE(l2.parent);
    REQUIRE(l2.parent->parent);
    CHECK(l2.parent->n_triangles() == l1.n_triangles());

    // Every fine triangle's centroid lies in its coarse ancestor.
    for (std::size_t t = 0; t < l2.n_triangles(); ++t) {
        const int p1 = l2.parent_triangle[t];
        const int p0 = l1.parent_triangle[p1];
        const auto& tri = base.triangles[p0];
        const ElementGeometry geom{base.vertices[tri.v[0]], base.vertices[tri.v[1]],
                                   base.vertices[tri.v[2]]};
        const auto b = geom.barycentric(l2.centroid(int(t)));
        CHECK(std::min({b[0], b[1], b[2]}) >= -1e-10);
    }

    for (std::size_t t = 0; t < l1.n_triangles(); ++t)
        CHECK(l1.triangles[t].tag == base.triangles[l1.parent_triangle[t]].tag);
    for (const auto& e : l1.edges) {
        if (e.kind != EdgeKind::Interface) continue;
        CHECK(std::abs(l1.vertices[e.v0].norm() - 1.0) <= 1e-12);
        CHECK(std::abs(l1.vertices[e.v1].norm() - 1.0) <= 1e-12);
    }
}

TEST_CASE("locate_point: centroids, vertices, random points vs brute force") {
    const Mesh base = build_annulus_mesh(1.0, 2.0, 3, 16);
    const Mesh mesh = refine_uniform(refine_uniform(base));

    for (int t = 0; t < 20; ++t) {
        const auto loc = locate_point(mesh, mesh.centroid(t));
        CHECK(loc.element == t);
        for (int k = 0; k < 3; ++k)
            CHECK(loc.barycentric[k] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    }

    {
        const int v = mesh.triangles[10].v[1];
        const auto loc = locate_point(mesh, mesh.vertices[v]);
        bool adjacent = false;
        double bary_one = 0.0;
        for (int k = 0; k < 3; ++k)
            if (mesh.triangles[loc.element].v[k] == v) {
                adjacent = true;
                bary_one = loc.barycentric[k];
            }
        CHECK(adjacent);
        CHECK(bary_one == doctest::Approx(1.0).epsilon(1e-9));
    }

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    std::uniform_real_distribution<double> rad(0.1, 1.95);
    for (int trial = 0; trial < 50; ++trial) {
        const double th = ang(rng), r = rad(rng);
        const Vec2 p{r * std::cos(th), r * std::sin(th)};
        int best = -1;
        double best_score = -1e300;
        for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
            const auto& tri = mesh.triangles[t];
            const ElementGeometry geom{mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]],
                                       mesh.vertices[tri.v[2]]};
            const auto b = geom.barycentric(p);
            const double score = std::min({b[0], b[1], b[2]});
            if (score > best_score) {
                best_score = score;
                best = int(t);
            }
        }
        if (best_score < 1e-9) continue;  // skip points on edges (tie cases)
        const auto loc = locate_point(mesh, p);
        CHECK(loc.element == best);
    }

    CHECK_THROWS_AS(locate_point(mesh, {5.0, 5.0}), Error);
}

}  // TEST_SUITE
