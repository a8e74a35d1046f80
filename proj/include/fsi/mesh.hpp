#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "fsi/types.hpp"

namespace fsi {

enum class Subdomain : int { Elastic = 1, Fluid = 2 };

enum class EdgeKind : int {
    InteriorElastic,  // shared by two elastic triangles
    InteriorFluid,    // shared by two fluid triangles
    Interface,        // elastic/fluid transmission boundary
    Artificial        // absorbing outer boundary, fluid side only
};

struct Edge {
    int v0 = -1, v1 = -1;   // vertex ids, v0 < v1
    double length = 0.0;
    Vec2 normal;            // from elem[0] toward elem[1]; outward on boundary
    EdgeKind kind = EdgeKind::InteriorFluid;
    int elem[2] = {-1, -1};  // Interface edges store elastic first, fluid second
};

struct Triangle {
    std::array<int, 3> v{-1, -1, -1};
    Subdomain tag = Subdomain::Fluid;
};

/// Conforming triangle mesh of the coupled elastic body / fluid annulus.
/// Immutable once built; construction happens through build_annulus_mesh,
/// import_msh or refine_uniform.
struct Mesh {
    std::vector<Vec2> vertices;
    std::vector<Triangle> triangles;
    std::vector<Edge> edges;
    double mesh_size = 0.0;  // max element diameter

    /// Per-triangle edge ids and neighbor triangle ids (-1 on boundary).
    std::vector<std::array<int, 3>> tri_edges;
    std::vector<std::array<int, 3>> tri_neighbors;

    /// Refinement hierarchy: parent mesh and, per triangle, the parent's
    /// triangle index. Children of parent p are exactly 4p..4p+3.
    std::shared_ptr<const Mesh> parent;
    std::vector<int> parent_triangle;

    /// Radii of the exact circles bounding the interface / artificial
    /// boundary, when known; refinement projects new boundary vertices
    /// onto them.
    std::optional<double> interface_radius;
    std::optional<double> artificial_radius;

    Vec2 centroid(int t) const {
        const auto& tri = triangles[t];
        return (vertices[tri.v[0]] + vertices[tri.v[1]] + vertices[tri.v[2]]) * (1.0 / 3.0);
    }
    double area(int t) const {
        const auto& tri = triangles[t];
        return 0.5 * (vertices[tri.v[1]] - vertices[tri.v[0]])
                         .cross(vertices[tri.v[2]] - vertices[tri.v[0]]);
    }
    double diameter(int t) const;
    std::size_t n_triangles() const { return triangles.size(); }
};

/// Classify edges, orient triangles positively, compute lengths/normals and
/// the mesh size. Shared by the builders and the importer.
/// Throws on non-manifold edges (more than two adjacent triangles). Boundary
/// edges of elastic elements are tolerated and left out of the edge list
/// (traction-free wall); fully coupled meshes never produce them.
Mesh finalize_mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles);

/// Structured mesh of the coupled disk (elastic, radius r0) plus annulus
/// (fluid, r0 < r < r1): polar bands of paired triangles for the annulus and
/// the outer disk, a square "butterfly" core so element sizes stay
/// comparable near the center. n_angular must be a positive multiple of 8.
Mesh build_annulus_mesh(double r0, double r1, int n_radial, int n_angular);

/// Split every triangle into four by edge midpoints. Midpoints of interface /
/// artificial edges are projected onto the exact circles when the mesh
/// carries their radii.
Mesh refine_uniform(const Mesh& mesh);

struct PointLocation {
    int element = -1;
    std::array<double, 3> barycentric{0, 0, 0};
};

/// Locate the element containing a point, by ancestor descent when the mesh
/// has a refinement hierarchy and by walking search otherwise. An optional
/// subdomain restricts the search. Throws if the point lies outside the
/// meshed region beyond 1e-6 * mesh_size.
PointLocation locate_point(const Mesh& mesh, const Vec2& p,
                           std::optional<Subdomain> subdomain = std::nullopt);

/// Same search without the distance gate: returns the best candidate even if
/// the point lies outside it. Used for one-sided trace evaluation near
/// polygonally approximated boundaries, where fields are evaluated by
/// polynomial extension.
PointLocation locate_point_nearest(const Mesh& mesh, const Vec2& p,
                                   std::optional<Subdomain> subdomain = std::nullopt);

}  // namespace fsi
