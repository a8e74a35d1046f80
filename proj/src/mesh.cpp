#include "fsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>
#include <unordered_set>

#include "fsi/basis.hpp"

namespace fsi {

namespace {

uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (uint64_t(a) << 32) | uint64_t(b);
}

}  // namespace

double Mesh::diameter(int t) const {
    const auto& tri = triangles[t];
    double d = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Vec2 a = vertices[tri.v[i]];
        const Vec2 b = vertices[tri.v[(i + 1) % 3]];
        d = std::max(d, (b - a).norm());
    }
    return d;
}

Mesh finalize_mesh(std::vector<Vec2> vertices, std::vector<Triangle> triangles) {
    Mesh mesh;
    mesh.vertices = std::move(vertices);
    mesh.triangles = std::move(triangles);

    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        auto& tri = mesh.triangles[t];
        const Vec2 a = mesh.vertices[tri.v[0]];
        const Vec2 b = mesh.vertices[tri.v[1]];
        const Vec2 c = mesh.vertices[tri.v[2]];
        const double area2 = (b - a).cross(c - a);
        const double scale = std::max({(b - a).norm(), (c - a).norm(), (c - b).norm()});
        if (std::abs(area2) <= 1e-14 * scale * scale)
            throw Error("finalize_mesh: degenerate triangle " + std::to_string(t));
        if (area2 < 0.0) std::swap(tri.v[1], tri.v[2]);
    }

    struct Adjacency {
        int elems[2] = {-1, -1};
        int count = 0;
    };
    std::unordered_map<uint64_t, Adjacency> adj;
    adj.reserve(mesh.triangles.size() * 2);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int l = 0; l < 3; ++l) {
            auto& a = adj[edge_key(tri.v[l], tri.v[(l + 1) % 3])];
            if (a.count >= 2)
                throw Error("finalize_mesh: non-manifold edge (more than two adjacent triangles)");
            a.elems[a.count++] = int(t);
        }
    }

    mesh.tri_edges.assign(mesh.triangles.size(), {-1, -1, -1});
    mesh.tri_neighbors.assign(mesh.triangles.size(), {-1, -1, -1});

    // Deterministic edge order: loop triangles, emit each edge at its first
    // appearance.
    std::unordered_set<uint64_t> emitted;
    emitted.reserve(adj.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int l = 0; l < 3; ++l) {
            const int va = tri.v[l], vb = tri.v[(l + 1) % 3];
            const uint64_t key = edge_key(va, vb);
            if (emitted.count(key)) continue;
            emitted.insert(key);
            const Adjacency& a = adj[key];

            Edge e;
            e.v0 = std::min(va, vb);
            e.v1 = std::max(va, vb);
            const Vec2 p0 = mesh.vertices[e.v0], p1 = mesh.vertices[e.v1];
            e.length = (p1 - p0).norm();
            Vec2 n{(p1 - p0).y / e.length, -(p1 - p0).x / e.length};

            if (a.count == 2) {
                const Subdomain t0 = mesh.triangles[a.elems[0]].tag;
                const Subdomain t1 = mesh.triangles[a.elems[1]].tag;
                if (t0 == t1) {
                    e.kind = (t0 == Subdomain::Elastic) ? EdgeKind::InteriorElastic
                                                        : EdgeKind::InteriorFluid;
                    e.elem[0] = std::min(a.elems[0], a.elems[1]);
                    e.elem[1] = std::max(a.elems[0], a.elems[1]);
                } else {
                    e.kind = EdgeKind::Interface;
                    e.elem[0] = (t0 == Subdomain::Elastic) ? a.elems[0] : a.elems[1];
                    e.elem[1] = (t0 == Subdomain::Elastic) ? a.elems[1] : a.elems[0];
                }
            } else {
                if (mesh.triangles[a.elems[0]].tag == Subdomain::Elastic) {
                    // Free elastic boundary edge: legal in partial test meshes,
                    // carries no transmission or absorbing term. Not stored.
                    continue;
                }
                e.kind = EdgeKind::Artificial;
                e.elem[0] = a.elems[0];
            }

            // Normal points from elem[0] toward elem[1] (or outward).
            const Vec2 mid = (p0 + p1) * 0.5;
            if (n.dot(mid - mesh.centroid(e.elem[0])) < 0.0) n = n * -1.0;
            e.normal = n;

            mesh.edges.push_back(e);
        }
    }

    for (std::size_t ei = 0; ei < mesh.edges.size(); ++ei) {
        const Edge& e = mesh.edges[ei];
        for (int side = 0; side < 2; ++side) {
            const int t = e.elem[side];
            if (t < 0) continue;
            const auto& tri = mesh.triangles[t];
            for (int l = 0; l < 3; ++l) {
                if (edge_key(tri.v[l], tri.v[(l + 1) % 3]) == edge_key(e.v0, e.v1)) {
                    mesh.tri_edges[t][l] = int(ei);
                    mesh.tri_neighbors[t][l] = e.elem[1 - side];
                }
            }
        }
    }

    mesh.mesh_size = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
        mesh.mesh_size = std::max(mesh.mesh_size, mesh.diameter(int(t)));
    return mesh;
}

namespace {

// Bowyer-Watson Delaunay triangulation; fine for the benign point sets the
// mesh builder produces (hexagonal lattice plus circle rings).
std::vector<std::array<int, 3>> delaunay(const std::vector<Vec2>& pts) {
    double lo = 1e300, hi = -1e300;
    for (const Vec2& p : pts) {
        lo = std::min({lo, p.x, p.y});
        hi = std::max({hi, p.x, p.y});
    }
    const double span = std::max(hi - lo, 1.0);
    const double cx = 0.5 * (lo + hi), cy = 0.5 * (lo + hi);

    std::vector<Vec2> v = pts;
    const int s0 = int(v.size()), s1 = s0 + 1, s2 = s0 + 2;
    v.emplace_back(cx - 40.0 * span, cy - 20.0 * span);
    v.emplace_back(cx + 40.0 * span, cy - 20.0 * span);
    v.emplace_back(cx, cy + 40.0 * span);

    auto in_circumcircle = [&](const std::array<int, 3>& t, const Vec2& p) {
        const Vec2 pa = v[t[0]] - p, pb = v[t[1]] - p, pc = v[t[2]] - p;
        const double det = (pa.x * pa.x + pa.y * pa.y) * pb.cross(pc) -
                           (pb.x * pb.x + pb.y * pb.y) * pa.cross(pc) +
                           (pc.x * pc.x + pc.y * pc.y) * pa.cross(pb);
        const double orient = (v[t[1]] - v[t[0]]).cross(v[t[2]] - v[t[0]]);
        return (orient > 0 ? det : -det) > 0.0;
    };

    std::vector<std::array<int, 3>> tris{{s0, s1, s2}};
    std::vector<std::array<int, 3>> keep;
    for (int p = 0; p < s0; ++p) {
        keep.clear();
        std::vector<std::pair<int, int>> boundary;
        auto add_edge = [&](int a, int b) {
            for (std::size_t i = 0; i < boundary.size(); ++i) {
                if (boundary[i].first == b && boundary[i].second == a) {
                    boundary.erase(boundary.begin() + i);
                    return;
                }
            }
            boundary.emplace_back(a, b);
        };
        for (const auto& t : tris) {
            if (in_circumcircle(t, v[p])) {
                add_edge(t[0], t[1]);
                add_edge(t[1], t[2]);
                add_edge(t[2], t[0]);
            } else {
                keep.push_back(t);
            }
        }
        tris.swap(keep);
        for (const auto& [a, b] : boundary) tris.push_back({a, b, p});
    }

    std::vector<std::array<int, 3>> out;
    for (const auto& t : tris)
        if (t[0] < s0 && t[1] < s0 && t[2] < s0) out.push_back(t);
    return out;
}

}  // namespace

namespace {

// Area-weighted star-centroid smoothing (Lloyd style): each vertex moves to
// the area-weighted centroid of its adjacent triangles; circle vertices slide
// along their circle. Unlike plain Laplacian averaging this does not contract
// strips against the pinned boundary rings.
void smooth_vertices(std::vector<Vec2>& verts, const std::vector<Triangle>& tris,
                     const std::vector<int>& vclass, double r_interface, double r_outer,
                     int sweeps) {
    std::vector<std::vector<int>> star(verts.size());
    for (std::size_t t = 0; t < tris.size(); ++t)
        for (int k = 0; k < 3; ++k) star[tris[t].v[k]].push_back(int(t));

    for (int sweep = 0; sweep < sweeps; ++sweep) {
        std::vector<Vec2> next = verts;
        for (std::size_t v = 0; v < verts.size(); ++v) {
            if (star[v].empty()) continue;
            Vec2 acc{0.0, 0.0};
            double wsum = 0.0;
            for (int t : star[v]) {
                const Vec2 a = verts[tris[t].v[0]], b = verts[tris[t].v[1]],
                           c = verts[tris[t].v[2]];
                const double area = std::abs((b - a).cross(c - a));
                acc += (a + b + c) * (area / 3.0);
                wsum += area;
            }
            Vec2 p = acc * (1.0 / wsum);
            if (vclass[v] == 1)
                p = p * (r_interface / p.norm());
            else if (vclass[v] == 2)
                p = p * (r_outer / p.norm());
            next[v] = p;
        }
        verts = std::move(next);
    }
}

// Flip interior same-subdomain edges to the Delaunay configuration. Edges
// between different subdomains (the interface polygon) never flip. Returns
// the number of flips applied.
int delaunay_flip_pass(const std::vector<Vec2>& verts, std::vector<Triangle>& tris) {
    std::unordered_map<uint64_t, std::array<int, 2>> edge_tris;
    for (std::size_t t = 0; t < tris.size(); ++t)
        for (int l = 0; l < 3; ++l) {
            auto [it, inserted] = edge_tris.try_emplace(
                edge_key(tris[t].v[l], tris[t].v[(l + 1) % 3]), std::array<int, 2>{-1, -1});
            (it->second[0] < 0 ? it->second[0] : it->second[1]) = int(t);
        }

    auto third = [&](const Triangle& t, int a, int b) {
        for (int k = 0; k < 3; ++k)
            if (t.v[k] != a && t.v[k] != b) return t.v[k];
        return -1;
    };

    int flips = 0;
    for (auto& [key, pair] : edge_tris) {
        if (pair[0] < 0 || pair[1] < 0) continue;
        Triangle& t1 = tris[pair[0]];
        Triangle& t2 = tris[pair[1]];
        if (t1.tag != t2.tag) continue;
        const int a = int(key >> 32), b = int(key & 0xffffffffu);
        const int c = third(t1, a, b), d = third(t2, a, b);
        if (c < 0 || d < 0 || c == d) continue;

        // Incircle test: flip when d lies strictly inside the circumcircle
        // of (a, b, c).
        const Vec2 pa = verts[a] - verts[d], pb = verts[b] - verts[d], pc = verts[c] - verts[d];
        const double det = (pa.x * pa.x + pa.y * pa.y) * pb.cross(pc) -
                           (pb.x * pb.x + pb.y * pb.y) * pa.cross(pc) +
                           (pc.x * pc.x + pc.y * pc.y) * pa.cross(pb);
        const double scale = std::pow((verts[a] - verts[b]).norm(), 4);
        const double orient = (verts[b] - verts[a]).cross(verts[c] - verts[a]);
        const double sign = orient > 0 ? 1.0 : -1.0;
        if (sign * det <= 1e-9 * scale) continue;

        // Both new triangles must keep positive area (convex quad).
        const Triangle n1{{a, d, c}, t1.tag};
        const Triangle n2{{d, b, c}, t1.tag};
        auto area2 = [&](const Triangle& t) {
            return (verts[t.v[1]] - verts[t.v[0]]).cross(verts[t.v[2]] - verts[t.v[0]]);
        };
        if (std::abs(area2(n1)) < 1e-12 || std::abs(area2(n2)) < 1e-12 ||
            (area2(n1) > 0) != (area2(n2) > 0))
            continue;
        t1 = n1;
        t2 = n2;
        ++flips;
        // Edge map is stale after a flip; restart lazily via caller loop.
        break;
    }
    return flips;
}

void improve_mesh(std::vector<Vec2>& verts, std::vector<Triangle>& tris,
                  const std::vector<int>& vclass, double r_interface, double r_outer) {
    for (int round = 0; round < 60; ++round) {
        smooth_vertices(verts, tris, vclass, r_interface, r_outer, 3);
        int guard = 0;
        while (delaunay_flip_pass(verts, tris) > 0 && ++guard < 10000) {
        }
    }
}

}  // namespace

Mesh build_annulus_mesh(double r0, double r1, int n_radial, int n_angular) {
    if (!(r1 > r0) || !(r0 > 0.0)) throw Error("build_annulus_mesh: need r1 > r0 > 0");
    if (n_angular < 8) throw Error("build_annulus_mesh: n_angular must be >= 8");
    if (n_radial < 1) throw Error("build_annulus_mesh: n_radial must be >= 1");

    // Target spacing from both parameters; the explicit time step needs
    // quasi-uniform near-equilateral elements, so interior vertices come from
    // a hexagonal lattice and the circles get their own vertex rings.
    const double s =
        std::min(2.0 * std::numbers::pi * r0 / n_angular, (r1 - r0) / (0.866 * n_radial));

    std::vector<Vec2> pts;
    const double row_h = 0.866025403784438646 * s;
    const int jmax = int(std::ceil(r1 / row_h)) + 1;
    for (int j = -jmax; j <= jmax; ++j) {
        const double y = j * row_h;
        const double x_off = (j % 2 == 0) ? 0.0 : 0.5 * s;
        const int imax = int(std::ceil(r1 / s)) + 1;
        for (int i = -imax; i <= imax; ++i) {
            const Vec2 p{i * s + x_off, y};
            const double r = p.norm();
            if (r > r1 - 0.62 * s) continue;          // cleared band at the outer circle
            if (std::abs(r - r0) < 0.52 * s) continue;  // cleared band at the interface
            pts.push_back(p);
        }
    }
    const int n_if = std::max(8, int(std::lround(2.0 * std::numbers::pi * r0 / s)));
    for (int i = 0; i < n_if; ++i) {
        const double th = 2.0 * std::numbers::pi * i / n_if;
        pts.emplace_back(r0 * std::cos(th), r0 * std::sin(th));
    }
    const int n_out = std::max(8, int(std::lround(2.0 * std::numbers::pi * r1 / s)));
    for (int i = 0; i < n_out; ++i) {
        const double th = (2.0 * i + 1.0) * std::numbers::pi / n_out;
        pts.emplace_back(r1 * std::cos(th), r1 * std::sin(th));
    }

    std::vector<Triangle> tris;
    for (const auto& t : delaunay(pts)) {
        const Vec2 c = (pts[t[0]] + pts[t[1]] + pts[t[2]]) * (1.0 / 3.0);
        const Subdomain tag = c.norm() < r0 ? Subdomain::Elastic : Subdomain::Fluid;
        tris.push_back({{t[0], t[1], t[2]}, tag});
    }

    std::vector<int> vclass(pts.size(), 0);
    for (std::size_t v = 0; v < pts.size(); ++v) {
        const double r = pts[v].norm();
        if (std::abs(r - r0) < 1e-12 * r0) vclass[v] = 1;
        if (std::abs(r - r1) < 1e-12 * r1) vclass[v] = 2;
    }
    improve_mesh(pts, tris, vclass, r0, r1);

    Mesh mesh = finalize_mesh(std::move(pts), std::move(tris));
    mesh.interface_radius = r0;
    mesh.artificial_radius = r1;

    // The interface polygon must separate the subdomains exactly: every
    // interface edge joins two ring vertices on the circle r0.
    for (const Edge& e : mesh.edges) {
        if (e.kind != EdgeKind::Interface) continue;
        if (std::abs(mesh.vertices[e.v0].norm() - r0) > 1e-9 * r0 ||
            std::abs(mesh.vertices[e.v1].norm() - r0) > 1e-9 * r0)
            throw Error("build_annulus_mesh: interface polygon broke during triangulation");
    }
    return mesh;
}

Mesh refine_uniform(const Mesh& mesh) {
    std::vector<Vec2> verts = mesh.vertices;
    std::vector<Triangle> tris;
    tris.reserve(4 * mesh.triangles.size());

    // Edge kind lookup for boundary projection of new midpoints.
    std::unordered_map<uint64_t, EdgeKind> kind;
    kind.reserve(mesh.edges.size());
    for (const Edge& e : mesh.edges) kind[edge_key(e.v0, e.v1)] = e.kind;

    std::unordered_map<uint64_t, int> midpoint;
    midpoint.reserve(mesh.edges.size());
    auto get_mid = [&](int va, int vb) {
        const uint64_t key = edge_key(va, vb);
        auto it = midpoint.find(key);
        if (it != midpoint.end()) return it->second;
        Vec2 p = (mesh.vertices[va] + mesh.vertices[vb]) * 0.5;
        auto kit = kind.find(key);
        if (kit != kind.end()) {
            if (kit->second == EdgeKind::Interface && mesh.interface_radius)
                p = p * (*mesh.interface_radius / p.norm());
            if (kit->second == EdgeKind::Artificial && mesh.artificial_radius)
                p = p * (*mesh.artificial_radius / p.norm());
        }
        const int id = int(verts.size());
        verts.push_back(p);
        midpoint.emplace(key, id);
        return id;
    };

    std::vector<int> parent_tri;
    parent_tri.reserve(4 * mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        const int v0 = tri.v[0], v1 = tri.v[1], v2 = tri.v[2];
        const int m01 = get_mid(v0, v1), m12 = get_mid(v1, v2), m20 = get_mid(v2, v0);
        tris.push_back({{v0, m01, m20}, tri.tag});
        tris.push_back({{m01, v1, m12}, tri.tag});
        tris.push_back({{m20, m12, v2}, tri.tag});
        tris.push_back({{m01, m12, m20}, tri.tag});
        for (int c = 0; c < 4; ++c) parent_tri.push_back(int(t));
    }

    Mesh fine = finalize_mesh(std::move(verts), std::move(tris));
    fine.parent = std::make_shared<Mesh>(mesh);
    fine.parent_triangle = std::move(parent_tri);
    fine.interface_radius = mesh.interface_radius;
    fine.artificial_radius = mesh.artificial_radius;
    return fine;
}

namespace {

std::array<double, 3> barycentric_of(const Mesh& mesh, int t, const Vec2& p) {
    const auto& tri = mesh.triangles[t];
    return ElementGeometry{mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]],
                           mesh.vertices[tri.v[2]]}
        .barycentric(p);
}

double min_bary(const std::array<double, 3>& b) { return std::min({b[0], b[1], b[2]}); }

PointLocation brute_force(const Mesh& mesh, const Vec2& p, std::optional<Subdomain> sub) {
    PointLocation best;
    double best_score = -1e300;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        if (sub && mesh.triangles[t].tag != *sub) continue;
        const auto b = barycentric_of(mesh, int(t), p);
        const double s = min_bary(b);
        if (s > best_score) {
            best_score = s;
            best.element = int(t);
            best.barycentric = b;
        }
    }
    return best;
}

PointLocation walk(const Mesh& mesh, const Vec2& p, int seed, std::optional<Subdomain> sub) {
    int t = seed;
    for (std::size_t step = 0; step < mesh.triangles.size() + 2; ++step) {
        const auto b = barycentric_of(mesh, t, p);
        int worst = 0;
        if (b[1] < b[worst]) worst = 1;
        if (b[2] < b[worst]) worst = 2;
        if (b[worst] >= -1e-12) return {t, b};
        // Cross the edge opposite vertex `worst`.
        const int next = mesh.tri_neighbors[t][(worst + 1) % 3];
        if (next < 0 || (sub && mesh.triangles[next].tag != *sub)) break;
        t = next;
    }
    return brute_force(mesh, p, sub);
}

}  // namespace

PointLocation locate_point_nearest(const Mesh& mesh, const Vec2& p,
                                   std::optional<Subdomain> sub) {
    PointLocation loc;
    if (mesh.parent && !mesh.parent_triangle.empty()) {
        const PointLocation up = locate_point_nearest(*mesh.parent, p, sub);
        // Children of parent triangle q occupy slots 4q..4q+3.
        double best_score = -1e300;
        for (int c = 4 * up.element; c < 4 * up.element + 4; ++c) {
            if (sub && mesh.triangles[c].tag != *sub) continue;
            const auto b = barycentric_of(mesh, c, p);
            if (min_bary(b) > best_score) {
                best_score = min_bary(b);
                loc = {c, b};
            }
        }
        // Projected boundary vertices can shift a point into a neighbor's
        // children; the walk recovers it.
        if (best_score < -1e-9) loc = walk(mesh, p, loc.element, sub);
    } else {
        int seed = 0;
        if (sub) {
            for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
                if (mesh.triangles[t].tag == *sub) {
                    seed = int(t);
                    break;
                }
        }
        loc = walk(mesh, p, seed, sub);
    }
    return loc;
}

PointLocation locate_point(const Mesh& mesh, const Vec2& p, std::optional<Subdomain> sub) {
    PointLocation loc = locate_point_nearest(mesh, p, sub);
    const double mb = min_bary(loc.barycentric);
    if (mb < -1e-9 && -mb * mesh.diameter(loc.element) > 1e-6 * mesh.mesh_size)
        throw Error("locate_point: point outside the meshed region");
    return loc;
}

}  // namespace fsi
