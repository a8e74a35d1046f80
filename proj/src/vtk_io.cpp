#include "fsi/vtk_io.hpp"

#include <fstream>

namespace fsi {

void write_vtk_snapshot(const DiscreteField& field, const std::string& path) {
    const Mesh& mesh = *field.mesh;
    std::ofstream out(path);
    if (!out) throw Error("write_vtk_snapshot: cannot open '" + path + "'");
    out.precision(12);

    const std::size_t nt = mesh.n_triangles();
    out << "# vtk DataFile Version 3.0\nfsiwave snapshot\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << 3 * nt << " double\n";
    static const Vec2 corners[3] = {{0, 0}, {1, 0}, {0, 1}};
    for (std::size_t t = 0; t < nt; ++t)
        for (const auto& corner : corners) {
            const auto& tri = mesh.triangles[t];
            const ElementGeometry geom{mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]],
                                       mesh.vertices[tri.v[2]]};
            const Vec2 p = geom.map(corner);
            out << p.x << " " << p.y << " 0\n";
        }
    out << "CELLS " << nt << " " << 4 * nt << "\n";
    for (std::size_t t = 0; t < nt; ++t)
        out << "3 " << 3 * t << " " << 3 * t + 1 << " " << 3 * t + 2 << "\n";
    out << "CELL_TYPES " << nt << "\n";
    for (std::size_t t = 0; t < nt; ++t) out << "5\n";

    out << "POINT_DATA " << 3 * nt << "\n";
    auto write_component = [&](const std::string& name, int what) {
        out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
        for (std::size_t t = 0; t < nt; ++t) {
            const bool elastic = mesh.triangles[t].tag == Subdomain::Elastic;
            for (const auto& corner : corners) {
                double v = 0.0;
                if (what < 2 && elastic) {
                    const Vec2 u = field.elastic_value(int(t), corner);
                    v = what == 0 ? u.x : u.y;
                } else if (what == 2 && !elastic) {
                    v = field.fluid_value(int(t), corner);
                }
                out << v << "\n";
            }
        }
    };
    write_component("u1", 0);
    write_component("u2", 1);
    write_component("phi", 2);
}

}  // namespace fsi
