#include "fsi/msh_io.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

namespace fsi {

namespace {

[[noreturn]] void parse_error(const std::string& path, int line, const std::string& what) {
    throw Error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Mesh import_msh(const std::string& path, std::optional<double> interface_radius,
                std::optional<double> artificial_radius) {
    std::ifstream in(path);
    if (!in) throw Error("import_msh: cannot open '" + path + "'");

    std::string line;
    int lineno = 0;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++lineno;
        return true;
    };

    std::unordered_map<long, int> node_index;
    std::vector<Vec2> vertices;
    std::vector<Triangle> triangles;
    bool saw_nodes = false, saw_elements = false;

    while (next_line()) {
        if (line.rfind("$MeshFormat", 0) == 0) {
            if (!next_line()) parse_error(path, lineno, "truncated $MeshFormat");
            std::istringstream fs(line);
            double version = 0.0;
            int file_type = -1, data_size = 0;
            fs >> version >> file_type >> data_size;
            if (!fs || version < 2.0 || version >= 3.0 || file_type != 0)
                parse_error(path, lineno, "expected MSH 2.2 ASCII header");
            if (!next_line() || line.rfind("$EndMeshFormat", 0) != 0)
                parse_error(path, lineno, "missing $EndMeshFormat");
        } else if (line.rfind("$Nodes", 0) == 0) {
            if (!next_line()) parse_error(path, lineno, "truncated $Nodes");
            long count = -1;
            std::istringstream ns(line);
            ns >> count;
            if (!ns || count < 0) parse_error(path, lineno, "bad node count");
            vertices.reserve(std::size_t(count));
            for (long i = 0; i < count; ++i) {
                if (!next_line()) parse_error(path, lineno, "truncated node list");
                std::istringstream vs(line);
                long id = 0;
                double x = 0, y = 0, z = 0;
                vs >> id >> x >> y >> z;
                if (!vs) parse_error(path, lineno, "bad node line");
                node_index[id] = int(vertices.size());
                vertices.emplace_back(x, y);
            }
            if (!next_line() || line.rfind("$EndNodes", 0) != 0)
                parse_error(path, lineno, "missing $EndNodes");
            saw_nodes = true;
        } else if (line.rfind("$Elements", 0) == 0) {
            if (!next_line()) parse_error(path, lineno, "truncated $Elements");
            long count = -1;
            std::istringstream es(line);
            es >> count;
            if (!es || count < 0) parse_error(path, lineno, "bad element count");
            for (long i = 0; i < count; ++i) {
                if (!next_line()) parse_error(path, lineno, "truncated element list");
                std::istringstream ls(line);
                long id = 0;
                int type = 0, ntags = 0;
                ls >> id >> type >> ntags;
                if (!ls) parse_error(path, lineno, "bad element line");
                std::vector<int> tags(ntags);
                for (int k = 0; k < ntags; ++k) ls >> tags[k];
                if (type != 2) continue;  // only 3-node triangles carry fields
                long n0 = 0, n1 = 0, n2 = 0;
                ls >> n0 >> n1 >> n2;
                if (!ls) parse_error(path, lineno, "bad triangle connectivity");
                const int phys = ntags > 0 ? tags[0] : 0;
                if (phys != 1 && phys != 2)
                    parse_error(path, lineno,
                                "triangle physical tag must be 1 (elastic) or 2 (fluid)");
                Triangle tri;
                for (int k = 0; k < 3; ++k) {
                    const long n = (k == 0) ? n0 : (k == 1 ? n1 : n2);
                    auto it = node_index.find(n);
                    if (it == node_index.end())
                        parse_error(path, lineno, "unknown node id " + std::to_string(n));
                    tri.v[k] = it->second;
                }
                tri.tag = (phys == 1) ? Subdomain::Elastic : Subdomain::Fluid;
                triangles.push_back(tri);
            }
            if (!next_line() || line.rfind("$EndElements", 0) != 0)
                parse_error(path, lineno, "missing $EndElements");
            saw_elements = true;
        }
        // Unknown sections ($PhysicalNames etc.) are skipped line by line.
    }

    if (!saw_nodes || !saw_elements)
        parse_error(path, lineno, "file ended before $Nodes/$Elements were complete");
    if (triangles.empty()) parse_error(path, lineno, "no triangles found");

    Mesh mesh = finalize_mesh(std::move(vertices), std::move(triangles));
    mesh.interface_radius = interface_radius;
    mesh.artificial_radius = artificial_radius;
    return mesh;
}

void export_msh(const Mesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("export_msh: cannot open '" + path + "' for writing");
    out.precision(17);
    out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
    out << "$Nodes\n" << mesh.vertices.size() << "\n";
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
        out << (i + 1) << " " << mesh.vertices[i].x << " " << mesh.vertices[i].y << " 0\n";
    out << "$EndNodes\n";
    out << "$Elements\n" << mesh.triangles.size() << "\n";
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        const int phys = (tri.tag == Subdomain::Elastic) ? 1 : 2;
        out << (t + 1) << " 2 2 " << phys << " " << phys << " " << (tri.v[0] + 1) << " "
            << (tri.v[1] + 1) << " " << (tri.v[2] + 1) << "\n";
    }
    out << "$EndElements\n";
}

}  // namespace fsi
