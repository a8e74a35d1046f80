#include "fsi/assembly.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "fsi/threading.hpp"

namespace fsi {

namespace {

ElementGeometry geometry_of(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    return {mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]], mesh.vertices[tri.v[2]]};
}

double nc_of(const Vec2& n, int c) { return c == 0 ? n.x : n.y; }

struct EdgeSide {
    int element;
    int local_edge;
    int orientation;
};

EdgeSide resolve_side(const Mesh& mesh, int edge_index, int side) {
    const Edge& e = mesh.edges[edge_index];
    const int t = e.elem[side];
    const auto& tri = mesh.triangles[t];
    for (int l = 0; l < 3; ++l) {
        if (mesh.tri_edges[t][l] == edge_index) {
            const int a = tri.v[l];
            return {t, l, a == e.v0 ? 0 : 1};
        }
    }
    throw Error("assembly: edge/element adjacency is inconsistent");
}

// Physical traces of all basis functions of one edge side at the edge
// quadrature points, in the canonical edge parameterization.
struct SideTrace {
    std::vector<std::vector<double>> value;  // [q][i]
    std::vector<std::vector<Vec2>> grad;     // [q][i]
};

SideTrace trace_side(const Mesh& mesh, const ReferenceBasis& basis, const EdgeSide& side) {
    const ElementGeometry geom = geometry_of(mesh, side.element);
    const std::size_t nq = basis.edge_rule().size();
    SideTrace tr;
    tr.value.resize(nq);
    tr.grad.resize(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        tr.value[q].resize(basis.n_local());
        tr.grad[q].resize(basis.n_local());
        for (int i = 0; i < basis.n_local(); ++i) {
            tr.value[q][i] = basis.edge_value(side.local_edge, side.orientation, q, i);
            tr.grad[q][i] =
                map_gradient(geom, basis.edge_grad(side.local_edge, side.orientation, q, i));
        }
    }
    return tr;
}

}  // namespace

SparseMatrix assemble_mass(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap,
                           const PhysicalParams& params) {
    params.validate();
    const auto& rule = basis.volume_rule();
    const int nl = basis.n_local();

    std::vector<std::vector<Triplet>> buffers(thread_count());
    parallel_chunks(mesh.n_triangles(), [&](std::size_t begin, std::size_t end, int worker) {
        auto& out = buffers[worker];
        for (std::size_t t = begin; t < end; ++t) {
            const double detj = std::abs(geometry_of(mesh, int(t)).jacobian_det());
            const bool elastic = mesh.triangles[t].tag == Subdomain::Elastic;
            const double coeff =
                elastic ? params.rho2 / params.rho1 : 1.0 / (params.c * params.c);
            for (int i = 0; i < nl; ++i) {
                for (int j = 0; j < nl; ++j) {
                    double v = 0.0;
                    for (std::size_t q = 0; q < rule.size(); ++q)
                        v += rule.weights[q] * basis.value(q, i) * basis.value(q, j);
                    v *= coeff * detj;
                    if (elastic) {
                        for (int c = 0; c < 2; ++c)
                            out.push_back({dofmap.elastic_dof(int(t), c, i),
                                           dofmap.elastic_dof(int(t), c, j), v});
                    } else {
                        out.push_back(
                            {dofmap.fluid_dof(int(t), i), dofmap.fluid_dof(int(t), j), v});
                    }
                }
            }
        }
    });

    std::vector<Triplet> triplets;
    for (auto& b : buffers) triplets.insert(triplets.end(), b.begin(), b.end());
    return SparseMatrix::from_triplets(dofmap.size(), std::move(triplets));
}

SparseMatrix assemble_stiffness(const Mesh& mesh, const ReferenceBasis& basis,
                                const DofMap& dofmap, const PhysicalParams& params,
                                const PenaltyParams& penalty, StiffnessOptions opts) {
    params.validate();
    penalty.validate();
    const auto& vrule = basis.volume_rule();
    const auto& erule = basis.edge_rule();
    const int nl = basis.n_local();
    const double la = params.lambda / params.rho1;
    const double mu2 = 2.0 * params.mu / params.rho1;

    std::vector<std::vector<Triplet>> buffers(thread_count());

    if (opts.volume) {
        parallel_chunks(mesh.n_triangles(), [&](std::size_t begin, std::size_t end, int worker) {
            auto& out = buffers[worker];
            std::vector<Vec2> g(nl);
            for (std::size_t t = begin; t < end; ++t) {
                const ElementGeometry geom = geometry_of(mesh, int(t));
                const double detj = std::abs(geom.jacobian_det());
                const bool elastic = mesh.triangles[t].tag == Subdomain::Elastic;
                if (elastic) {
                    std::vector<double> acc(4 * nl * nl, 0.0);
                    for (std::size_t q = 0; q < vrule.size(); ++q) {
                        const double w = vrule.weights[q] * detj;
                        for (int i = 0; i < nl; ++i) g[i] = map_gradient(geom, basis.grad(q, i));
                        for (int i = 0; i < nl; ++i) {
                            const double gi[2] = {g[i].x, g[i].y};
                            for (int j = 0; j < nl; ++j) {
                                const double gj[2] = {g[j].x, g[j].y};
                                const double gg = g[i].dot(g[j]);
                                for (int c = 0; c < 2; ++c)
                                    for (int d = 0; d < 2; ++d) {
                                        const double eps =
                                            0.5 * ((c == d ? gg : 0.0) + gi[d] * gj[c]);
                                        acc[((c * 2 + d) * nl + i) * nl + j] +=
                                            w * (la * gi[c] * gj[d] + mu2 * eps);
                                    }
                            }
                        }
                    }
                    for (int c = 0; c < 2; ++c)
                        for (int d = 0; d < 2; ++d)
                            for (int i = 0; i < nl; ++i)
                                for (int j = 0; j < nl; ++j)
                                    out.push_back({dofmap.elastic_dof(int(t), c, i),
                                                   dofmap.elastic_dof(int(t), d, j),
                                                   acc[((c * 2 + d) * nl + i) * nl + j]});
                } else {
                    std::vector<double> acc(nl * nl, 0.0);
                    for (std::size_t q = 0; q < vrule.size(); ++q) {
                        const double w = vrule.weights[q] * detj;
                        for (int i = 0; i < nl; ++i) g[i] = map_gradient(geom, basis.grad(q, i));
                        for (int i = 0; i < nl; ++i)
                            for (int j = 0; j < nl; ++j) acc[i * nl + j] += w * g[i].dot(g[j]);
                    }
                    for (int i = 0; i < nl; ++i)
                        for (int j = 0; j < nl; ++j)
                            out.push_back({dofmap.fluid_dof(int(t), i),
                                           dofmap.fluid_dof(int(t), j), acc[i * nl + j]});
                }
            }
        });
    }

    if (opts.flux || opts.penalty) {
        parallel_chunks(mesh.edges.size(), [&](std::size_t begin, std::size_t end, int worker) {
            auto& out = buffers[worker];
            for (std::size_t ei = begin; ei < end; ++ei) {
                const Edge& e = mesh.edges[ei];
                if (e.kind != EdgeKind::InteriorElastic && e.kind != EdgeKind::InteriorFluid)
                    continue;
                const EdgeSide s0 = resolve_side(mesh, int(ei), 0);
                const EdgeSide s1 = resolve_side(mesh, int(ei), 1);
                const SideTrace tr0 = trace_side(mesh, basis, s0);
                const SideTrace tr1 = trace_side(mesh, basis, s1);
                const Vec2 n = e.normal;  // from elem[0] toward elem[1]
                const double pen =
                    opts.penalty ? penalty.alpha / std::pow(e.length, penalty.beta) : 0.0;

                if (e.kind == EdgeKind::InteriorFluid) {
                    // DOFs: [side0 x nl, side1 x nl]
                    const int ndof = 2 * nl;
                    std::vector<double> acc(ndof * ndof, 0.0);
                    std::vector<double> jmp(ndof), flux(ndof);
                    for (std::size_t q = 0; q < erule.size(); ++q) {
                        const double w = erule.weights[q] * e.length;
                        for (int i = 0; i < nl; ++i) {
                            jmp[i] = tr0.value[q][i];
                            jmp[nl + i] = -tr1.value[q][i];
                            flux[i] = 0.5 * tr0.grad[q][i].dot(n);
                            flux[nl + i] = 0.5 * tr1.grad[q][i].dot(n);
                        }
                        for (int a = 0; a < ndof; ++a)
                            for (int b = 0; b < ndof; ++b) {
                                double v = pen * jmp[a] * jmp[b];
                                if (opts.flux) v -= flux[a] * jmp[b] + flux[b] * jmp[a];
                                acc[a * ndof + b] += w * v;
                            }
                    }
                    std::vector<int> dofs(ndof);
                    for (int i = 0; i < nl; ++i) {
                        dofs[i] = dofmap.fluid_dof(s0.element, i);
                        dofs[nl + i] = dofmap.fluid_dof(s1.element, i);
                    }
                    for (int a = 0; a < ndof; ++a)
                        for (int b = 0; b < ndof; ++b)
                            out.push_back({dofs[a], dofs[b], acc[a * ndof + b]});
                } else {
                    // DOFs: [side0 comp0, side0 comp1, side1 comp0, side1 comp1].
                    // Full vector jump [v] = v|0 - v|1 paired with the traction
                    // average {sigma(v) n}/rho1; the normal-only variant leaves
                    // tangential slip uncontrolled and does not converge.
                    const int ndof = 4 * nl;
                    std::vector<double> acc(ndof * ndof, 0.0);
                    std::vector<Vec2> jmp(ndof), flux(ndof);
                    for (std::size_t q = 0; q < erule.size(); ++q) {
                        const double w = erule.weights[q] * e.length;
                        for (int c = 0; c < 2; ++c) {
                            for (int i = 0; i < nl; ++i) {
                                const Vec2 g0 = tr0.grad[q][i], g1 = tr1.grad[q][i];
                                const Vec2 ec = (c == 0) ? Vec2{1, 0} : Vec2{0, 1};
                                jmp[c * nl + i] = ec * tr0.value[q][i];
                                jmp[(2 + c) * nl + i] = ec * -tr1.value[q][i];
                                // (sigma(phi e_c) n)/rho1 =
                                //   lambda/rho1 (d_c phi) n
                                //   + mu/rho1 (grad phi n_c + e_c (grad phi . n))
                                const double g0c = (c == 0) ? g0.x : g0.y;
                                const double g1c = (c == 0) ? g1.x : g1.y;
                                flux[c * nl + i] =
                                    0.5 * (la * g0c * n +
                                           0.5 * mu2 * (g0 * nc_of(n, c) + ec * g0.dot(n)));
                                flux[(2 + c) * nl + i] =
                                    0.5 * (la * g1c * n +
                                           0.5 * mu2 * (g1 * nc_of(n, c) + ec * g1.dot(n)));
                            }
                        }
                        for (int a = 0; a < ndof; ++a)
                            for (int b = 0; b < ndof; ++b) {
                                double v = pen * jmp[a].dot(jmp[b]);
                                if (opts.flux) v -= flux[a].dot(jmp[b]) + flux[b].dot(jmp[a]);
                                acc[a * ndof + b] += w * v;
                            }
                    }
                    std::vector<int> dofs(ndof);
                    for (int c = 0; c < 2; ++c)
                        for (int i = 0; i < nl; ++i) {
                            dofs[c * nl + i] = dofmap.elastic_dof(s0.element, c, i);
                            dofs[(2 + c) * nl + i] = dofmap.elastic_dof(s1.element, c, i);
                        }
                    for (int a = 0; a < ndof; ++a)
                        for (int b = 0; b < ndof; ++b)
                            out.push_back({dofs[a], dofs[b], acc[a * ndof + b]});
                }
            }
        });
    }

    std::vector<Triplet> triplets;
    for (auto& b : buffers) triplets.insert(triplets.end(), b.begin(), b.end());
    return SparseMatrix::from_triplets(dofmap.size(), std::move(triplets));
}

SparseMatrix assemble_damping(const Mesh& mesh, const ReferenceBasis& basis,
                              const DofMap& dofmap) {
    const auto& erule = basis.edge_rule();
    const int nl = basis.n_local();
    std::vector<Triplet> triplets;

    for (std::size_t ei = 0; ei < mesh.edges.size(); ++ei) {
        const Edge& e = mesh.edges[ei];
        if (e.kind == EdgeKind::Interface) {
            const EdgeSide se = resolve_side(mesh, int(ei), 0);  // elastic
            const EdgeSide sf = resolve_side(mesh, int(ei), 1);  // fluid
            const SideTrace tre = trace_side(mesh, basis, se);
            const SideTrace trf = trace_side(mesh, basis, sf);
            const double nc[2] = {e.normal.x, e.normal.y};  // elastic -> fluid
            for (int c = 0; c < 2; ++c)
                for (int i = 0; i < nl; ++i)
                    for (int j = 0; j < nl; ++j) {
                        double v = 0.0;
                        for (std::size_t q = 0; q < erule.size(); ++q)
                            v += erule.weights[q] * e.length * tre.value[q][i] * trf.value[q][j];
                        v *= nc[c];
                        const int row_u = dofmap.elastic_dof(se.element, c, i);
                        const int col_phi = dofmap.fluid_dof(sf.element, j);
                        triplets.push_back({row_u, col_phi, v});
                        triplets.push_back({col_phi, row_u, -v});
                    }
        } else if (e.kind == EdgeKind::Artificial) {
            const EdgeSide sf = resolve_side(mesh, int(ei), 0);
            const SideTrace trf = trace_side(mesh, basis, sf);
            for (int i = 0; i < nl; ++i)
                for (int j = 0; j < nl; ++j) {
                    double v = 0.0;
                    for (std::size_t q = 0; q < erule.size(); ++q)
                        v += erule.weights[q] * e.length * trf.value[q][i] * trf.value[q][j];
                    triplets.push_back({dofmap.fluid_dof(sf.element, i),
                                        dofmap.fluid_dof(sf.element, j), v});
                }
        }
    }
    return SparseMatrix::from_triplets(dofmap.size(), std::move(triplets));
}

SparseMatrix assemble_jump_gram(const Mesh& mesh, const ReferenceBasis& basis,
                                const DofMap& dofmap, double weight) {
    const auto& erule = basis.edge_rule();
    const int nl = basis.n_local();
    std::vector<Triplet> triplets;

    auto accumulate = [&](const std::vector<int>& dofs, const std::vector<std::vector<double>>& jmp,
                          double length) {
        const std::size_t n = dofs.size();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                double v = 0.0;
                for (std::size_t q = 0; q < erule.size(); ++q)
                    v += erule.weights[q] * length * jmp[q][a] * jmp[q][b];
                triplets.push_back({dofs[a], dofs[b], weight * v});
            }
    };

    for (std::size_t ei = 0; ei < mesh.edges.size(); ++ei) {
        const Edge& e = mesh.edges[ei];
        const Vec2 n = e.normal;
        if (e.kind == EdgeKind::InteriorElastic) {
            const EdgeSide s0 = resolve_side(mesh, int(ei), 0);
            const EdgeSide s1 = resolve_side(mesh, int(ei), 1);
            const SideTrace tr0 = trace_side(mesh, basis, s0);
            const SideTrace tr1 = trace_side(mesh, basis, s1);
            std::vector<int> dofs(4 * nl);
            std::vector<std::vector<double>> jmp(erule.size(), std::vector<double>(4 * nl));
            const double nc[2] = {n.x, n.y};
            for (int c = 0; c < 2; ++c)
                for (int i = 0; i < nl; ++i) {
                    dofs[c * nl + i] = dofmap.elastic_dof(s0.element, c, i);
                    dofs[(2 + c) * nl + i] = dofmap.elastic_dof(s1.element, c, i);
                    for (std::size_t q = 0; q < erule.size(); ++q) {
                        jmp[q][c * nl + i] = tr0.value[q][i] * nc[c];
                        jmp[q][(2 + c) * nl + i] = -tr1.value[q][i] * nc[c];
                    }
                }
            accumulate(dofs, jmp, e.length);
        } else if (e.kind == EdgeKind::InteriorFluid) {
            const EdgeSide s0 = resolve_side(mesh, int(ei), 0);
            const EdgeSide s1 = resolve_side(mesh, int(ei), 1);
            const SideTrace tr0 = trace_side(mesh, basis, s0);
            const SideTrace tr1 = trace_side(mesh, basis, s1);
            std::vector<int> dofs(2 * nl);
            std::vector<std::vector<double>> jmp(erule.size(), std::vector<double>(2 * nl));
            for (int i = 0; i < nl; ++i) {
                dofs[i] = dofmap.fluid_dof(s0.element, i);
                dofs[nl + i] = dofmap.fluid_dof(s1.element, i);
                for (std::size_t q = 0; q < erule.size(); ++q) {
                    jmp[q][i] = tr0.value[q][i];
                    jmp[q][nl + i] = -tr1.value[q][i];
                }
            }
            accumulate(dofs, jmp, e.length);
        }
        // Interface edges carry no jump terms: the norm's kernel must contain
        // rigid motions and constant potentials.
    }
    return SparseMatrix::from_triplets(dofmap.size(), std::move(triplets));
}

LoadAssembler::LoadAssembler(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap)
    : size_(dofmap.size()) {
    const auto& erule = basis.edge_rule();
    const int nl = basis.n_local();
    for (std::size_t ei = 0; ei < mesh.edges.size(); ++ei) {
        const Edge& e = mesh.edges[ei];
        if (e.kind != EdgeKind::Interface) continue;
        const EdgeSide se = resolve_side(mesh, int(ei), 0);
        const EdgeSide sf = resolve_side(mesh, int(ei), 1);
        const SideTrace tre = trace_side(mesh, basis, se);
        const SideTrace trf = trace_side(mesh, basis, sf);

        EdgeRecord rec;
        rec.normal = e.normal;
        const Vec2 p0 = mesh.vertices[e.v0], p1 = mesh.vertices[e.v1];
        for (std::size_t q = 0; q < erule.size(); ++q)
            rec.samples.push_back(
                {p0 + (p1 - p0) * erule.points[q].x, erule.weights[q] * e.length});
        rec.elastic_dofs.resize(2 * nl);
        for (int c = 0; c < 2; ++c)
            for (int i = 0; i < nl; ++i)
                rec.elastic_dofs[c * nl + i] = dofmap.elastic_dof(se.element, c, i);
        rec.fluid_dofs.resize(nl);
        for (int j = 0; j < nl; ++j) rec.fluid_dofs[j] = dofmap.fluid_dof(sf.element, j);
        rec.elastic_trace.resize(erule.size());
        rec.fluid_trace.resize(erule.size());
        for (std::size_t q = 0; q < erule.size(); ++q) {
            rec.elastic_trace[q] = tre.value[q];
            rec.fluid_trace[q] = trf.value[q];
        }
        edges_.push_back(std::move(rec));
    }
}

void LoadAssembler::assemble(const IncidentWave& wave, double t, Vector& out) const {
    out.assign(size_, 0.0);
    for (const EdgeRecord& rec : edges_) {
        const int nl = int(rec.fluid_dofs.size());
        for (std::size_t q = 0; q < rec.samples.size(); ++q) {
            const Vec2 x = rec.samples[q].point;
            const double w = rec.samples[q].weight;
            const double dn = wave.gradient(x, t).dot(rec.normal);
            const double vt = wave.dt(x, t);
            for (int j = 0; j < nl; ++j) out[rec.fluid_dofs[j]] += w * dn * rec.fluid_trace[q][j];
            const double ncomp[2] = {rec.normal.x, rec.normal.y};
            for (int c = 0; c < 2; ++c)
                for (int i = 0; i < nl; ++i)
                    out[rec.elastic_dofs[c * nl + i]] -= w * vt * ncomp[c] * rec.elastic_trace[q][i];
        }
    }
}

Vector LoadAssembler::assemble(const IncidentWave& wave, double t) const {
    Vector out;
    assemble(wave, t, out);
    return out;
}

Vector assemble_load(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap,
                     const IncidentWave& wave, double t) {
    return LoadAssembler(mesh, basis, dofmap).assemble(wave, t);
}

CoercivityReport check_coercivity(const SparseMatrix& A) {
    const double scale = A.max_abs();
    if (A.symmetry_residual() > 1e-12 * std::max(scale, 1e-300))
        throw Error("check_coercivity: matrix is not symmetric");

    CoercivityReport rep;
    const int n = A.dim();
    if (n <= 2000) {
        Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
        for (int r = 0; r < n; ++r)
            for (int k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k)
                dense(r, A.cols()[k]) = A.values()[k];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense,
                                                           Eigen::EigenvaluesOnly);
        rep.lambda_min = eig.eigenvalues().minCoeff();
        rep.norm = eig.eigenvalues().cwiseAbs().maxCoeff();
        return rep;
    }

    // Lanczos with full reorthogonalization; extremal Ritz values converge
    // quickly enough for a diagnostic estimate.
    const int m = std::min(n, 200);
    std::vector<Vector> basis_vecs;
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = std::sin(0.7 * i + 1.0);  // deterministic start
    const double nv = norm2(v);
    for (double& x : v) x /= nv;
    basis_vecs.push_back(v);

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    Vector w(n);
    int built = 0;
    for (int j = 0; j < m; ++j) {
        A.multiply(basis_vecs[j], w);
        T(j, j) = dot(w, basis_vecs[j]);
        for (int pass = 0; pass < 2; ++pass)
            for (const Vector& b : basis_vecs) axpy(-dot(w, b), b, w);
        built = j + 1;
        const double beta = norm2(w);
        if (beta < 1e-13 * std::max(scale, 1e-300) || j + 1 == m) break;
        T(j, j + 1) = T(j + 1, j) = beta;
        for (double& x : w) x /= beta;
        basis_vecs.push_back(w);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T.topLeftCorner(built, built),
                                                       Eigen::EigenvaluesOnly);
    rep.lambda_min = eig.eigenvalues().minCoeff();
    rep.norm = eig.eigenvalues().cwiseAbs().maxCoeff();
    return rep;
}

}  // namespace fsi
