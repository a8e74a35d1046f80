#include "fsi/diagnostics.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>

namespace fsi {

namespace {

ElementGeometry geometry_of(const Mesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    return {mesh.vertices[tri.v[0]], mesh.vertices[tri.v[1]], mesh.vertices[tri.v[2]]};
}

double strain_energy_density(const std::array<double, 4>& g, const PhysicalParams& p) {
    const double div = g[0] + g[3];
    const double e12 = 0.5 * (g[1] + g[2]);
    const double eps_frob_sq = g[0] * g[0] + g[3] * g[3] + 2.0 * e12 * e12;
    return (p.lambda / p.rho1) * div * div + (2.0 * p.mu / p.rho1) * eps_frob_sq;
}

struct EdgeSideRef {
    int element;
    int local_edge;
    int orientation;
};

EdgeSideRef resolve(const Mesh& mesh, int edge_index, int side) {
    const Edge& e = mesh.edges[edge_index];
    const int t = e.elem[side];
    for (int l = 0; l < 3; ++l)
        if (mesh.tri_edges[t][l] == edge_index) {
            const int a = mesh.triangles[t].v[l];
            return {t, l, a == e.v0 ? 0 : 1};
        }
    throw Error("diagnostics: inconsistent edge adjacency");
}

// Reference point of element `side.element` at canonical edge parameter s.
Vec2 side_ref_point(const EdgeSideRef& side, double s) {
    const double t = side.orientation == 0 ? s : 1.0 - s;
    return ReferenceBasis::edge_point(side.local_edge, t);
}

}  // namespace

double DgNormParts::total() const { return std::sqrt(elastic_sq + fluid_sq); }
double L2NormParts::total() const { return std::sqrt(elastic_sq + fluid_sq); }

DgNormParts dg_energy_norm_parts(const DiscreteField& field, const PhysicalParams& params) {
    const Mesh& mesh = *field.mesh;
    const ReferenceBasis& basis = *field.basis;
    const auto& vrule = basis.volume_rule();
    const auto& erule = basis.edge_rule();
    DgNormParts parts;

    for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
        const double detj = std::abs(geometry_of(mesh, int(t)).jacobian_det());
        if (mesh.triangles[t].tag == Subdomain::Elastic) {
            for (std::size_t q = 0; q < vrule.size(); ++q) {
                const auto g = field.elastic_gradient(int(t), vrule.points[q]);
                parts.elastic_sq += vrule.weights[q] * detj * strain_energy_density(g, params);
            }
        } else {
            for (std::size_t q = 0; q < vrule.size(); ++q) {
                const Vec2 g = field.fluid_gradient(int(t), vrule.points[q]);
                parts.fluid_sq += vrule.weights[q] * detj * g.dot(g);
            }
        }
    }

    // Jump sums over interior edges only: one-sided interface traces would
    // put rigid motions and constant potentials outside the kernel.
    const double jump_weight = 1.0 / mesh.mesh_size;
    for (std::size_t ei = 0; ei < mesh.edges.size(); ++ei) {
        const Edge& e = mesh.edges[ei];
        const Vec2 n = e.normal;
        if (e.kind == EdgeKind::InteriorElastic) {
            const auto s0 = resolve(mesh, int(ei), 0), s1 = resolve(mesh, int(ei), 1);
            for (std::size_t q = 0; q < erule.size(); ++q) {
                const double s = erule.points[q].x;
                const Vec2 u0 = field.elastic_value(s0.element, side_ref_point(s0, s));
                const Vec2 u1 = field.elastic_value(s1.element, side_ref_point(s1, s));
                const double jump = (u0 - u1).dot(n);
                parts.elastic_sq += jump_weight * erule.weights[q] * e.length * jump * jump;
            }
        } else if (e.kind == EdgeKind::InteriorFluid) {
            const auto s0 = resolve(mesh, int(ei), 0), s1 = resolve(mesh, int(ei), 1);
            for (std::size_t q = 0; q < erule.size(); ++q) {
                const double s = erule.points[q].x;
                const double jump = field.fluid_value(s0.element, side_ref_point(s0, s)) -
                                    field.fluid_value(s1.element, side_ref_point(s1, s));
                parts.fluid_sq += jump_weight * erule.weights[q] * e.length * jump * jump;
            }
        }
    }
    return parts;
}

double dg_energy_norm(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap,
                      const Vector& coeffs, const PhysicalParams& params) {
    return dg_energy_norm_parts({&mesh, &basis, &dofmap, &coeffs}, params).total();
}

L2NormParts l2_norm_parts(const DiscreteField& field) {
    const Mesh& mesh = *field.mesh;
    const auto& vrule = field.basis->volume_rule();
    L2NormParts parts;
    for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
        const double detj = std::abs(geometry_of(mesh, int(t)).jacobian_det());
        if (mesh.triangles[t].tag == Subdomain::Elastic) {
            for (std::size_t q = 0; q < vrule.size(); ++q) {
                const Vec2 u = field.elastic_value(int(t), vrule.points[q]);
                parts.elastic_sq += vrule.weights[q] * detj * u.dot(u);
            }
        } else {
            for (std::size_t q = 0; q < vrule.size(); ++q) {
                const double p = field.fluid_value(int(t), vrule.points[q]);
                parts.fluid_sq += vrule.weights[q] * detj * p * p;
            }
        }
    }
    return parts;
}

double l2_norm(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap,
               const Vector& coeffs) {
    return l2_norm_parts({&mesh, &basis, &dofmap, &coeffs}).total();
}

double energy_monitor(const State& state, const Mesh& mesh, const ReferenceBasis& basis,
                      const DofMap& dofmap, const PhysicalParams& params, EnergyKind kind) {
    const Vector& rate = (kind == EnergyKind::E) ? state.v : state.w;
    const Vector& field = (kind == EnergyKind::E) ? state.u : state.v;
    const DiscreteField rate_f{&mesh, &basis, &dofmap, &rate};
    const DiscreteField field_f{&mesh, &basis, &dofmap, &field};
    const auto& vrule = basis.volume_rule();

    double energy = 0.0;
    for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
        const double detj = std::abs(geometry_of(mesh, int(t)).jacobian_det());
        if (mesh.triangles[t].tag == Subdomain::Elastic) {
            for (std::size_t q = 0; q < vrule.size(); ++q) {
                const Vec2 ut = rate_f.elastic_value(int(t), vrule.points[q]);
                const auto g = field_f.elastic_gradient(int(t), vrule.points[q]);
                energy += vrule.weights[q] * detj *
                          (params.rho2 / params.rho1 * ut.dot(ut) +
                           strain_energy_density(g, params));
            }
        } else {
            for (std::size_t q = 0; q < vrule.size(); ++q) {
                const double pt = rate_f.fluid_value(int(t), vrule.points[q]);
                const Vec2 g = field_f.fluid_gradient(int(t), vrule.points[q]);
                energy += vrule.weights[q] * detj *
                          (pt * pt / (params.c * params.c) + g.dot(g));
            }
        }
    }
    return energy;
}

namespace {

// One-sided evaluation of the reference field at a physical point lying on a
// coarse edge: locate with a nudge into the requested side, then evaluate the
// located polynomial at the true point.
struct RefEvaluator {
    const DiscreteField* ref;

    double fluid(const Vec2& x, const Vec2& nudge) const {
        const auto loc = locate_point_nearest(*ref->mesh, x + nudge, Subdomain::Fluid);
        return ref->fluid_value(loc.element, true_ref(loc, x));
    }
    Vec2 elastic(const Vec2& x, const Vec2& nudge) const {
        const auto loc = locate_point_nearest(*ref->mesh, x + nudge, Subdomain::Elastic);
        return ref->elastic_value(loc.element, true_ref(loc, x));
    }

    Vec2 true_ref(const PointLocation& loc, const Vec2& x) const {
        const auto b = geometry_of(*ref->mesh, loc.element).barycentric(x);
        return {b[1], b[2]};
    }
};

}  // namespace

namespace {

// Ancestor chain from the reference mesh up to (and structurally matching)
// the coarse mesh. Empty when the meshes are not nested.
std::vector<const Mesh*> ancestor_chain(const Mesh& reference, const Mesh& coarse) {
    std::vector<const Mesh*> chain{&reference};
    const Mesh* m = &reference;
    while (m->parent) {
        m = m->parent.get();
        chain.push_back(m);
        if (m->n_triangles() == coarse.n_triangles() &&
            m->vertices.size() == coarse.vertices.size()) {
            // refine_uniform stores copies, so compare structurally
            bool same = !coarse.vertices.empty();
            for (std::size_t v = 0; v < std::min<std::size_t>(8, coarse.vertices.size()); ++v)
                same = same && (m->vertices[v].x == coarse.vertices[v].x) &&
                       (m->vertices[v].y == coarse.vertices[v].y);
            if (same) return chain;
        }
    }
    return {};
}

}  // namespace

ErrorRecord cross_mesh_error(const DiscreteField& coarse, const DiscreteField& reference,
                             const PhysicalParams& params, ErrorNorm norm) {
    const Mesh& mesh = *coarse.mesh;
    const Mesh& rmesh = *reference.mesh;
    const auto& erule = coarse.basis->edge_rule();
    const bool want_energy = norm != ErrorNorm::L2;
    const bool want_l2 = norm != ErrorNorm::Energy;

    ErrorRecord rec;
    rec.h = mesh.mesh_size;
    RefEvaluator ref{&reference};

    const std::vector<const Mesh*> chain = ancestor_chain(rmesh, mesh);
    const int level_gap = chain.empty() ? 0 : int(chain.size()) - 1;

    double energy_el = 0.0, energy_fl = 0.0, l2_el = 0.0, l2_fl = 0.0;

    if (!chain.empty()) {
        // Nested path: integrate over the reference elements, where both
        // fields are polynomials, evaluating the coarse field through the
        // ancestor chain.
        const auto& vrule = reference.basis->volume_rule();
        for (std::size_t t = 0; t < rmesh.n_triangles(); ++t) {
            int ancestor = int(t);
            for (int lev = 0; lev < level_gap; ++lev)
                ancestor = chain[lev]->parent_triangle[ancestor];
            const ElementGeometry rgeom = geometry_of(rmesh, int(t));
            const ElementGeometry cgeom = geometry_of(mesh, ancestor);
            const double detj = std::abs(rgeom.jacobian_det());
            const bool elastic = rmesh.triangles[t].tag == Subdomain::Elastic;
            for (std::size_t q = 0; q < vrule.size(); ++q) {
                const Vec2 x = rgeom.map(vrule.points[q]);
                const auto b = cgeom.barycentric(x);
                const Vec2 cref{b[1], b[2]};
                const double w = vrule.weights[q] * detj;
                if (elastic) {
                    if (want_l2) {
                        const Vec2 d = coarse.elastic_value(ancestor, cref) -
                                       reference.elastic_value(int(t), vrule.points[q]);
                        l2_el += w * d.dot(d);
                    }
                    if (want_energy) {
                        auto gc = coarse.elastic_gradient(ancestor, cref);
                        const auto gr = reference.elastic_gradient(int(t), vrule.points[q]);
                        for (int k = 0; k < 4; ++k) gc[k] -= gr[k];
                        energy_el += w * strain_energy_density(gc, params);
                    }
                } else {
                    if (want_l2) {
                        const double d = coarse.fluid_value(ancestor, cref) -
                                         reference.fluid_value(int(t), vrule.points[q]);
                        l2_fl += w * d * d;
                    }
                    if (want_energy) {
                        const Vec2 d = coarse.fluid_gradient(ancestor, cref) -
                                       reference.fluid_gradient(int(t), vrule.points[q]);
                        energy_fl += w * d.dot(d);
                    }
                }
            }
        }
    } else {
        // Generic path via point location on the reference mesh.
        const auto& vrule = coarse.basis->volume_rule();
        for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
            const ElementGeometry geom = geometry_of(mesh, int(t));
            const double detj = std::abs(geom.jacobian_det());
            const bool elastic = mesh.triangles[t].tag == Subdomain::Elastic;
            for (std::size_t q = 0; q < vrule.size(); ++q) {
                const Vec2 x = geom.map(vrule.points[q]);
                const double w = vrule.weights[q] * detj;
                if (elastic) {
                    const auto loc = locate_point_nearest(rmesh, x, Subdomain::Elastic);
                    const Vec2 ref_pt = ref.true_ref(loc, x);
                    if (want_l2) {
                        const Vec2 d = coarse.elastic_value(int(t), vrule.points[q]) -
                                       reference.elastic_value(loc.element, ref_pt);
                        l2_el += w * d.dot(d);
                    }
                    if (want_energy) {
                        auto gc = coarse.elastic_gradient(int(t), vrule.points[q]);
                        const auto gr = reference.elastic_gradient(loc.element, ref_pt);
                        for (int k = 0; k < 4; ++k) gc[k] -= gr[k];
                        energy_el += w * strain_energy_density(gc, params);
                    }
                } else {
                    const auto loc = locate_point_nearest(rmesh, x, Subdomain::Fluid);
                    const Vec2 ref_pt = ref.true_ref(loc, x);
                    if (want_l2) {
                        const double d = coarse.fluid_value(int(t), vrule.points[q]) -
                                         reference.fluid_value(loc.element, ref_pt);
                        l2_fl += w * d * d;
                    }
                    if (want_energy) {
                        const Vec2 d = coarse.fluid_gradient(int(t), vrule.points[q]) -
                                       reference.fluid_gradient(loc.element, ref_pt);
                        energy_fl += w * d.dot(d);
                    }
                }
            }
        }
    }

    if (want_energy) {
        // Interior-edge jump terms of the difference; each coarse edge is
        // split into the reference mesh's segments so the traces stay
        // polynomial per quadrature panel.
        const double jump_weight = 1.0 / mesh.mesh_size;
        const int segments = std::min(1 << std::min(level_gap, 6), 64);
        for (std::size_t ei = 0; ei < mesh.edges.size(); ++ei) {
            const Edge& e = mesh.edges[ei];
            if (e.kind != EdgeKind::InteriorElastic && e.kind != EdgeKind::InteriorFluid)
                continue;
            const Vec2 n = e.normal;
            const Vec2 p0 = mesh.vertices[e.v0], p1 = mesh.vertices[e.v1];
            const double nudge_len = 1e-7 * e.length;
            const Vec2 into0 = n * -nudge_len, into1 = n * nudge_len;
            const auto s0 = resolve(mesh, int(ei), 0), s1 = resolve(mesh, int(ei), 1);

            for (int seg = 0; seg < segments; ++seg) {
                for (std::size_t q = 0; q < erule.size(); ++q) {
                    const double s = (seg + erule.points[q].x) / segments;
                    const Vec2 x = p0 + (p1 - p0) * s;
                    const double w = jump_weight * erule.weights[q] * e.length / segments;
                    if (e.kind == EdgeKind::InteriorElastic) {
                        const Vec2 d0 = coarse.elastic_value(s0.element, side_ref_point(s0, s)) -
                                        ref.elastic(x, into0);
                        const Vec2 d1 = coarse.elastic_value(s1.element, side_ref_point(s1, s)) -
                                        ref.elastic(x, into1);
                        const double jump = (d0 - d1).dot(n);
                        energy_el += w * jump * jump;
                    } else {
                        const double d0 = coarse.fluid_value(s0.element, side_ref_point(s0, s)) -
                                          ref.fluid(x, into0);
                        const double d1 = coarse.fluid_value(s1.element, side_ref_point(s1, s)) -
                                          ref.fluid(x, into1);
                        energy_fl += w * (d0 - d1) * (d0 - d1);
                    }
                }
            }
        }
    }

    rec.energy_elastic = std::sqrt(energy_el);
    rec.energy_fluid = std::sqrt(energy_fl);
    rec.l2_elastic = std::sqrt(l2_el);
    rec.l2_fluid = std::sqrt(l2_fl);
    rec.energy_error = std::sqrt(energy_el + energy_fl);
    rec.l2_error = std::sqrt(l2_el + l2_fl);
    return rec;
}

void compute_orders(ConvergenceReport& report) {
    report.energy_orders.clear();
    report.l2_orders.clear();
    for (std::size_t i = 1; i < report.records.size(); ++i) {
        const ErrorRecord& a = report.records[i - 1];
        const ErrorRecord& b = report.records[i];
        if (!(a.h > b.h)) throw Error("compute_orders: mesh sizes must decrease");
        const double lh = std::log(a.h / b.h);
        report.energy_orders.push_back(std::log(a.energy_error / b.energy_error) / lh);
        report.l2_orders.push_back(std::log(a.l2_error / b.l2_error) / lh);
    }
}

ConvergenceReport convergence_study(const Mesh& base_mesh, int levels, const StudySetup& setup) {
    if (levels < 3) throw Error("convergence_study: need at least 3 levels");

    std::vector<Mesh> meshes;
    meshes.push_back(base_mesh);
    for (int l = 1; l <= levels; ++l) meshes.push_back(refine_uniform(meshes.back()));
    // meshes[levels] is the reference level.

    const ReferenceBasis basis(setup.degree);
    std::vector<Vector> solutions(levels + 1);
    std::vector<DofMap> dofmaps;
    dofmaps.reserve(levels + 1);

    for (int l = 0; l <= levels; ++l) {
        const Mesh& mesh = meshes[l];
        dofmaps.emplace_back(mesh, basis.n_local());
        const DofMap& dofmap = dofmaps.back();

        SemidiscreteSystem system;
        system.mass = assemble_mass(mesh, basis, dofmap, setup.physics);
        system.stiffness =
            assemble_stiffness(mesh, basis, dofmap, setup.physics, setup.penalty);
        system.damping = assemble_damping(mesh, basis, dofmap);

        NewmarkParams np;
        np.gamma = setup.gamma;
        np.delta = setup.delta;
        np.step = setup.fixed_step > 0.0 ? setup.fixed_step : mesh.mesh_size / setup.step_ratio;
        np.final_time = setup.final_time;
        np.lumped_mass = setup.lumped_mass;
        np.cfl_guard = setup.cfl_guard;

        if (setup.verbose)
            std::cout << "level " << l << ": h = " << mesh.mesh_size << ", "
                      << mesh.n_triangles() << " elements, " << dofmap.size() << " dofs, l = "
                      << np.step << std::endl;

        RunResult result = run_simulation(mesh, basis, dofmap, system, setup.wave, np);
        if (setup.verbose && result.step_used < np.step * 0.999)
            std::cout << "  (CFL guard: step reduced to " << result.step_used << ")"
                      << std::endl;
        solutions[l] = std::move(result.state.u);
    }

    ConvergenceReport report;
    const DiscreteField ref{&meshes[levels], &basis, &dofmaps[levels], &solutions[levels]};
    for (int l = 0; l < levels; ++l) {
        const DiscreteField sol{&meshes[l], &basis, &dofmaps[l], &solutions[l]};
        report.records.push_back(cross_mesh_error(sol, ref, setup.physics));
        if (setup.verbose) {
            const ErrorRecord& r = report.records.back();
            std::cout << "  level " << l << ": energy " << r.energy_error << ", l2 "
                      << r.l2_error << std::endl;
        }
    }
    compute_orders(report);
    return report;
}

void write_convergence_csv(const ConvergenceReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("write_convergence_csv: cannot open '" + path + "'");
    out << "h,energy_error,energy_order,l2_error,l2_order\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        const ErrorRecord& r = report.records[i];
        out << r.h << "," << r.energy_error << ",";
        if (i > 0) out << report.energy_orders[i - 1];
        out << "," << r.l2_error << ",";
        if (i > 0) out << report.l2_orders[i - 1];
        out << "\n";
    }
}

void print_convergence_table(const ConvergenceReport& report, std::ostream& out) {
    out << std::setw(12) << "h" << std::setw(16) << "energy" << std::setw(10) << "order"
        << std::setw(16) << "L2" << std::setw(10) << "order" << "\n";
    out << std::setprecision(4);
    for (std::size_t i = 0; i < report.records.size(); ++i) {
        const ErrorRecord& r = report.records[i];
        out << std::setw(12) << r.h << std::setw(16) << r.energy_error;
        if (i > 0)
            out << std::setw(10) << report.energy_orders[i - 1];
        else
            out << std::setw(10) << "-";
        out << std::setw(16) << r.l2_error;
        if (i > 0)
            out << std::setw(10) << report.l2_orders[i - 1];
        else
            out << std::setw(10) << "-";
        out << "\n";
    }
}

}  // namespace fsi
