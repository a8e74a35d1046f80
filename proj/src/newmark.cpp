#include "fsi/newmark.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>

namespace fsi {

namespace {

constexpr int kDirectSolveLimit = 50000;

// Element-block LDLT factors of a block-diagonal part of a matrix, following
// the DofMap element ranges.
class BlockFactor {
public:
    BlockFactor(const SparseMatrix& m, const DofMap& dofmap, std::size_t n_elements)
        : dofmap_(&dofmap) {
        factors_.reserve(n_elements);
        for (std::size_t t = 0; t < n_elements; ++t) {
            const int n = dofmap.n_element_dofs(int(t));
            const int off = dofmap.offset(int(t));
            Eigen::MatrixXd block = Eigen::MatrixXd::Zero(n, n);
            for (int r = 0; r < n; ++r)
                for (int k = m.row_ptr()[off + r]; k < m.row_ptr()[off + r + 1]; ++k) {
                    const int c = m.cols()[k] - off;
                    if (c >= 0 && c < n) block(r, c) = m.values()[k];
                }
            Eigen::LDLT<Eigen::MatrixXd> ldlt(block);
            if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
                throw Error("singular element mass block at element " + std::to_string(t));
            factors_.push_back(std::move(ldlt));
        }
    }

    void solve(const Vector& rhs, Vector& x) const {
        x.resize(rhs.size());
        for (std::size_t t = 0; t < factors_.size(); ++t) {
            const int n = dofmap_->n_element_dofs(int(t));
            const int off = dofmap_->offset(int(t));
            Eigen::VectorXd local(n);
            for (int i = 0; i < n; ++i) local(i) = rhs[off + i];
            local = factors_[t].solve(local);
            for (int i = 0; i < n; ++i) x[off + i] = local(i);
        }
    }

private:
    const DofMap* dofmap_;
    std::vector<Eigen::LDLT<Eigen::MatrixXd>> factors_;
};

Eigen::SparseMatrix<double> to_eigen(const SparseMatrix& m) {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(m.nnz());
    for (int r = 0; r < m.dim(); ++r)
        for (int k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k)
            t.emplace_back(r, m.cols()[k], m.values()[k]);
    Eigen::SparseMatrix<double> e(m.dim(), m.dim());
    e.setFromTriplets(t.begin(), t.end());
    return e;
}

}  // namespace

struct NewmarkIntegrator::Impl {
    const SemidiscreteSystem* system = nullptr;
    const DofMap* dofmap = nullptr;
    std::size_t n_elements = 0;

    SparseMatrix mass;  // as stepped: the system mass, or its row-sum lumping
    SparseMatrix effective;
    std::unique_ptr<BlockFactor> mass_blocks;       // for initial acceleration
    std::unique_ptr<BlockFactor> effective_blocks;  // preconditioner
    std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu;
    Eigen::SparseMatrix<double> effective_eigen;

    Vector pred_u, pred_v, rhs, scratch;

    void solve_effective(const Vector& b, Vector& x, StepInfo& info) const {
        const int n = int(b.size());
        if (lu) {
            Eigen::Map<const Eigen::VectorXd> bm(b.data(), n);
            Eigen::VectorXd xm = lu->solve(bm);
            x.assign(xm.data(), xm.data() + n);
            info.iterations = 0;
        } else {
            bicgstab(b, x, info);
        }
        Vector r = b;
        effective.multiply_add(-1.0, x, r);
        const double nb = norm2(b);
        info.residual = nb > 0.0 ? norm2(r) / nb : norm2(r);
        if (info.residual > 1e-10)
            throw Error("newmark_step: linear solve stalled, residual " +
                        std::to_string(info.residual));
    }

    // Preconditioned BiCGSTAB; the effective matrix deviates from its element
    // block diagonal only on interface/absorbing-coupled DOFs, so the block
    // preconditioner leaves a small perturbation.
    void bicgstab(const Vector& b, Vector& x, StepInfo& info) const {
        const std::size_t n = b.size();
        const double nb = norm2(b);
        x.assign(n, 0.0);
        if (nb == 0.0) {
            info.iterations = 0;
            return;
        }
        const double tol = 1e-12 * nb;  // margin below the 1e-10 contract
        const int max_iter = int(10.0 * std::sqrt(double(n))) + 10;

        Vector r = b, rhat = b, p(n, 0.0), v(n, 0.0), s(n), t(n), z(n), y(n);
        double rho = 1.0, alpha = 1.0, omega = 1.0;
        for (int it = 1; it <= max_iter; ++it) {
            const double rho_new = dot(rhat, r);
            const double beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
            effective_blocks->solve(p, y);
            effective.multiply(y, v);
            alpha = rho / dot(rhat, v);
            for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
            if (norm2(s) < tol) {
                axpy(alpha, y, x);
                info.iterations = it;
                return;
            }
            effective_blocks->solve(s, z);
            effective.multiply(z, t);
            omega = dot(t, s) / dot(t, t);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += alpha * y[i] + omega * z[i];
                r[i] = s[i] - omega * t[i];
            }
            if (norm2(r) < tol) {
                info.iterations = it;
                return;
            }
        }
        info.iterations = max_iter;
        Vector res = b;
        effective.multiply_add(-1.0, x, res);
        throw Error("newmark_step: iterative solver did not converge, residual " +
                    std::to_string(norm2(res) / nb));
    }
};

NewmarkIntegrator::NewmarkIntegrator(const SemidiscreteSystem& system, const DofMap& dofmap,
                                     const NewmarkParams& params)
    : impl_(std::make_unique<Impl>()), params_(params) {
    params_.validate();
    impl_->system = &system;
    impl_->dofmap = &dofmap;
    impl_->n_elements = dofmap.n_elements();

    if (params_.lumped_mass) {
        std::vector<Triplet> diag;
        diag.reserve(system.mass.dim());
        for (int r = 0; r < system.mass.dim(); ++r) {
            double sum = 0.0;
            for (int k = system.mass.row_ptr()[r]; k < system.mass.row_ptr()[r + 1]; ++k)
                sum += system.mass.values()[k];
            diag.push_back({r, r, sum});
        }
        impl_->mass = SparseMatrix::from_triplets(system.mass.dim(), std::move(diag));
    } else {
        impl_->mass = system.mass;
    }

    const double l = params_.step;
    impl_->effective = impl_->mass.add_scaled(system.damping, params_.gamma * l);
    if (params_.delta != 0.0)
        impl_->effective = impl_->effective.add_scaled(system.stiffness, params_.delta * l * l);

    impl_->mass_blocks = std::make_unique<BlockFactor>(impl_->mass, dofmap, impl_->n_elements);
    if (system.mass.dim() <= kDirectSolveLimit) {
        impl_->effective_eigen = to_eigen(impl_->effective);
        impl_->lu = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
        impl_->lu->compute(impl_->effective_eigen);
        if (impl_->lu->info() != Eigen::Success)
            throw Error("NewmarkIntegrator: effective matrix factorization failed");
    } else {
        impl_->effective_blocks =
            std::make_unique<BlockFactor>(impl_->effective, dofmap, impl_->n_elements);
    }
}

NewmarkIntegrator::~NewmarkIntegrator() = default;

State NewmarkIntegrator::initial_state(const Vector& f0, const Vector& u0,
                                       const Vector& v0) const {
    State s;
    s.u = u0;
    s.v = v0;
    s.t = 0.0;
    Vector rhs = f0;
    impl_->system->damping.multiply_add(-1.0, v0, rhs);
    impl_->system->stiffness.multiply_add(-1.0, u0, rhs);
    impl_->mass_blocks->solve(rhs, s.w);
    return s;
}

StepInfo NewmarkIntegrator::step(State& state, const Vector& f_next) {
    const double l = params_.step;
    const double gamma = params_.gamma, delta = params_.delta;
    auto& im = *impl_;

    const std::size_t n = state.u.size();
    im.pred_u = state.u;
    for (std::size_t i = 0; i < n; ++i)
        im.pred_u[i] += l * state.v[i] + 0.5 * (1.0 - 2.0 * delta) * l * l * state.w[i];
    im.pred_v = state.v;
    axpy((1.0 - gamma) * l, state.w, im.pred_v);

    im.rhs = f_next;
    im.system->damping.multiply_add(-1.0, im.pred_v, im.rhs);
    im.system->stiffness.multiply_add(-1.0, im.pred_u, im.rhs);

    StepInfo info;
    im.solve_effective(im.rhs, state.w, info);

    state.u = im.pred_u;
    if (delta != 0.0) axpy(delta * l * l, state.w, state.u);
    state.v = im.pred_v;
    axpy(gamma * l, state.w, state.v);
    state.t += l;
    return info;
}

double estimate_spectral_bound(const SemidiscreteSystem& system, const DofMap& dofmap,
                               bool lumped_mass) {
    const int n = system.mass.dim();
    SparseMatrix mass = system.mass;
    if (lumped_mass) {
        std::vector<Triplet> diag;
        for (int r = 0; r < n; ++r) {
            double sum = 0.0;
            for (int k = mass.row_ptr()[r]; k < mass.row_ptr()[r + 1]; ++k)
                sum += mass.values()[k];
            diag.push_back({r, r, sum});
        }
        mass = SparseMatrix::from_triplets(n, std::move(diag));
    }
    BlockFactor blocks(mass, dofmap, dofmap.n_elements());
    Vector x(n), ax(n), y(n);
    for (int i = 0; i < n; ++i) x[i] = std::sin(0.31 * i + 0.5);
    double lam = 0.0;
    for (int it = 0; it < 80; ++it) {
        const double nx = norm2(x);
        for (double& v : x) v /= nx;
        system.stiffness.multiply(x, ax);
        blocks.solve(ax, y);
        lam = dot(x, y);
        x = y;
    }
    return std::abs(lam);
}

RunResult run_simulation(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap,
                         const SemidiscreteSystem& system, const IncidentWave& wave,
                         NewmarkParams params, const Observer& observer, const Vector* u0,
                         const Vector* v0) {
    params.validate();
    if (params.cfl_guard && params.delta == 0.0) {
        const double lam = estimate_spectral_bound(system, dofmap, params.lumped_mass);
        const double stable = 0.95 * 2.0 / std::sqrt(std::max(lam, 1e-300));
        if (params.step > stable) params.step = stable;
    }
    const double T = params.final_time;
    int nsteps = int(std::ceil(T / params.step - 1e-9));
    nsteps = std::max(nsteps, 1);
    params.step = T / nsteps;

    LoadAssembler loads(mesh, basis, dofmap);
    NewmarkIntegrator integrator(system, dofmap, params);

    const Vector zeros(dofmap.size(), 0.0);
    Vector f = loads.assemble(wave, 0.0);
    State state = integrator.initial_state(f, u0 ? *u0 : zeros, v0 ? *v0 : zeros);
    if (observer) observer(state, StepInfo{0, 0, 0.0});

    for (int n = 1; n <= nsteps; ++n) {
        loads.assemble(wave, n * params.step, f);
        StepInfo info = integrator.step(state, f);
        info.step = n;
        if (!all_finite(state.u) || !all_finite(state.v) || !all_finite(state.w))
            throw Error("run_simulation: NaN/Inf detected at step " + std::to_string(n));
        if (observer) observer(state, info);
    }
    return {std::move(state), nsteps, params.step};
}

}  // namespace fsi
