#pragma once

#include <functional>
#include <memory>

#include "fsi/assembly.hpp"
#include "fsi/dofmap.hpp"
#include "fsi/sparse.hpp"

namespace fsi {

struct NewmarkParams {
    double gamma = 0.5;
    double delta = 0.0;
    double step = 0.0;        // time step l
    double final_time = 1.0;  // T
    /// Row-sum lump the mass inside the stepper. For P1 the lumped mass
    /// dominates the consistent one and softens the penalty-driven spectrum
    /// by ~2x, which is what makes the explicit step l = h/20 usable at
    /// alpha = 100. Off by default: small-system callers get M as given.
    bool lumped_mass = false;
    /// Cap the step at 95% of the measured explicit stability limit
    /// 2/sqrt(lambda_max). Off by default; the experiment configs enable it
    /// so the h/20 default cannot push a run past blowup.
    bool cfl_guard = false;

    void validate() const {
        if (!(gamma >= 0.5) || !(delta >= 0.0))
            throw Error("NewmarkParams: need gamma >= 1/2 and delta >= 0");
        if (!(step > 0.0) || !(final_time >= step))
            throw Error("NewmarkParams: need 0 < step <= final_time");
    }
};

/// Coefficient vectors of displacement/potential and their first two time
/// derivatives at one time level.
struct State {
    Vector u;  // U
    Vector v;  // dU/dt
    Vector w;  // d2U/dt2
    double t = 0.0;
};

struct SemidiscreteSystem {
    SparseMatrix mass;
    SparseMatrix damping;
    SparseMatrix stiffness;
};

struct StepInfo {
    int step = 0;
    int iterations = 0;   // 0 for direct solves
    double residual = 0.0;
};

using Observer = std::function<void(const State&, const StepInfo&)>;

/// One Newmark integrator instance per (system, step size): the effective
/// matrix factorization / preconditioner is built once and reused.
class NewmarkIntegrator {
public:
    NewmarkIntegrator(const SemidiscreteSystem& system, const DofMap& dofmap,
                      const NewmarkParams& params);
    ~NewmarkIntegrator();

    /// Initial acceleration from M W = f(0) - N V0 - A U0 (element block
    /// solves). Throws on a singular element mass block.
    State initial_state(const Vector& f0, const Vector& u0, const Vector& v0) const;

    /// Advance one step; f_next is the load at state.t + step.
    StepInfo step(State& state, const Vector& f_next);

    double time_step() const { return params_.step; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    NewmarkParams params_;
};

struct RunResult {
    State state;
    int steps = 0;
    double step_used = 0.0;
};

/// Largest generalized eigenvalue of (A, M or its lumping) by power
/// iteration; drives the CFL guard.
double estimate_spectral_bound(const SemidiscreteSystem& system, const DofMap& dofmap,
                               bool lumped_mass);

/// Advance from homogeneous-or-given initial data to final_time, assembling
/// the incident load at each new time level and invoking the observer every
/// step. Detects NaN/Inf blowup and aborts with the offending step index.
RunResult run_simulation(const Mesh& mesh, const ReferenceBasis& basis, const DofMap& dofmap,
                         const SemidiscreteSystem& system, const IncidentWave& wave,
                         NewmarkParams params, const Observer& observer = {},
                         const Vector* u0 = nullptr, const Vector* v0 = nullptr);

}  // namespace fsi
