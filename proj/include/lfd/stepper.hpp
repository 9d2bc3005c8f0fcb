#pragma once

#include <string>
#include <vector>

#include "lfd/collision_fields.hpp"
#include "lfd/config.hpp"
#include "lfd/diagnostics.hpp"
#include "lfd/distribution.hpp"

namespace lfd {

struct SimulationState {
    double t = 0.0;
    Distribution f;
    KernelParams params;
    long step_count = 0;
    double clipped_mass = 0.0;  // cumulative, stays 0 unless clipping is on

    SimulationState(Distribution f0, const KernelParams& p)
        : f(std::move(f0)), params(p) {}
};

struct Trajectory {
    std::vector<DiagnosticsRecord> records;
    SnapshotSeries snapshots;
    std::string error;  // empty on a clean run; partial data otherwise

    bool ok() const { return error.empty(); }
};

/// Right-hand side of the regularized problem in conservative form. The
/// collision part is assembled from the node-collocated pair velocity
///   U = F (Sigma[f] grad h - a * (F grad h)),   h = log(f/(1-eps f)),
/// (equal to Sigma grad f - b[f] F in the continuum) averaged to faces,
/// plus the nu grad f face flux; zero flux across the domain boundary.
/// The pair structure makes U vanish identically on equilibria and keeps
/// the discrete momentum/energy moments of Q at boundary-tail level, and
/// the trapezoid-weighted sum of the result telescopes to zero exactly.
ScalarField assemble_Q(const Distribution& f, const CollisionFields& fields,
                       double nu);

/// dt = cfl h^2 / (6 max lambda_max(Sigma + nu I) + h max|b| max f).
double stable_dt(const SimulationState& state, const CollisionFields& fields,
                 double cfl);

struct StepOptions {
    Scheme scheme = Scheme::rk2;
    bool clipping = false;
    ConvBackend backend = ConvBackend::fft;
    bool collisions = true;  // false: pure nu-diffusion (energy-law check)
};

/// One forward step; fields are recomputed per stage. Each stage applies
/// flux-corrected transport: the second-order face fluxes are blended with a
/// monotone low-order flux (normal diffusion + donor-cell drift) exactly
/// where they would push a node outside [0, 1/eps]; elsewhere the update is
/// the unmodified high-order scheme, and mass conservation stays exact.
/// Without clipping a residual Pauli-bound violation beyond
/// tol_bound = 1e-10 / eps aborts with BoundViolation; with clipping the
/// removed mass accumulates on the state.
SimulationState step(const SimulationState& state, double dt,
                     const StepOptions& opts);

Trajectory run(const SimulationConfig& config);

} // namespace lfd
