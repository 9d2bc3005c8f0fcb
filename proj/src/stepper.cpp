#include "lfd/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lfd/equilibrium.hpp"

namespace lfd {

namespace {

std::vector<double> node_weights(const VelocityGrid& g) {
    std::vector<double> w(g.size());
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        auto [i, j, k] = g.unpack(idx);
        w[idx] = g.weight(i, j, k);
    }
    return w;
}

} // namespace

namespace {

/// Face-centered fluxes indexed by the lower adjacent node; entries whose
/// axis index is n-1 are unused (zero flux across the domain boundary).
/// `high` is the full second-order flux of assemble_Q; `low` keeps only the
/// monotone part (normal diffusion plus donor-cell drift), which preserves
/// the Pauli bounds under the stable_dt restriction and anchors the
/// flux-corrected update in advance().
struct FaceFluxes {
    std::array<std::vector<double>, 3> high, low;
};

FaceFluxes assemble_face_fluxes(const Distribution& f,
                                const CollisionFields& fields, double nu) {
    const VelocityGrid& g = f.grid();
    if (fields.Sigma.grid != g)
        throw FieldGridMismatch("collision fields were computed on a "
                                "different grid");
    if (!(nu > 0.0))
        throw ConfigurationError("assemble_Q needs nu > 0");

    const int n = g.n();
    const double h = g.spacing();
    const ScalarField F = f.pauli_factor();

    // Node-collocated collision velocity U = F (Sigma grad h - drift) with
    // h the quantum log. Both Sigma grad h and drift are discretizations of
    // the same pair integral, evaluated with identical kernel samples and
    // quadrature, so U inherits the antisymmetry of the colliding pair:
    // averaging U to faces yields a flux whose divergence conserves momentum
    // and energy and dissipates entropy up to boundary terms, and which
    // vanishes identically on equilibria (grad h linear in v).
    const VectorField gh = gradient(quantum_log(f));
    VectorField U(g);
    for (std::size_t m = 0; m < g.size(); ++m) {
        const double g0 = gh.comp[0][m], g1 = gh.comp[1][m], g2 = gh.comp[2][m];
        for (int i = 0; i < 3; ++i) {
            const double s0 = fields.Sigma.comp[MatrixField::sym_index(i, 0)][m];
            const double s1 = fields.Sigma.comp[MatrixField::sym_index(i, 1)][m];
            const double s2 = fields.Sigma.comp[MatrixField::sym_index(i, 2)][m];
            U.comp[i][m] = F[m] * (s0 * g0 + s1 * g1 + s2 * g2 -
                                   fields.drift.comp[i][m]);
        }
    }

    FaceFluxes out;
    for (int d = 0; d < 3; ++d) {
        out.high[d].assign(g.size(), 0.0);
        out.low[d].assign(g.size(), 0.0);
    }

    const std::size_t stride[3] = {1, static_cast<std::size_t>(n),
                                   static_cast<std::size_t>(n) * n};
    for (int d = 0; d < 3; ++d) {
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    const int axis = d == 0 ? i : (d == 1 ? j : k);
                    if (axis == n - 1) continue;  // zero flux past the face
                    const std::size_t m = g.index(i, j, k);
                    const std::size_t p = m + stride[d];

                    const double dn = (f[p] - f[m]) / h;
                    const double bd =
                        0.5 * (fields.bfield.comp[d][m] + fields.bfield.comp[d][p]);
                    const double donor = bd > 0.0 ? F[m] : F[p];
                    const int sd = MatrixField::sym_index(d, d);
                    const double sigdd =
                        0.5 * (fields.Sigma.comp[sd][m] + fields.Sigma.comp[sd][p]);

                    out.high[d][m] =
                        0.5 * (U.comp[d][m] + U.comp[d][p]) + nu * dn;
                    out.low[d][m] = (sigdd + nu) * dn - bd * donor;
                }
    }
    return out;
}

/// Discrete divergence of one face-flux set; the trapezoid weights make the
/// weighted node sum telescope to zero exactly.
ScalarField flux_divergence(const VelocityGrid& g,
                            const std::array<std::vector<double>, 3>& flux) {
    const int n = g.n();
    ScalarField Q(g);
    const std::size_t stride[3] = {1, static_cast<std::size_t>(n),
                                   static_cast<std::size_t>(n) * n};
    for (int d = 0; d < 3; ++d)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    const int axis = d == 0 ? i : (d == 1 ? j : k);
                    if (axis == n - 1) continue;
                    const std::size_t m = g.index(i, j, k);
                    const double G = flux[d][m];
                    Q[m] += G / g.weight1d(axis);
                    Q[m + stride[d]] -= G / g.weight1d(axis + 1);
                }
    return Q;
}

} // namespace

ScalarField assemble_Q(const Distribution& f, const CollisionFields& fields,
                       double nu) {
    const FaceFluxes faces = assemble_face_fluxes(f, fields, nu);
    return flux_divergence(f.grid(), faces.high);
}

double stable_dt(const SimulationState& state, const CollisionFields& fields,
                 double cfl) {
    if (!(cfl > 0.0 && cfl <= 1.0))
        throw ConfigurationError("cfl must lie in (0, 1]");
    if (!fields.params.nu)
        throw ConfigurationError("stable_dt needs a regularized kernel");
    const double nu = *fields.params.nu;
    const VelocityGrid& g = state.f.grid();
    double max_eig = 0.0, max_b2 = 0.0;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        max_eig = std::max(max_eig, sym3_max_eig(fields.sigma_at(idx)));
        max_b2 = std::max(max_b2, norm2(fields.bfield.at(idx)));
    }
    const double h = g.spacing();
    const double denom = 6.0 * (max_eig + nu) +
                         h * std::sqrt(max_b2) * state.f.max_value();
    return cfl * h * h / denom;
}

namespace {

CollisionFields fields_for(const Distribution& f, const KernelParams& params,
                           const StepOptions& opts) {
    if (opts.collisions) return compute_fields(f, params, opts.backend);
    return CollisionFields(f.grid(), params);  // zeros: pure nu-diffusion
}

/// Zalesak-style flux correction for one forward-Euler-type update
/// base + dt * div(G). Each face carries low + alpha * (high - low) with
/// alpha in [0,1] chosen so no node is pushed below 0 or above cap by the
/// antidiffusive part. The limiter only engages where the second-order
/// fluxes would break the Pauli bounds (under-resolved tails); elsewhere
/// alpha = 1 and the update is the unmodified high-order scheme.
std::array<std::vector<double>, 3> limit_fluxes(const VelocityGrid& g,
                                                const FaceFluxes& faces,
                                                const Distribution& base,
                                                double dt, double cap) {
    const int n = g.n();
    const std::size_t stride[3] = {1, static_cast<std::size_t>(n),
                                   static_cast<std::size_t>(n) * n};

    const ScalarField qL = flux_divergence(g, faces.low);
    std::vector<double> fL(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) fL[i] = base[i] + dt * qL[i];

    // Antidiffusive in/out rates per node under the divergence weights.
    std::vector<double> in_rate(g.size(), 0.0), out_rate(g.size(), 0.0);
    for (int d = 0; d < 3; ++d)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    const int axis = d == 0 ? i : (d == 1 ? j : k);
                    if (axis == n - 1) continue;
                    const std::size_t m = g.index(i, j, k);
                    const double A = faces.high[d][m] - faces.low[d][m];
                    const double cm = A / g.weight1d(axis);        // to m
                    const double cp = -A / g.weight1d(axis + 1);   // to p
                    const std::size_t p = m + stride[d];
                    (cm > 0.0 ? in_rate[m] : out_rate[m]) += std::abs(cm);
                    (cp > 0.0 ? in_rate[p] : out_rate[p]) += std::abs(cp);
                }

    std::vector<double> r_lo(g.size(), 1.0), r_hi(g.size(), 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (out_rate[i] > 0.0)
            r_lo[i] = std::min(1.0, std::max(0.0, fL[i]) / (dt * out_rate[i]));
        if (in_rate[i] > 0.0 && cap < std::numeric_limits<double>::infinity())
            r_hi[i] = std::min(1.0, std::max(0.0, cap - fL[i]) /
                                        (dt * in_rate[i]));
    }

    std::array<std::vector<double>, 3> limited = faces.low;
    for (int d = 0; d < 3; ++d)
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    const int axis = d == 0 ? i : (d == 1 ? j : k);
                    if (axis == n - 1) continue;
                    const std::size_t m = g.index(i, j, k);
                    const std::size_t p = m + stride[d];
                    const double A = faces.high[d][m] - faces.low[d][m];
                    // positive A feeds m and drains p, negative the converse
                    const double alpha = A > 0.0
                                             ? std::min(r_hi[m], r_lo[p])
                                             : std::min(r_lo[m], r_hi[p]);
                    limited[d][m] += alpha * A;
                }
    return limited;
}

void enforce_bounds(SimulationState& state, bool clipping,
                    const std::vector<double>& w) {
    Distribution& f = state.f;
    const double eps = f.epsilon;
    const double cap =
        eps > 0.0 ? 1.0 / eps : std::numeric_limits<double>::infinity();
    const double tol =
        eps > 0.0 ? 1e-10 / eps : 1e-10 * std::max(1.0, f.max_value());
    if (clipping) {
        double clipped = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double c = std::clamp(f[i], 0.0, cap);
            clipped += w[i] * std::abs(f[i] - c);
            f[i] = c;
        }
        state.clipped_mass += clipped;
        return;
    }
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] < -tol || f[i] > cap + tol)
            throw BoundViolation("Pauli bound violated at t = " +
                                 std::to_string(state.t) +
                                 "; reduce dt or refine the grid");
    }
}

SimulationState advance(const SimulationState& state, double dt,
                        const StepOptions& opts,
                        const CollisionFields& fields0,
                        const std::vector<double>& w) {
    SimulationState next = state;
    if (dt == 0.0) {
        next.step_count += 1;
        return next;
    }
    if (!state.params.nu)
        throw ConfigurationError("stepping needs a regularized kernel");
    const double nu = *state.params.nu;
    const VelocityGrid& g = state.f.grid();
    const double cap = state.f.epsilon > 0.0
                           ? 1.0 / state.f.epsilon
                           : std::numeric_limits<double>::infinity();

    auto limited_q = [&](const Distribution& stage_f,
                         const CollisionFields& flds, double stage_dt) {
        const FaceFluxes faces = assemble_face_fluxes(stage_f, flds, nu);
        const auto flux = limit_fluxes(g, faces, state.f, stage_dt, cap);
        return flux_divergence(g, flux);
    };

    if (opts.scheme == Scheme::euler) {
        const ScalarField q0 = limited_q(state.f, fields0, dt);
        for (std::size_t i = 0; i < next.f.size(); ++i)
            next.f[i] = state.f[i] + dt * q0[i];
    } else {
        const ScalarField q0 = limited_q(state.f, fields0, 0.5 * dt);
        Distribution mid = state.f;
        for (std::size_t i = 0; i < mid.size(); ++i)
            mid[i] = state.f[i] + 0.5 * dt * q0[i];
        const CollisionFields fm = fields_for(mid, state.params, opts);
        const ScalarField qm = limited_q(mid, fm, dt);
        for (std::size_t i = 0; i < next.f.size(); ++i)
            next.f[i] = state.f[i] + dt * qm[i];
    }
    next.t = state.t + dt;
    next.step_count = state.step_count + 1;
    enforce_bounds(next, opts.clipping, w);
    return next;
}

} // namespace

SimulationState step(const SimulationState& state, double dt,
                     const StepOptions& opts) {
    const CollisionFields fields0 = fields_for(state.f, state.params, opts);
    const auto w = node_weights(state.f.grid());
    return advance(state, dt, opts, fields0, w);
}

Trajectory run(const SimulationConfig& config) {
    Trajectory traj;
    const VelocityGrid grid = build_grid(config.R, config.N);
    const double nu = config.nu_value(grid.spacing());
    const KernelParams params(config.gamma, nu);

    Distribution f0 = initial_condition(config.initial, grid, config.epsilon);
    SimulationState state(std::move(f0), params);

    // Reference equilibrium sharing the measured grid moments of the datum.
    std::optional<Distribution> reference;
    {
        const auto w = node_weights(grid);
        double rho = 0.0;
        Vec3 mom{0, 0, 0};
        for (std::size_t i = 0; i < state.f.size(); ++i) {
            rho += w[i] * state.f[i];
            const Vec3 v = grid.node(i);
            for (int d = 0; d < 3; ++d) mom[d] += w[i] * state.f[i] * v[d];
        }
        if (rho > 0.0) {
            const Vec3 u{mom[0] / rho, mom[1] / rho, mom[2] / rho};
            double e = 0.0;
            for (std::size_t i = 0; i < state.f.size(); ++i) {
                const Vec3 v = grid.node(i);
                const Vec3 d{v[0] - u[0], v[1] - u[1], v[2] - u[2]};
                e += w[i] * state.f[i] * norm2(d);
            }
            const double theta = e / (3.0 * rho);
            try {
                const FermiDiracEquilibrium eq =
                    solve_fermi_dirac(rho, u, theta, config.epsilon);
                reference = evaluate_equilibrium(eq, grid);
            } catch (const NotAdmissible&) {
                // saturated-side configuration; H_rel stays NaN
            }
        }
    }

    RecordSpec rspec;
    rspec.s_list = config.s_list;
    rspec.eta_list = config.eta_list;
    rspec.p_list = config.p_list;
    rspec.gamma = config.gamma;
    rspec.exp_aq = config.exp_aq;
    rspec.pair_sums = config.pair_diagnostics;

    StepOptions opts;
    opts.scheme = config.scheme;
    opts.clipping = config.clipping;
    opts.backend = config.backend;
    opts.collisions = config.collisions;

    const Distribution* ref = reference ? &*reference : nullptr;
    const auto w = node_weights(grid);
    auto record = [&](const SimulationState& s) {
        DiagnosticsRecord r = compute_record(s.f, s.t, rspec, ref);
        r.clipped_mass = s.clipped_mass;
        traj.records.push_back(std::move(r));
    };

    record(state);
    traj.snapshots.emplace_back(state.t, state.f);

    const double t_end = config.t_final;
    const long max_steps = 10'000'000;
    try {
        while (state.t < t_end * (1.0 - 1e-14) && state.t < t_end) {
            const CollisionFields fields =
                fields_for(state.f, state.params, opts);
            double dt = stable_dt(state, fields, config.cfl);
            dt = std::min(dt, t_end - state.t);
            if (!(dt > 0.0))
                throw NoConvergence("time step underflow", dt);
            state = advance(state, dt, opts, fields, w);
            const bool last = state.t >= t_end * (1.0 - 1e-14);
            if (last || state.step_count % config.diag_cadence == 0)
                record(state);
            if (last || (config.snapshot_cadence > 0 &&
                         state.step_count % config.snapshot_cadence == 0))
                traj.snapshots.emplace_back(state.t, state.f);
            if (state.step_count >= max_steps)
                throw NoConvergence("step budget exhausted before t_final",
                                    t_end - state.t);
        }
    } catch (const std::exception& e) {
        traj.error = e.what();
    }
    return traj;
}

} // namespace lfd
