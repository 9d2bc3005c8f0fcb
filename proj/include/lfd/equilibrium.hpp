#pragma once

#include "lfd/distribution.hpp"
#include "lfd/grid.hpp"

namespace lfd {

/// Parameters (a,b) of the Fermi-Dirac statistics
///   M(v) = a exp(-b|v-u|^2) / (1 + eps a exp(-b|v-u|^2)),
/// fixed so that M recovers mass rho, bulk velocity u and temperature theta.
struct FermiDiracEquilibrium {
    double rho = 1.0;
    Vec3 u{0.0, 0.0, 0.0};
    double theta = 1.0;
    double epsilon = 0.0;
    double a_eps = 0.0;
    double b_eps = 0.0;

    double value(double r2) const {
        const double m = a_eps * std::exp(-b_eps * r2);
        return epsilon > 0.0 ? m / (1.0 + epsilon * m) : m;
    }
    double value_at(const Vec3& v) const {
        const Vec3 d{v[0] - u[0], v[1] - u[1], v[2] - u[2]};
        return value(norm2(d));
    }
    double max_value() const { return value(0.0); }
};

/// Saturation threshold 4 pi (5 theta)^{3/2} / (3 rho). Admissible quantum
/// parameters are eps < eps_sat; at eps = eps_sat the equilibrium degenerates
/// into the indicator-valued saturated state.
double epsilon_sat(double rho, double theta);

struct SaturatedState {
    double rho;
    Vec3 u;
    double epsilon;
    double radius() const {
        return std::cbrt(3.0 * rho * epsilon / (4.0 * M_PI));
    }
};

/// Damped Newton in (log a, log b) matching the radial moment residuals to
/// tol * rho * max(1, theta). Throws NotAdmissible when
/// 5 theta <= (3 eps rho / 4 pi)^{2/3}, NoConvergence when Newton stalls.
FermiDiracEquilibrium solve_fermi_dirac(double rho, const Vec3& u, double theta,
                                        double epsilon, double tol = 1e-10);

Distribution evaluate_equilibrium(const FermiDiracEquilibrium& eq,
                                  const VelocityGrid& grid);

/// Degenerate stationary state: eps^{-1} inside |v-u| <= (3 rho eps/4pi)^{1/3}.
Distribution saturated_state(double rho, const Vec3& u, double epsilon,
                             const VelocityGrid& grid);

/// 4 pi int_0^inf M(r) r^k dr, used by the Newton solver and exposed for
/// cross-checking grid moments against the 1D radial reduction.
double radial_moment(double a, double b, double epsilon, int k);

} // namespace lfd
