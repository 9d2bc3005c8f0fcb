#pragma once

#include <array>
#include <optional>

#include "lfd/grid.hpp"

namespace lfd {

/// Interaction exponent and optional kernel regularization. gamma lies in
/// the moderately soft range (-2, 0); gamma = 0 is accepted for kernel-level
/// tests only. nu = nullopt selects the unregularized power law, which is
/// singular at z = 0.
struct KernelParams {
    double gamma = -1.0;
    std::optional<double> nu{};

    KernelParams() = default;
    KernelParams(double g, std::optional<double> n) : gamma(g), nu(n) {
        if (!(gamma > -2.0 && gamma <= 0.0))
            throw ConfigurationError("kernel gamma must lie in (-2, 0]");
        if (nu && !(*nu > 0.0 && *nu <= 1.0))
            throw ConfigurationError("kernel nu must lie in (0, 1]");
    }
};

/// Regularized kernel profile. Equals r^{gamma+2} on [nu, 1/nu]; below nu it
/// blends (C^4, log-space smoothstep over [0.9 nu, nu]) into the quadratic
/// branch nu^gamma r^2, above 1/nu it blends over [1/nu, 1.1/nu] into the
/// constant nu^{-(2+gamma)}. Satisfies
///   psi(r) >= nu^gamma r^2 / 2 on (0, nu),
///   psi(r) >= nu^{-(2+gamma)} / 2 on (1/nu, inf),
///   psi(r) <= 2 r^{2+gamma} everywhere.
/// Without nu this is the bare power law r^{gamma+2}.
double psi_nu(double r, const KernelParams& params);
double psi_nu_prime(double r, const KernelParams& params);

using Mat3 = std::array<std::array<double, 3>, 3>;

/// a(z) = psi(|z|) (Id - z z^T / |z|^2).
Mat3 kernel_a(const Vec3& z, const KernelParams& params);
/// b(z) = -2 z psi(|z|) / |z|^2.
Vec3 kernel_b(const Vec3& z, const KernelParams& params);
/// c(z) = -2 [psi(|z|) + |z| psi'(|z|)] / |z|^2; equals -2(gamma+3)|z|^gamma
/// for the pure power law.
double kernel_c(const Vec3& z, const KernelParams& params);

} // namespace lfd
