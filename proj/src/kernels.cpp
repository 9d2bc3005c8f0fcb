#include "lfd/kernels.hpp"

#include <cmath>

namespace lfd {

namespace {

// C^4 smoothstep on [0,1] and its derivative.
double smooth(double x) {
    return ((((70.0 * x - 315.0) * x + 540.0) * x - 420.0) * x + 126.0) *
           x * x * x * x * x;
}
double smooth_prime(double x) {
    const double y = x * (1.0 - x);
    return 630.0 * y * y * y * y;
}

// Value and d/d(log r) of log psi_nu.
struct LogProfile {
    double value;
    double slope;
};

LogProfile log_profile(double t, double gamma, double nu) {
    const double log_nu = std::log(nu);
    const double lp = (gamma + 2.0) * t;            // power law
    const double lq = gamma * log_nu + 2.0 * t;     // quadratic branch
    const double lc = -(2.0 + gamma) * log_nu;      // saturated constant

    const double t_lo0 = log_nu + std::log(0.9);
    const double t_lo1 = log_nu;
    const double t_hi0 = -log_nu;
    const double t_hi1 = -log_nu + std::log(1.1);

    if (t <= t_lo0) return {lq, 2.0};
    if (t < t_lo1) {
        const double w = t_lo1 - t_lo0;
        const double x = (t - t_lo0) / w;
        const double s = smooth(x);
        return {(1.0 - s) * lq + s * lp,
                (1.0 - s) * 2.0 + s * (gamma + 2.0) +
                    smooth_prime(x) * (lp - lq) / w};
    }
    if (t <= t_hi0) return {lp, gamma + 2.0};
    if (t < t_hi1) {
        const double w = t_hi1 - t_hi0;
        const double x = (t - t_hi0) / w;
        const double s = smooth(x);
        return {(1.0 - s) * lp + s * lc,
                (1.0 - s) * (gamma + 2.0) + smooth_prime(x) * (lc - lp) / w};
    }
    return {lc, 0.0};
}

} // namespace

double psi_nu(double r, const KernelParams& params) {
    if (r <= 0.0) return 0.0;
    if (!params.nu) return std::pow(r, params.gamma + 2.0);
    const LogProfile p = log_profile(std::log(r), params.gamma, *params.nu);
    return std::exp(p.value);
}

double psi_nu_prime(double r, const KernelParams& params) {
    if (r <= 0.0) return 0.0;
    if (!params.nu)
        return (params.gamma + 2.0) * std::pow(r, params.gamma + 1.0);
    const LogProfile p = log_profile(std::log(r), params.gamma, *params.nu);
    return std::exp(p.value) * p.slope / r;
}

Mat3 kernel_a(const Vec3& z, const KernelParams& params) {
    const double r2 = norm2(z);
    Mat3 out{};
    if (r2 == 0.0) {
        if (!params.nu) throw SingularKernel("kernel_a at z = 0");
        return out;
    }
    const double psi = psi_nu(std::sqrt(r2), params);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out[i][j] = psi * ((i == j ? 1.0 : 0.0) - z[i] * z[j] / r2);
    return out;
}

Vec3 kernel_b(const Vec3& z, const KernelParams& params) {
    const double r2 = norm2(z);
    if (r2 == 0.0) {
        if (!params.nu) throw SingularKernel("kernel_b at z = 0");
        return {0.0, 0.0, 0.0};
    }
    const double c = -2.0 * psi_nu(std::sqrt(r2), params) / r2;
    return {c * z[0], c * z[1], c * z[2]};
}

double kernel_c(const Vec3& z, const KernelParams& params) {
    const double r2 = norm2(z);
    if (r2 == 0.0) {
        if (!params.nu) throw SingularKernel("kernel_c at z = 0");
        return 0.0;
    }
    const double r = std::sqrt(r2);
    return -2.0 * (psi_nu(r, params) + r * psi_nu_prime(r, params)) / r2;
}

} // namespace lfd
