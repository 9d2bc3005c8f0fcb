#include "lfd/equilibrium.hpp"

#include <cmath>

#include "lfd/errors.hpp"

namespace lfd {

double epsilon_sat(double rho, double theta) {
    return 4.0 * M_PI * std::pow(5.0 * theta, 1.5) / (3.0 * rho);
}

namespace {

double integrand(double a, double b, double eps, int k, double r) {
    const double m = a * std::exp(-b * r * r);
    const double f = eps > 0.0 ? m / (1.0 + eps * m) : m;
    return f * std::pow(r, k);
}

/// Cutoff beyond which a e^{-b r^2} r^4 < 1e-18 * typical scale.
double radial_cutoff(double a, double b) {
    const double log_a = std::log(std::max(a, 1.0));
    return 1.1 * std::sqrt((log_a + 45.0) / b);
}

} // namespace

double radial_moment(double a, double b, double epsilon, int k) {
    // 512-interval composite Simpson on [0, r_max].
    const int n = 512;
    const double r_max = radial_cutoff(a, b);
    const double dr = r_max / n;
    double sum = integrand(a, b, epsilon, k, 0.0) +
                 integrand(a, b, epsilon, k, r_max);
    for (int i = 1; i < n; ++i) {
        const double w = (i % 2 == 1) ? 4.0 : 2.0;
        sum += w * integrand(a, b, epsilon, k, i * dr);
    }
    return 4.0 * M_PI * sum * dr / 3.0;
}

FermiDiracEquilibrium solve_fermi_dirac(double rho, const Vec3& u, double theta,
                                        double epsilon, double tol) {
    if (!(rho > 0.0) || !(theta > 0.0))
        throw ConfigurationError("solve_fermi_dirac: rho and theta must be positive");
    if (!(tol > 0.0))
        throw ConfigurationError("solve_fermi_dirac: tol must be positive");
    if (epsilon < 0.0)
        throw ConfigurationError("solve_fermi_dirac: epsilon must be nonnegative");
    if (epsilon > 0.0 &&
        !(5.0 * theta > std::pow(3.0 * epsilon * rho / (4.0 * M_PI), 2.0 / 3.0)))
        throw NotAdmissible("5 theta > (3 eps rho / 4 pi)^{2/3} fails");

    // Classical Maxwellian seed.
    double log_b = std::log(0.5 / theta);
    double log_a = std::log(rho) - 1.5 * std::log(2.0 * M_PI * theta);

    const double scale = tol * rho * std::max(1.0, theta);
    const double target_e = 3.0 * rho * theta;

    auto residual = [&](double la, double lb, double& r_mass, double& r_en) {
        const double a = std::exp(la), b = std::exp(lb);
        r_mass = radial_moment(a, b, epsilon, 2) - rho;
        r_en = radial_moment(a, b, epsilon, 4) - target_e;
    };

    double r_mass, r_en;
    residual(log_a, log_b, r_mass, r_en);
    double res = std::max(std::abs(r_mass), std::abs(r_en));

    for (int iter = 0; iter < 100 && res > scale; ++iter) {
        const double a = std::exp(log_a), b = std::exp(log_b);
        // d/d(log a) M = M(1-eps M), d/d(log b) M = -b r^2 M(1-eps M); the
        // Jacobian entries reduce to radial moments of M(1-eps M).
        const int n = 512;
        const double r_max = radial_cutoff(a, b);
        const double dr = r_max / n;
        double j[4] = {0, 0, 0, 0};
        for (int i = 0; i <= n; ++i) {
            const double r = i * dr;
            const double w = (i == 0 || i == n) ? 1.0 : ((i % 2 == 1) ? 4.0 : 2.0);
            const double m = a * std::exp(-b * r * r);
            const double mf = epsilon > 0.0 ? m / (1.0 + epsilon * m) : m;
            const double dm = mf * (1.0 - epsilon * mf);
            const double r2 = r * r;
            j[0] += w * dm * r2;           // d mass / d log a
            j[1] += w * (-b * r2) * dm * r2; // d mass / d log b
            j[2] += w * dm * r2 * r2;      // d energy / d log a
            j[3] += w * (-b * r2) * dm * r2 * r2;
        }
        const double c = 4.0 * M_PI * dr / 3.0;
        for (double& x : j) x *= c;

        const double det = j[0] * j[3] - j[1] * j[2];
        if (!(std::abs(det) > 0.0))
            throw NoConvergence("singular Jacobian in Fermi-Dirac Newton", res);
        double da = (-r_mass * j[3] + r_en * j[1]) / det;
        double db = (-j[0] * r_en + j[2] * r_mass) / det;

        // Damp by halving while the residual increases.
        double step = 1.0;
        double new_res = res;
        double la = log_a, lb = log_b, rm = r_mass, re = r_en;
        for (int halve = 0; halve < 30; ++halve) {
            la = log_a + step * da;
            lb = log_b + step * db;
            residual(la, lb, rm, re);
            new_res = std::max(std::abs(rm), std::abs(re));
            if (new_res < res || new_res <= scale) break;
            step *= 0.5;
        }
        log_a = la;
        log_b = lb;
        r_mass = rm;
        r_en = re;
        res = new_res;
    }

    if (res > scale)
        throw NoConvergence("Fermi-Dirac Newton stalled", res);

    FermiDiracEquilibrium eq;
    eq.rho = rho;
    eq.u = u;
    eq.theta = theta;
    eq.epsilon = epsilon;
    eq.a_eps = std::exp(log_a);
    eq.b_eps = std::exp(log_b);
    return eq;
}

Distribution evaluate_equilibrium(const FermiDiracEquilibrium& eq,
                                  const VelocityGrid& grid) {
    Distribution out(grid, eq.epsilon);
    for (std::size_t idx = 0; idx < grid.size(); ++idx)
        out[idx] = eq.value_at(grid.node(idx));
    return out;
}

Distribution saturated_state(double rho, const Vec3& u, double epsilon,
                             const VelocityGrid& grid) {
    if (!(epsilon > 0.0))
        throw ConfigurationError("saturated_state requires epsilon > 0");
    SaturatedState s{rho, u, epsilon};
    const double r2 = s.radius() * s.radius();
    Distribution out(grid, epsilon);
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        const Vec3 v = grid.node(idx);
        const Vec3 d{v[0] - u[0], v[1] - u[1], v[2] - u[2]};
        out[idx] = norm2(d) <= r2 ? 1.0 / epsilon : 0.0;
    }
    return out;
}

} // namespace lfd
