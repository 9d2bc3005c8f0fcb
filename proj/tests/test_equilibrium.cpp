#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lfd/equilibrium.hpp"

using namespace lfd;

TEST_CASE("epsilon_sat values and scalings") {
    // 4 pi 5^{3/2} / 3
    CHECK(epsilon_sat(1.0, 1.0) ==
          doctest::Approx(46.832098206938174).epsilon(1e-12));
    CHECK(epsilon_sat(2.0, 1.0) ==
          doctest::Approx(0.5 * epsilon_sat(1.0, 1.0)));
    CHECK(epsilon_sat(1.0, 4.0) ==
          doctest::Approx(8.0 * epsilon_sat(1.0, 1.0)));
}

TEST_CASE("classical limit recovers the Maxwellian parameters") {
    const auto eq = solve_fermi_dirac(1.0, {0, 0, 0}, 1.0, 1e-8);
    // a -> (2 pi theta)^{-3/2}, b -> 1/(2 theta)
    CHECK(eq.a_eps == doctest::Approx(0.06349363593424097).epsilon(1e-7));
    CHECK(eq.b_eps == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("solved parameters recover the target moments") {
    for (double eps : {0.0, 0.05, 1.0, 10.0}) {
        const double rho = 1.3, theta = 0.8;
        if (eps >= epsilon_sat(rho, theta)) continue;
        const auto eq = solve_fermi_dirac(rho, {0.2, -0.1, 0.0}, theta, eps);
        const double m0 = radial_moment(eq.a_eps, eq.b_eps, eps, 2);
        const double m2 = radial_moment(eq.a_eps, eq.b_eps, eps, 4);
        CHECK(m0 == doctest::Approx(rho).epsilon(1e-8));
        CHECK(m2 == doctest::Approx(3.0 * rho * theta).epsilon(1e-8));
    }
}

TEST_CASE("inadmissible parameters are rejected") {
    const double eps = epsilon_sat(1.0, 1.0);
    CHECK_THROWS_AS(solve_fermi_dirac(1.0, {0, 0, 0}, 1.0, eps),
                    NotAdmissible);
    CHECK_THROWS_AS(solve_fermi_dirac(1.0, {0, 0, 0}, 1.0, 2.0 * eps),
                    NotAdmissible);
    // just below the threshold still solves
    CHECK_NOTHROW(solve_fermi_dirac(1.0, {0, 0, 0}, 1.0, 0.98 * eps));
}

TEST_CASE("grid evaluation matches analytic form and grid moments") {
    const VelocityGrid g = build_grid(8.0, 49);
    const auto eq = solve_fermi_dirac(1.0, {0.5, 0, 0}, 1.0, 0.2);
    const Distribution M = evaluate_equilibrium(eq, g);

    double mass = 0.0, mom = 0.0, energy = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto [a, b, c] = g.unpack(i);
        const double w = g.weight(a, b, c);
        const Vec3 v = g.node(i);
        mass += w * M[i];
        mom += w * M[i] * v[0];
        const Vec3 d{v[0] - 0.5, v[1], v[2]};
        energy += w * M[i] * norm2(d);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(mom == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(energy == doctest::Approx(3.0).epsilon(1e-5));

    // Pauli bound respected
    CHECK(M.max_value() < 1.0 / 0.2);
    CHECK(M.min_value() >= 0.0);
}

TEST_CASE("epsilon increases the solved a_eps at fixed moments") {
    double prev = 0.0;
    for (double eps : {0.0, 1.0, 5.0, 20.0, 40.0}) {
        const auto eq = solve_fermi_dirac(1.0, {0, 0, 0}, 1.0, eps);
        CHECK(eq.a_eps > prev);
        prev = eq.a_eps;
    }
}

TEST_CASE("saturated state geometry") {
    const VelocityGrid g = build_grid(4.0, 33);
    const double eps = 8.0;
    const Distribution F = saturated_state(1.0, {0, 0, 0}, eps, g);
    const double r = std::cbrt(3.0 * eps / (4.0 * M_PI));
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double rr = std::sqrt(norm2(g.node(i)));
        if (rr <= r - 1e-12) CHECK(F[i] == doctest::Approx(1.0 / eps));
        if (rr > r + 1e-12) CHECK(F[i] == 0.0);
    }
    CHECK_THROWS(saturated_state(1.0, {0, 0, 0}, 0.0, g));
}
