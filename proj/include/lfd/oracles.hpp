#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lfd/distribution.hpp"

namespace lfd {

struct Verdict {
    std::string oracle;
    bool pass = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;   // relative slack granted to the comparison
    bool vacuous = false; // bound degenerate (e.g. both sides 0)
    std::uint64_t seed = 0;
};

/// Seeded admissible sample: 2-4 mirrored Gaussian bump pairs, amplitudes
/// affinely corrected to mass 1, momentum 0, energy 3, clipped into
/// [0, (1-1e-3)/eps]; redraws when clipping shifts the moments by > 1%.
Distribution random_admissible(const VelocityGrid& grid, double epsilon,
                               std::uint64_t seed);

/// M_eps plus a mass- and energy-free even radial perturbation scaled to stay
/// strictly inside (0, 1/eps); amp is the relative perturbation size.
Distribution random_near_equilibrium(const VelocityGrid& grid, double epsilon,
                                     double amp, std::uint64_t seed);

/// ||f - M_eps||_L1^2 <= 2 m_0(f) H_eps(f | M_eps), M_eps from measured
/// moments. The non-explicit upper side is reported via rhs only.
Verdict check_csiszar_kullback(const Distribution& f);

/// int (1+|v-v*|^2)^{gamma/2} F(v*) dv* >= 12^{gamma/2} rho_F^{1-gamma/2}
/// <v>^gamma with F = f(1-eps f); needs rho_F <= 1.
Verdict check_jensen_bound(const Distribution& f, double gamma, const Vec3& v);

/// | int (|.|^lambda * g) phi | against the explicit-constant convolution
/// bound; C_p(lambda) = 2^{-lambda} max(1, (4 pi/(3+lambda q))^{1/q}) on the
/// negative branch, constant 1 with <.>^lambda weights on both factors for
/// lambda >= 0. Self-node excluded in the singular sum.
Verdict check_convolution_bound(const ScalarField& g, const ScalarField& phi,
                                double lambda, double p);

/// D^(gamma) >= (D^(0))^{1-gamma/eta} (D^(eta))^{gamma/eta}.
Verdict check_dissipation_interpolation(const Distribution& f, double gamma,
                                        double eta);

/// D^(eta) <= 2^{(eta+8)/2}/kappa0 * m_{eta+2} * int <v>^{eta+2}|grad sqrt f|^2.
Verdict check_D_upper_bound(const Distribution& f, double eta);

/// D^(gamma) >= 1/2 [(1/a) log(Gamma^{a,q}/D^(0))]^{gamma/q} D^(0).
Verdict check_exp_interpolation(const Distribution& f, double gamma, double a,
                                double q);

/// (f-l)_+ <= (l-k)^{-alpha} (f-k)_+^{1+alpha} nodewise, 0 <= k < l.
Verdict check_level_set_domination(const Distribution& f, double k, double l,
                                   double alpha);

/// J_{s,1}(f,f) = 2s sum f f* |v-v*|^gamma <v>^{s-2}(<v*>^2 - <v>^2) <= 0
/// for s > 2; self-node excluded.
Verdict check_Js1_sign(const Distribution& f, double s, double gamma);

/// D^(eta) >= 2 lambda_eta [b_eps - (12 eps^2/kappa0^4) max(||g||_inf^2,
/// ||M_eps||_inf^2)] H_eps(g|M_eps); vacuous when the bracket is negative.
Verdict check_entropy_production_lower_bound(const Distribution& f,
                                             double eta);

struct SuiteOptions {
    int trials = 100;
    std::uint64_t seed = 0;
    double gamma = -1.0;
    double R = 6.0;
    int N = 17;
    std::string reproducer_dir{};  // failing trials dump a checkpoint here
};

std::vector<Verdict> run_oracle_suite(const SuiteOptions& opts);

/// One JSON object per line: oracle, seed, pass, vacuous, lhs, rhs.
std::string verdict_jsonl(const Verdict& v);

} // namespace lfd
