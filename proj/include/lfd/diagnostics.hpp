#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lfd/distribution.hpp"

namespace lfd {

struct MomentTriple {
    double m_s;  // int f <v>^s
    double M_s;  // int f^2 <v>^s
    double E_s;  // m_s + M_s / 2
};

MomentTriple moments(const Distribution& f, double s);

/// D_s = int |grad(<v>^{s/2} f)|^2 dv.
double dissipation_D(const Distribution& f, double s);

/// Fermi-Dirac entropy
///   S_eps(f) = -eps^{-1} int [eps f log(eps f) + (1-eps f) log(1-eps f)] dv
/// with x log x := 0 at x = 0. For eps = 0 this returns the classical limit
/// -int f log f dv (the eps-dependent additive constant is dropped; the mass
/// is conserved along runs so monotonicity statements are unaffected).
double entropy_S(const Distribution& f);

/// Boltzmann entropy H(f) = int f log f dv, x log x := 0 at x = 0.
double boltzmann_H(const Distribution& f);

/// H_eps(f|g) = -S_eps(f) + S_eps(g). Throws EpsilonMismatch when the two
/// distributions carry different quantum parameters.
double relative_entropy(const Distribution& f, const Distribution& g);

/// Entropy production with interaction exponent eta:
///   D^(eta) = 1/2 sum over node pairs of |v-v*|^{eta+2} Xi[f](v,v*) h^6,
/// Xi = F F* |Pi(v-v*)(grad h - grad h*)|^2, h = log f - log(1-eps f),
/// F = f(1-eps f). Pairs with f below the value floor at either node
/// contribute 0.
double entropy_production(const Distribution& f, double eta);

/// Same pair sum evaluated for several exponents in one pass.
std::vector<double> entropy_production_multi(const Distribution& f,
                                             const std::vector<double>& etas);

/// int <v>^{weight_s} |grad sqrt(f)|^2 dv; nodes below the floor contribute 0.
double weighted_fisher(const Distribution& f, double weight_s);

/// The quantum log h = log f - log(1 - eps f), clamped to the value floor so
/// vacuum nodes stay finite. Its discrete gradient is the W entering the
/// pair functionals (equal to grad f / F in the continuum).
ScalarField quantum_log(const Distribution& f);

/// (f - level)_+ nodewise.
ScalarField level_set_part(const Distribution& f, double level);

struct LevelSetEnergyReport {
    double level;
    double t1, t2;
    double value;
    double c0;
};

using SnapshotSeries = std::vector<std::pair<double, Distribution>>;

/// De Giorgi truncation energy over a time window, evaluated on stored
/// snapshots (trapezoid rule in time):
///   E_l(T1,T2) = sup_{t in [T1,T2)} ( 1/2 ||f_l^+(t)||_{L2}^2
///                + c0 int_{T1}^t ||grad(<.>^{gamma/2} f_l^+)||_{L2}^2 dtau ).
LevelSetEnergyReport level_set_energy(const SnapshotSeries& snaps, double gamma,
                                      double level, double T1, double T2,
                                      double c0);

struct ExpMoments {
    double upsilon;   // int f^2 mu_{a,q}
    double vartheta;  // int f mu_{a,q}
    double pi;        // upsilon/2 + vartheta
};

/// Exponential-weight moments with mu_{a,q}(v) = exp(a <v>^q). Refuses with
/// WeightOverflow when a <v_max>^q > 700.
ExpMoments exp_moments(const Distribution& f, double a, double q);

/// Gamma^{a,q}(f) = sum over pairs of |v-v*|^2 exp(a|v-v*|^q) Xi[f] h^6
/// (no 1/2 prefactor); shares the pair machinery and floor policy of
/// entropy_production.
double gamma_functional(const Distribution& f, double a, double q);

struct Theorem51Constants {
    double lambda_eta;
    double B_g;
    double e_g;
    double I_eta;
};

/// Explicit constants of the entropy/entropy-production lower bound:
///   1/lambda_eta = 510 e_g^3 / kappa0^2 * max(1,B_g) * max(1, m_{2+eta}) * I_eta
/// with B_g from the worst 2x2 directional moment matrix, 1/e_g the smallest
/// directional energy, and I_eta a grid maximization with the self-node
/// excluded.
Theorem51Constants theorem51_constants(const Distribution& g, double eta);

/// One time-stamped row of every tracked functional.
struct DiagnosticsRecord {
    double t = 0.0;
    std::vector<double> m_s, M_s, E_s, D_s;  // per configured s
    double S_eps = 0.0;
    double H_boltzmann = 0.0;
    double H_rel = 0.0;                      // relative to the reference M_eps
    std::vector<double> D_eta;               // per configured eta
    double fisher_gamma = 0.0;
    double kappa0 = 0.0;
    std::vector<double> lp_norms;            // per configured p
    bool has_exp = false;
    double exp_upsilon = 0.0, exp_vartheta = 0.0, exp_pi = 0.0;
    double clipped_mass = 0.0;
};

struct RecordSpec {
    std::vector<double> s_list{0, 2, 3, 4};
    std::vector<double> eta_list{0, 1, 2};
    std::vector<double> p_list{2};
    double gamma = -1.0;
    std::optional<std::pair<double, double>> exp_aq{};
    bool pair_sums = true;       // entropy productions are O(N^6); optional
    int pair_sum_max_n = 33;     // skipped above this resolution
};

DiagnosticsRecord compute_record(const Distribution& f, double t,
                                 const RecordSpec& spec,
                                 const Distribution* reference_equilibrium);

/// Column names matching compute_record output, fixed by the configured lists.
std::vector<std::string> record_columns(const RecordSpec& spec);
std::vector<double> record_values(const DiagnosticsRecord& r);

} // namespace lfd
