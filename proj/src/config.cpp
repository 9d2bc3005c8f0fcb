#include "lfd/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "lfd/equilibrium.hpp"
#include "lfd/io.hpp"

namespace lfd {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_num(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ValidationError(key, "expected a number, got '" + v + "'");
    }
}

long parse_int(const std::string& key, const std::string& v) {
    const double x = parse_num(key, v);
    if (x != std::floor(x))
        throw ValidationError(key, "expected an integer, got '" + v + "'");
    return static_cast<long>(x);
}

bool parse_flag(const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ValidationError(key, "expected on/off, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_num(key, item));
    }
    if (out.empty()) throw ValidationError(key, "empty list");
    return out;
}

struct ParsedExp {
    bool has_a = false, has_q = false;
    double a = 0, q = 0;
};

// Applies one key = value pair. `path` is the sectioned name used in error
// messages; dispatch uses the bare key so [grid] R and a flat R coincide.
void set_key(SimulationConfig& c, ParsedExp& exp, bool& nu_explicit,
             const std::string& path, const std::string& key,
             const std::string& value) {
    if (key == "gamma") c.gamma = parse_num(path, value);
    else if (key == "epsilon") c.epsilon = parse_num(path, value);
    else if (key == "R") c.R = parse_num(path, value);
    else if (key == "N") c.N = static_cast<int>(parse_int(path, value));
    else if (key == "nu") {
        if (value == "auto") { c.nu.reset(); nu_explicit = false; }
        else { c.nu = parse_num(path, value); nu_explicit = true; }
    }
    else if (key == "cfl") c.cfl = parse_num(path, value);
    else if (key == "scheme") {
        if (value == "euler") c.scheme = Scheme::euler;
        else if (value == "rk2") c.scheme = Scheme::rk2;
        else throw ValidationError(path, "expected euler or rk2");
    }
    else if (key == "t_final") c.t_final = parse_num(path, value);
    else if (key == "diag_cadence")
        c.diag_cadence = static_cast<int>(parse_int(path, value));
    else if (key == "snapshot_cadence")
        c.snapshot_cadence = static_cast<int>(parse_int(path, value));
    else if (key == "s_list") c.s_list = parse_list(path, value);
    else if (key == "eta_list") c.eta_list = parse_list(path, value);
    else if (key == "p_list") c.p_list = parse_list(path, value);
    else if (key == "exp_a") { exp.a = parse_num(path, value); exp.has_a = true; }
    else if (key == "exp_q") { exp.q = parse_num(path, value); exp.has_q = true; }
    else if (key == "initial") {
        using K = InitialConditionSpec::Kind;
        if (value == "equilibrium") c.initial.kind = K::equilibrium;
        else if (value == "saturated") c.initial.kind = K::saturated;
        else if (value == "two-bump") c.initial.kind = K::two_bump;
        else if (value == "from-checkpoint") c.initial.kind = K::from_checkpoint;
        else throw ValidationError(path, "unknown initial condition '" + value + "'");
    }
    else if (key == "separation") c.initial.separation = parse_num(path, value);
    else if (key == "width") c.initial.width = parse_num(path, value);
    else if (key == "checkpoint") c.initial.checkpoint_path = value;
    else if (key == "rho") c.initial.rho = parse_num(path, value);
    else if (key == "theta") c.initial.theta = parse_num(path, value);
    else if (key == "ux") c.initial.u[0] = parse_num(path, value);
    else if (key == "uy") c.initial.u[1] = parse_num(path, value);
    else if (key == "uz") c.initial.u[2] = parse_num(path, value);
    else if (key == "out") c.out_dir = value;
    else if (key == "seed")
        c.seed = static_cast<std::uint64_t>(parse_int(path, value));
    else if (key == "clipping") c.clipping = parse_flag(path, value);
    else if (key == "backend") {
        if (value == "fft") c.backend = ConvBackend::fft;
        else if (value == "direct") c.backend = ConvBackend::direct;
        else throw ValidationError(path, "expected fft or direct");
    }
    else if (key == "threads")
        c.threads = static_cast<int>(parse_int(path, value));
    else if (key == "trials")
        c.trials = static_cast<int>(parse_int(path, value));
    else if (key == "collisions") c.collisions = parse_flag(path, value);
    else if (key == "pair_diagnostics")
        c.pair_diagnostics = parse_flag(path, value);
    else throw ValidationError(path, "unknown key");
}

void validate(SimulationConfig& c, const ParsedExp& exp, bool gamma_seen,
              bool nu_explicit) {
    if (!gamma_seen) throw ValidationError("gamma", "missing required key");
    if (!(c.gamma > -2.0 && c.gamma < 0.0))
        throw ValidationError("gamma", "must lie in (-2, 0)");
    if (!(c.epsilon >= 0.0))
        throw ValidationError("epsilon", "must be nonnegative");
    if (!(c.R > 0.0)) throw ValidationError("R", "must be positive");
    if (c.N < 8) throw ValidationError("N", "needs at least 8 points per axis");
    if (!(c.cfl > 0.0 && c.cfl <= 1.0))
        throw ValidationError("cfl", "must lie in (0, 1]");
    if (c.t_final < 0.0) throw ValidationError("t_final", "must be >= 0");
    if (c.diag_cadence < 1)
        throw ValidationError("diag_cadence", "must be >= 1");
    if (c.snapshot_cadence < 0)
        throw ValidationError("snapshot_cadence", "must be >= 0");
    if (c.trials < 1) throw ValidationError("trials", "must be >= 1");
    if (exp.has_a != exp.has_q)
        throw ValidationError("exp_a", "exp_a and exp_q come together");
    if (exp.has_a) {
        if (!(exp.a > 0.0)) throw ValidationError("exp_a", "must be positive");
        if (!(exp.q > 0.0 && exp.q < 1.0))
            throw ValidationError("exp_q", "must lie in (0, 1)");
        c.exp_aq = {exp.a, exp.q};
    }
    if (!(c.initial.rho > 0.0)) throw ValidationError("rho", "must be positive");
    if (!(c.initial.theta > 0.0))
        throw ValidationError("theta", "must be positive");
    if (c.epsilon > 0.0 &&
        c.epsilon >= epsilon_sat(c.initial.rho, c.initial.theta))
        throw ValidationError(
            "epsilon", "at or beyond the saturation threshold of the "
                       "configured initial moments");
    if (c.initial.kind == InitialConditionSpec::Kind::saturated &&
        c.epsilon <= 0.0)
        throw ValidationError("initial", "saturated state needs epsilon > 0");
    if (c.initial.kind == InitialConditionSpec::Kind::from_checkpoint &&
        c.initial.checkpoint_path.empty())
        throw ValidationError("checkpoint", "missing checkpoint path");
    if (!nu_explicit)
        c.nu = 2.0 * c.R / static_cast<double>(c.N - 1);  // "auto" = h
    if (!(*c.nu > 0.0 && *c.nu <= 1.0))
        throw ValidationError(
            "nu", "must lie in (0, 1]; 'auto' needs a grid with h <= 1");
}

} // namespace

SimulationConfig parse_config(const std::string& text) {
    SimulationConfig c;
    ParsedExp exp;
    bool gamma_seen = false, nu_explicit = false;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t cut = line.find_first_of("#;");
        if (cut != std::string::npos) line.erase(cut);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("line " + std::to_string(lineno) +
                                 ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty key");
        const std::string path = section.empty() ? key : section + "." + key;
        if (key == "gamma") gamma_seen = true;
        set_key(c, exp, nu_explicit, path, key, value);
    }
    validate(c, exp, gamma_seen, nu_explicit);
    return c;
}

SimulationConfig load_config(const std::string& path) {
    return parse_config(read_text_file(path));
}

void apply_env_overrides(SimulationConfig& c) {
    static const char* keys[] = {
        "gamma", "epsilon", "R", "N", "nu", "cfl", "scheme", "t_final",
        "diag_cadence", "snapshot_cadence", "s_list", "eta_list", "p_list",
        "exp_a", "exp_q", "initial", "separation", "width", "checkpoint",
        "rho", "theta", "ux", "uy", "uz", "out", "seed", "clipping",
        "backend", "threads", "trials", "collisions", "pair_diagnostics"};
    ParsedExp exp;
    if (c.exp_aq) {
        exp = {true, true, c.exp_aq->first, c.exp_aq->second};
    }
    bool nu_explicit = c.nu.has_value();
    for (const char* key : keys) {
        std::string env = "LFD_";
        for (const char* p = key; *p; ++p)
            env += static_cast<char>(std::toupper(static_cast<unsigned char>(*p)));
        if (const char* v = std::getenv(env.c_str()))
            set_key(c, exp, nu_explicit, env, key, v);
    }
    validate(c, exp, true, nu_explicit);
}

namespace {

struct GridMoments {
    double mass;
    Vec3 momentum;
    double energy_about_u;  // int f |v-u|^2
};

GridMoments grid_moments(const ScalarField& f, const Vec3& u) {
    const VelocityGrid& g = f.grid;
    GridMoments m{0.0, {0, 0, 0}, 0.0};
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
        auto [i, j, k] = g.unpack(idx);
        const double w = g.weight(i, j, k) * f[idx];
        const Vec3 v = g.node(idx);
        m.mass += w;
        for (int d = 0; d < 3; ++d) m.momentum[d] += w * v[d];
        const Vec3 dv{v[0] - u[0], v[1] - u[1], v[2] - u[2]};
        m.energy_about_u += w * norm2(dv);
    }
    return m;
}

Distribution two_bump(const InitialConditionSpec& spec,
                      const VelocityGrid& grid, double epsilon) {
    const double c = 0.5 * spec.separation;
    if (3.0 * spec.theta <= c * c)
        throw MomentCorrectionFailed(
            "two-bump separation too large for the target temperature");
    const Vec3 u = spec.u;

    auto sample = [&](double log_A, double log_beta) {
        const double A = std::exp(log_A), beta = std::exp(log_beta);
        ScalarField f(grid);
        for (std::size_t idx = 0; idx < grid.size(); ++idx) {
            const Vec3 v = grid.node(idx);
            const Vec3 d{v[0] - u[0], v[1] - u[1], v[2] - u[2]};
            const double rm2 = (d[0] - c) * (d[0] - c) + d[1] * d[1] + d[2] * d[2];
            const double rp2 = (d[0] + c) * (d[0] + c) + d[1] * d[1] + d[2] * d[2];
            const double m = A * (std::exp(-beta * rm2) + std::exp(-beta * rp2));
            f[idx] = epsilon > 0.0 ? m / (1.0 + epsilon * m) : m;
        }
        return f;
    };

    // Newton in (log A, log beta) on grid mass and energy; momentum is exact
    // by the +-c symmetry of the bumps.
    const double target_mass = spec.rho;
    const double target_energy = 3.0 * spec.rho * spec.theta;
    double beta = 1.0 / (2.0 * spec.width * spec.width);
    // continuum warm start: energy/mass = 3/(2 beta) + c^2
    const double e_per_m = 3.0 * spec.theta;
    if (e_per_m > c * c) beta = 1.5 / (e_per_m - c * c);
    double lA = std::log(target_mass / (2.0 * std::pow(M_PI / beta, 1.5)));
    double lB = std::log(beta);

    auto residual = [&](double a, double b, double& rm, double& re) {
        const GridMoments m = grid_moments(sample(a, b), u);
        rm = m.mass - target_mass;
        re = m.energy_about_u - target_energy;
        return std::max(std::abs(rm) / target_mass,
                        std::abs(re) / target_energy);
    };

    double rm, re;
    double res = residual(lA, lB, rm, re);
    for (int it = 0; it < 60 && res > 1e-12; ++it) {
        const double d = 1e-6;
        double rmA, reA, rmB, reB;
        residual(lA + d, lB, rmA, reA);
        residual(lA, lB + d, rmB, reB);
        const double j11 = (rmA - rm) / d, j12 = (rmB - rm) / d;
        const double j21 = (reA - re) / d, j22 = (reB - re) / d;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0)
            throw MomentCorrectionFailed("singular two-bump moment Jacobian");
        double sA = -(j22 * rm - j12 * re) / det;
        double sB = -(-j21 * rm + j11 * re) / det;
        double damp = 1.0;
        for (int half = 0; half < 30; ++half) {
            double rm2, re2;
            const double r2 = residual(lA + damp * sA, lB + damp * sB, rm2, re2);
            if (r2 < res) {
                lA += damp * sA;
                lB += damp * sB;
                rm = rm2;
                re = re2;
                res = r2;
                break;
            }
            damp *= 0.5;
            if (half == 29)
                throw MomentCorrectionFailed(
                    "two-bump moment correction stalled at residual " +
                    std::to_string(res));
        }
    }
    if (res > 1e-10)
        throw MomentCorrectionFailed(
            "two-bump moment correction did not converge");
    return Distribution(sample(lA, lB), epsilon);
}

} // namespace

Distribution initial_condition(const InitialConditionSpec& spec,
                               const VelocityGrid& grid, double epsilon) {
    using K = InitialConditionSpec::Kind;
    switch (spec.kind) {
    case K::equilibrium: {
        const FermiDiracEquilibrium eq =
            solve_fermi_dirac(spec.rho, spec.u, spec.theta, epsilon);
        return evaluate_equilibrium(eq, grid);
    }
    case K::saturated:
        if (epsilon <= 0.0)
            throw ValidationError("initial",
                                  "saturated state needs epsilon > 0");
        return saturated_state(spec.rho, spec.u, epsilon, grid);
    case K::two_bump:
        return two_bump(spec, grid, epsilon);
    case K::from_checkpoint: {
        Checkpoint cp = read_checkpoint(spec.checkpoint_path);
        if (cp.f.grid() != grid)
            throw ValidationError("checkpoint",
                                  "grid does not match the configured one");
        if (cp.f.epsilon != epsilon) {
            std::cerr << "warning: checkpoint epsilon " << cp.f.epsilon
                      << " differs from configured " << epsilon
                      << "; using the configured value\n";
            cp.f.epsilon = epsilon;
        }
        return std::move(cp.f);
    }
    }
    throw ConfigurationError("unreachable initial condition kind");
}

} // namespace lfd
