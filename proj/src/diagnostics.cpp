#include "lfd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace lfd {

ScalarField quantum_log(const Distribution& f) {
    const double floor = f.value_floor();
    const double eps = f.epsilon;
    ScalarField h(f.values.grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
        double fc = std::max(f[i], floor);
        if (eps > 0.0) fc = std::min(fc, 1.0 / eps - floor);
        h[i] = std::log(fc) - (eps > 0.0 ? std::log1p(-eps * fc) : 0.0);
    }
    return h;
}

namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// r^p from r^2 and r, with fast paths for the half-integer exponents the
// configured s/eta/gamma lists actually produce.
double rpow(double r2, double r, double p) {
    if (p == 2.0) return r2;
    if (p == 1.0) return r;
    if (p == 0.0) return 1.0;
    if (p == 3.0) return r2 * r;
    if (p == 4.0) return r2 * r2;
    if (p == 0.5) return std::sqrt(r);
    if (p == 1.5) return r * std::sqrt(r);
    if (p == 2.5) return r2 * std::sqrt(r);
    if (p == 3.5) return r2 * r * std::sqrt(r);
    if (p == -1.0) return 1.0 / r;
    if (p == -2.0) return 1.0 / r2;
    if (p == -0.5) return 1.0 / std::sqrt(r);
    if (p == -1.5) return 1.0 / (r * std::sqrt(r));
    return std::pow(r, p);
}

std::vector<double> node_weights(const VelocityGrid& g) {
    std::vector<double> w1(g.n());
    for (int i = 0; i < g.n(); ++i) w1[i] = g.weight1d(i);
    std::vector<double> w(g.size());
    std::size_t idx = 0;
    for (int k = 0; k < g.n(); ++k)
        for (int j = 0; j < g.n(); ++j) {
            const double wjk = w1[j] * w1[k];
            for (int i = 0; i < g.n(); ++i, ++idx) w[idx] = wjk * w1[i];
        }
    return w;
}

struct ActiveNode {
    Vec3 v;
    int ci, cj, ck;  // lattice coordinates; |v-v*|^2 = h^2 * integer
    double F;        // f (1 - eps f)
    Vec3 W;          // grad f / F  (= grad h with h the quantum log)
};

std::vector<ActiveNode> active_nodes(const Distribution& f) {
    const VelocityGrid& g = f.grid();
    const double floor = f.value_floor();
    const double eps = f.epsilon;
    // W is the discrete gradient of the quantum log h = log f - log(1-eps f)
    // (equal to grad f / F in the continuum). Differencing h directly keeps
    // the equilibrium exact: its log is quadratic in v, so the second-order
    // stencils reproduce grad h without truncation error and the projected
    // pair differences cancel. Values are clamped to the floor before the
    // log so stencils touching vacuum nodes stay finite.
    const VectorField grad = gradient(quantum_log(f));
    std::vector<ActiveNode> out;
    out.reserve(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double fi = f[i];
        if (fi <= floor) continue;
        if (eps > 0.0 && (1.0 / eps - fi) <= floor) continue;
        const double F = fi * (1.0 - eps * fi);
        auto [ci, cj, ck] = g.unpack(i);
        out.push_back({g.node(i), ci, cj, ck, F, grad.at(i)});
    }
    return out;
}

// Squared node distances are h^2 * (di^2+dj^2+dk^2); tabulating a radial
// weight over the 3(N-1)^2 possible integers turns the O(N^6) pair sums into
// lookups.
std::size_t pair_table_size(const VelocityGrid& g) {
    const std::size_t m = static_cast<std::size_t>(g.n()) - 1;
    return 3 * m * m + 1;
}

template <typename Fn>
std::vector<double> pair_table(const VelocityGrid& g, Fn&& weight_of_r2) {
    std::vector<double> tab(pair_table_size(g), 0.0);
    const double h2 = g.spacing() * g.spacing();
    for (std::size_t k = 1; k < tab.size(); ++k)
        tab[k] = weight_of_r2(h2 * static_cast<double>(k));
    return tab;
}

inline std::size_t pair_key(const ActiveNode& a, const ActiveNode& b) {
    const int di = a.ci - b.ci, dj = a.cj - b.cj, dk = a.ck - b.ck;
    return static_cast<std::size_t>(di * di + dj * dj + dk * dk);
}

std::string num_tag(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    std::string s(buf);
    for (char& c : s)
        if (c == '.' || c == '-') c = (c == '.') ? 'p' : 'm';
    return s;
}

} // namespace

MomentTriple moments(const Distribution& f, double s) {
    const VelocityGrid& g = f.grid();
    const auto w = node_weights(g);
    double m = 0.0, M = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Vec3 v = g.node(i);
        const double bw = std::pow(1.0 + norm2(v), 0.5 * s);
        m += w[i] * f[i] * bw;
        M += w[i] * f[i] * f[i] * bw;
    }
    return {m, M, m + 0.5 * M};
}

double dissipation_D(const Distribution& f, double s) {
    const VelocityGrid& g = f.grid();
    ScalarField weighted(g);
    for (std::size_t i = 0; i < f.size(); ++i)
        weighted[i] = std::pow(1.0 + norm2(g.node(i)), 0.25 * s) * f[i];
    const VectorField grad = gradient(weighted);
    const auto w = node_weights(g);
    double out = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) out += w[i] * norm2(grad.at(i));
    return out;
}

double entropy_S(const Distribution& f) {
    const auto w = node_weights(f.grid());
    const double eps = f.epsilon;
    double acc = 0.0;
    if (eps > 0.0) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double phi = std::clamp(eps * f[i], 0.0, 1.0);
            acc += w[i] * (xlogx(phi) + xlogx(1.0 - phi));
        }
        return -acc / eps;
    }
    for (std::size_t i = 0; i < f.size(); ++i)
        acc += w[i] * xlogx(std::max(f[i], 0.0));
    return -acc;
}

double boltzmann_H(const Distribution& f) {
    const auto w = node_weights(f.grid());
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        acc += w[i] * xlogx(std::max(f[i], 0.0));
    return acc;
}

double relative_entropy(const Distribution& f, const Distribution& g) {
    if (f.epsilon != g.epsilon)
        throw EpsilonMismatch("relative entropy of distributions with "
                              "different quantum parameters");
    if (f.grid() != g.grid())
        throw FieldGridMismatch("relative entropy of distributions on "
                                "different grids");
    return entropy_S(g) - entropy_S(f);
}

std::vector<double> entropy_production_multi(const Distribution& f,
                                             const std::vector<double>& etas) {
    const auto nodes = active_nodes(f);
    const double h = f.grid().spacing();
    const std::size_t n = nodes.size();
    std::vector<std::vector<double>> tabs;
    tabs.reserve(etas.size());
    for (double eta : etas)
        tabs.push_back(pair_table(f.grid(), [eta](double r2) {
            return rpow(r2, std::sqrt(r2), eta + 2.0);
        }));
    std::vector<double> acc(etas.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const ActiveNode& a = nodes[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const ActiveNode& b = nodes[j];
            const Vec3 z{a.v[0] - b.v[0], a.v[1] - b.v[1], a.v[2] - b.v[2]};
            const Vec3 d{a.W[0] - b.W[0], a.W[1] - b.W[1], a.W[2] - b.W[2]};
            const double r2 = norm2(z);
            const double t = dot(z, d);
            const double proj2 = std::max(norm2(d) - t * t / r2, 0.0);
            if (proj2 == 0.0) continue;
            const double xi = a.F * b.F * proj2;
            const std::size_t key = pair_key(a, b);
            for (std::size_t e = 0; e < etas.size(); ++e)
                acc[e] += tabs[e][key] * xi;
        }
    }
    const double scale = h * h * h;
    for (double& v : acc) v *= scale * scale;
    return acc;
}

double entropy_production(const Distribution& f, double eta) {
    return entropy_production_multi(f, {eta})[0];
}

double gamma_functional(const Distribution& f, double a, double q) {
    if (!(q > 0.0 && q < 1.0))
        throw ParameterOutOfRange("gamma functional exponent q must lie in (0,1)");
    const auto nodes = active_nodes(f);
    const double h = f.grid().spacing();
    const std::size_t n = nodes.size();
    const auto tab = pair_table(f.grid(), [a, q](double r2) {
        return r2 * std::exp(a * std::pow(std::sqrt(r2), q));
    });
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const ActiveNode& na = nodes[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            const ActiveNode& nb = nodes[j];
            const Vec3 z{na.v[0] - nb.v[0], na.v[1] - nb.v[1], na.v[2] - nb.v[2]};
            const Vec3 d{na.W[0] - nb.W[0], na.W[1] - nb.W[1], na.W[2] - nb.W[2]};
            const double r2 = norm2(z);
            const double t = dot(z, d);
            const double proj2 = std::max(norm2(d) - t * t / r2, 0.0);
            if (proj2 == 0.0) continue;
            acc += tab[pair_key(na, nb)] * na.F * nb.F * proj2;
        }
    }
    const double h3 = h * h * h;
    return 2.0 * acc * h3 * h3;  // i != j ordered pairs, no 1/2 prefactor
}

double weighted_fisher(const Distribution& f, double weight_s) {
    const VelocityGrid& g = f.grid();
    const double floor = f.value_floor();
    ScalarField root(g);
    for (std::size_t i = 0; i < f.size(); ++i)
        root[i] = f[i] > floor ? std::sqrt(f[i]) : 0.0;
    const VectorField grad = gradient(root);
    const auto w = node_weights(g);
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] <= floor) continue;
        acc += w[i] * std::pow(1.0 + norm2(g.node(i)), 0.5 * weight_s) *
               norm2(grad.at(i));
    }
    return acc;
}

ScalarField level_set_part(const Distribution& f, double level) {
    ScalarField out(f.grid());
    for (std::size_t i = 0; i < f.size(); ++i)
        out[i] = std::max(f[i] - level, 0.0);
    return out;
}

LevelSetEnergyReport level_set_energy(const SnapshotSeries& snaps, double gamma,
                                      double level, double T1, double T2,
                                      double c0) {
    if (!(T2 > T1)) throw ParameterOutOfRange("level-set window needs T2 > T1");
    const double tol = 1e-9 * (1.0 + std::abs(T2));
    std::vector<std::size_t> sel;
    for (std::size_t i = 0; i < snaps.size(); ++i)
        if (snaps[i].first >= T1 - tol && snaps[i].first <= T2 + tol)
            sel.push_back(i);
    if (sel.size() < 2 || snaps[sel.front()].first > T1 + tol ||
        snaps[sel.back()].first < T2 - tol)
        throw WindowNotCovered("stored snapshots do not cover the level-set "
                               "window");

    const VelocityGrid& g = snaps[sel.front()].second.grid();
    const auto w = node_weights(g);
    ScalarField vw = weight_field(g, gamma);
    for (std::size_t i = 0; i < vw.size(); ++i) vw[i] = std::sqrt(vw[i]);

    double best = 0.0, cum = 0.0, prev_t = 0.0, prev_d = 0.0;
    bool first = true;
    for (std::size_t s : sel) {
        const Distribution& f = snaps[s].second;
        if (f.grid() != g)
            throw FieldGridMismatch("snapshot grids differ inside the window");
        ScalarField plus = level_set_part(f, level);
        double half_l2 = 0.0;
        ScalarField weighted(g);
        for (std::size_t i = 0; i < plus.size(); ++i) {
            half_l2 += w[i] * plus[i] * plus[i];
            weighted[i] = vw[i] * plus[i];
        }
        half_l2 *= 0.5;
        const VectorField grad = gradient(weighted);
        double d = 0.0;
        for (std::size_t i = 0; i < plus.size(); ++i)
            d += w[i] * norm2(grad.at(i));
        const double t = snaps[s].first;
        if (!first) cum += 0.5 * (t - prev_t) * (d + prev_d);
        first = false;
        prev_t = t;
        prev_d = d;
        best = std::max(best, half_l2 + c0 * cum);
    }
    return {level, T1, T2, best, c0};
}

ExpMoments exp_moments(const Distribution& f, double a, double q) {
    const VelocityGrid& g = f.grid();
    const double vmax2 = 1.0 + 3.0 * g.extent() * g.extent();
    if (a * std::pow(vmax2, 0.5 * q) > 700.0)
        throw WeightOverflow("exponential weight exceeds double range on this "
                             "grid");
    const auto w = node_weights(g);
    double ups = 0.0, vth = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double mu =
            std::exp(a * std::pow(1.0 + norm2(g.node(i)), 0.5 * q));
        ups += w[i] * f[i] * f[i] * mu;
        vth += w[i] * f[i] * mu;
    }
    return {ups, vth, 0.5 * ups + vth};
}

Theorem51Constants theorem51_constants(const Distribution& g, double eta) {
    const VelocityGrid& grid = g.grid();
    const auto w = node_weights(grid);
    const double kappa = g.kappa0();
    if (kappa <= 0.0)
        throw Saturated("lower-bound constants need 1 - eps sup g > 0");

    // Directional second moments and the <v>^{-2}-weighted moment matrix.
    double diag_e[3] = {0, 0, 0};
    double P[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
    double m2eta = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) {
        const Vec3 v = grid.node(n);
        const double bw = 1.0 + norm2(v);
        const double gw = w[n] * g[n];
        m2eta += gw * std::pow(bw, 0.5 * (2.0 + eta));
        for (int i = 0; i < 3; ++i) {
            diag_e[i] += gw * v[i] * v[i];
            for (int j = i; j < 3; ++j) P[i][j] += gw * v[i] * v[j] / bw;
        }
    }
    const double inv_e =
        std::min({diag_e[0], diag_e[1], diag_e[2]}) / 3.0;
    if (inv_e <= 0.0)
        throw DegenerateDistribution("vanishing directional energy");
    const double e_g = 1.0 / inv_e;

    double lam_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const double tr = 0.5 * (P[i][i] + P[j][j]);
            const double dv = 0.5 * (P[i][i] - P[j][j]);
            lam_min = std::min(
                lam_min, tr - std::sqrt(dv * dv + P[i][j] * P[i][j]));
        }
    if (lam_min <= 0.0)
        throw DegenerateDistribution("degenerate directional moment matrix");
    const double B_g = 1.0 / lam_min;

    // I_eta = sup_v <v>^eta int g(w) |w-v|^{-eta} <w>^2 dw, self-node excluded.
    std::vector<double> inner(g.size(), 0.0);
    std::vector<double> qw(g.size());
    std::vector<Vec3> pos(g.size());
    std::vector<std::array<int, 3>> lat(g.size());
    for (std::size_t n = 0; n < g.size(); ++n) {
        pos[n] = grid.node(n);
        lat[n] = grid.unpack(n);
        qw[n] = w[n] * g[n] * (1.0 + norm2(pos[n]));
    }
    const auto tab = pair_table(grid, [eta](double r2) {
        return rpow(r2, std::sqrt(r2), -eta);
    });
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto li = lat[i];
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            const int di = li[0] - lat[j][0];
            const int dj = li[1] - lat[j][1];
            const int dk = li[2] - lat[j][2];
            const double ker = tab[static_cast<std::size_t>(
                di * di + dj * dj + dk * dk)];
            inner[i] += qw[j] * ker;
            inner[j] += qw[i] * ker;
        }
    }
    double I_eta = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n)
        I_eta = std::max(
            I_eta, std::pow(1.0 + norm2(pos[n]), 0.5 * eta) * inner[n]);

    const double inv_lambda = 510.0 * e_g * e_g * e_g / (kappa * kappa) *
                              std::max(1.0, B_g) * std::max(1.0, m2eta) *
                              I_eta;
    if (!(inv_lambda > 0.0))
        throw DegenerateDistribution("vanishing entropy-production constant");
    return {1.0 / inv_lambda, B_g, e_g, I_eta};
}

DiagnosticsRecord compute_record(const Distribution& f, double t,
                                 const RecordSpec& spec,
                                 const Distribution* reference_equilibrium) {
    DiagnosticsRecord r;
    r.t = t;
    for (double s : spec.s_list) {
        const MomentTriple m = moments(f, s);
        r.m_s.push_back(m.m_s);
        r.M_s.push_back(m.M_s);
        r.E_s.push_back(m.E_s);
        r.D_s.push_back(dissipation_D(f, s));
    }
    r.S_eps = entropy_S(f);
    r.H_boltzmann = boltzmann_H(f);
    r.H_rel = reference_equilibrium
                  ? relative_entropy(f, *reference_equilibrium)
                  : std::numeric_limits<double>::quiet_NaN();
    if (spec.pair_sums && f.grid().n() <= spec.pair_sum_max_n) {
        r.D_eta = entropy_production_multi(f, spec.eta_list);
    } else {
        r.D_eta.assign(spec.eta_list.size(),
                       std::numeric_limits<double>::quiet_NaN());
    }
    r.fisher_gamma = weighted_fisher(f, spec.gamma);
    r.kappa0 = f.kappa0();
    const auto w = node_weights(f.grid());
    for (double p : spec.p_list) {
        double acc = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i)
            acc += w[i] * std::pow(std::abs(f[i]), p);
        r.lp_norms.push_back(std::pow(acc, 1.0 / p));
    }
    if (spec.exp_aq) {
        const ExpMoments em = exp_moments(f, spec.exp_aq->first,
                                          spec.exp_aq->second);
        r.has_exp = true;
        r.exp_upsilon = em.upsilon;
        r.exp_vartheta = em.vartheta;
        r.exp_pi = em.pi;
    }
    return r;
}

std::vector<std::string> record_columns(const RecordSpec& spec) {
    std::vector<std::string> cols{"t"};
    for (double s : spec.s_list) {
        const std::string tag = num_tag(s);
        cols.push_back("m_" + tag);
        cols.push_back("M_" + tag);
        cols.push_back("E_" + tag);
        cols.push_back("D_" + tag);
    }
    cols.push_back("S_eps");
    cols.push_back("H_boltzmann");
    cols.push_back("H_rel");
    for (double e : spec.eta_list) cols.push_back("Deta_" + num_tag(e));
    cols.push_back("fisher_gamma");
    cols.push_back("kappa0");
    for (double p : spec.p_list) cols.push_back("L" + num_tag(p));
    if (spec.exp_aq) {
        cols.push_back("exp_upsilon");
        cols.push_back("exp_vartheta");
        cols.push_back("exp_pi");
    }
    cols.push_back("clipped_mass");
    return cols;
}

std::vector<double> record_values(const DiagnosticsRecord& r) {
    std::vector<double> vals{r.t};
    for (std::size_t i = 0; i < r.m_s.size(); ++i) {
        vals.push_back(r.m_s[i]);
        vals.push_back(r.M_s[i]);
        vals.push_back(r.E_s[i]);
        vals.push_back(r.D_s[i]);
    }
    vals.push_back(r.S_eps);
    vals.push_back(r.H_boltzmann);
    vals.push_back(r.H_rel);
    for (double d : r.D_eta) vals.push_back(d);
    vals.push_back(r.fisher_gamma);
    vals.push_back(r.kappa0);
    for (double d : r.lp_norms) vals.push_back(d);
    if (r.has_exp) {
        vals.push_back(r.exp_upsilon);
        vals.push_back(r.exp_vartheta);
        vals.push_back(r.exp_pi);
    }
    vals.push_back(r.clipped_mass);
    return vals;
}

} // namespace lfd
