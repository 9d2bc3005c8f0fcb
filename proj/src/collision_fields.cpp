#include "lfd/collision_fields.hpp"

#include "lfd/diagnostics.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <tuple>

namespace lfd {

namespace {

// Kernel component layout: a_xx a_xy a_xz a_yy a_yz a_zz | b_x b_y b_z | c
constexpr int kNumKernels = 10;

struct KernelSample {
    double a[6];
    double b[3];
    double c;
};

KernelSample sample_kernels(const Vec3& z, const KernelParams& params) {
    KernelSample out{};
    const double r2 = norm2(z);
    if (r2 == 0.0) return out; // removable singularity under the nu floor
    const double r = std::sqrt(r2);
    const double psi = psi_nu(r, params);
    const double psi_p = psi_nu_prime(r, params);
    const double inv_r2 = 1.0 / r2;
    out.a[0] = psi * (1.0 - z[0] * z[0] * inv_r2);
    out.a[1] = psi * (-z[0] * z[1] * inv_r2);
    out.a[2] = psi * (-z[0] * z[2] * inv_r2);
    out.a[3] = psi * (1.0 - z[1] * z[1] * inv_r2);
    out.a[4] = psi * (-z[1] * z[2] * inv_r2);
    out.a[5] = psi * (1.0 - z[2] * z[2] * inv_r2);
    const double bc = -2.0 * psi * inv_r2;
    out.b[0] = bc * z[0];
    out.b[1] = bc * z[1];
    out.b[2] = bc * z[2];
    out.c = -2.0 * (psi + r * psi_p) * inv_r2;
    return out;
}

// FFT workspace: zero-padded circular convolution on a (2N)^3 grid, kernel
// spectra tabulated once per (gamma, nu, grid) and cached.
struct FftPlans {
    int n = 0;       // logical grid
    int m = 0;       // padded grid, 2N
    std::size_t real_size = 0;
    std::size_t cplx_size = 0;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    double* real_buf = nullptr;
    fftw_complex* cplx_buf = nullptr;
    std::array<std::vector<std::complex<double>>, kNumKernels> kernel_hat;

    ~FftPlans() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (real_buf) fftw_free(real_buf);
        if (cplx_buf) fftw_free(cplx_buf);
    }
};

using PlanKey = std::tuple<int, double, double, double>; // N, R, gamma, nu

std::shared_ptr<FftPlans> get_plans(const VelocityGrid& grid,
                                    const KernelParams& params) {
    static std::map<PlanKey, std::shared_ptr<FftPlans>> cache;
    const PlanKey key{grid.n(), grid.extent(), params.gamma, *params.nu};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    auto plans = std::make_shared<FftPlans>();
    const int n = grid.n();
    const int m = 2 * n;
    plans->n = n;
    plans->m = m;
    plans->real_size = static_cast<std::size_t>(m) * m * m;
    plans->cplx_size = static_cast<std::size_t>(m) * m * (m / 2 + 1);
    plans->real_buf = fftw_alloc_real(plans->real_size);
    plans->cplx_buf = fftw_alloc_complex(plans->cplx_size);
    plans->fwd = fftw_plan_dft_r2c_3d(m, m, m, plans->real_buf, plans->cplx_buf,
                                      FFTW_ESTIMATE);
    plans->bwd = fftw_plan_dft_c2r_3d(m, m, m, plans->cplx_buf, plans->real_buf,
                                      FFTW_ESTIMATE);

    // Tabulate each kernel component on the wrapped offset grid. Offsets
    // di in [-(n-1), n-1] map to index (di + m) mod m; the padding ring
    // m-(n-1)..n stays zero so the circular product is the linear one.
    const double h = grid.spacing();
    std::vector<KernelSample> samples(plans->real_size);
    for (std::size_t i = 0; i < plans->real_size; ++i) samples[i] = KernelSample{};
    for (int dk = -(n - 1); dk <= n - 1; ++dk)
        for (int dj = -(n - 1); dj <= n - 1; ++dj)
            for (int di = -(n - 1); di <= n - 1; ++di) {
                const Vec3 z{di * h, dj * h, dk * h};
                const std::size_t idx =
                    (static_cast<std::size_t>((dk + m) % m) * m +
                     ((dj + m) % m)) * m + ((di + m) % m);
                samples[idx] = sample_kernels(z, params);
            }

    auto component = [&](const KernelSample& s, int c) -> double {
        if (c < 6) return s.a[c];
        if (c < 9) return s.b[c - 6];
        return s.c;
    };
    for (int c = 0; c < kNumKernels; ++c) {
        for (std::size_t i = 0; i < plans->real_size; ++i)
            plans->real_buf[i] = component(samples[i], c);
        fftw_execute(plans->fwd);
        plans->kernel_hat[c].assign(
            reinterpret_cast<std::complex<double>*>(plans->cplx_buf),
            reinterpret_cast<std::complex<double>*>(plans->cplx_buf) +
                plans->cplx_size);
    }

    cache[key] = plans;
    return plans;
}

// Forward FFT of a logical-grid field zero-padded into the workspace.
std::vector<std::complex<double>> padded_fft(FftPlans& plans,
                                             const VelocityGrid& grid,
                                             const std::vector<double>& field) {
    const int n = plans.n, m = plans.m;
    std::fill(plans.real_buf, plans.real_buf + plans.real_size, 0.0);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            const std::size_t src = grid.index(0, j, k);
            const std::size_t dst =
                (static_cast<std::size_t>(k) * m + j) * m;
            for (int i = 0; i < n; ++i)
                plans.real_buf[dst + i] = field[src + i];
        }
    fftw_execute(plans.fwd);
    return std::vector<std::complex<double>>(
        reinterpret_cast<std::complex<double>*>(plans.cplx_buf),
        reinterpret_cast<std::complex<double>*>(plans.cplx_buf) +
            plans.cplx_size);
}

// Inverse FFT of kernel_hat[c] * input_hat, restricted to the logical grid
// and scaled by the h^3 quadrature weight.
void spectral_convolve(FftPlans& plans, const VelocityGrid& grid, int c,
                       const std::vector<std::complex<double>>& input_hat,
                       std::vector<double>& out) {
    const int n = plans.n, m = plans.m;
    const double scale =
        grid.spacing() * grid.spacing() * grid.spacing() /
        static_cast<double>(plans.real_size);
    auto* dst = reinterpret_cast<std::complex<double>*>(plans.cplx_buf);
    const auto& khat = plans.kernel_hat[c];
    for (std::size_t i = 0; i < plans.cplx_size; ++i)
        dst[i] = khat[i] * input_hat[i];
    fftw_execute(plans.bwd);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            const std::size_t src = (static_cast<std::size_t>(k) * m + j) * m;
            const std::size_t d = grid.index(0, j, k);
            for (int i = 0; i < n; ++i)
                out[d + i] = plans.real_buf[src + i] * scale;
        }
}

// F grad h with h the (floored) quantum log: the integrand of the drift
// convolution. Away from the floor this equals grad f by the chain rule.
VectorField pair_gradient(const Distribution& f) {
    const ScalarField F = f.pauli_factor();
    VectorField g = gradient(quantum_log(f));
    for (int c = 0; c < 3; ++c)
        for (std::size_t i = 0; i < f.size(); ++i) g.comp[c][i] *= F[i];
    return g;
}

CollisionFields compute_fields_fft(const Distribution& f,
                                   const KernelParams& params) {
    const VelocityGrid& grid = f.grid();
    auto plans = get_plans(grid, params);
    CollisionFields out(grid, params);

    const ScalarField F = f.pauli_factor();
    std::vector<double> f2(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) f2[i] = f[i] * f[i];

    const auto F_hat = padded_fft(*plans, grid, F.data);
    const auto f_hat = padded_fft(*plans, grid, f.values.data);
    const auto f2_hat = padded_fft(*plans, grid, f2);

    for (int c = 0; c < 6; ++c)
        spectral_convolve(*plans, grid, c, F_hat, out.Sigma.comp[c]);
    for (int c = 0; c < 3; ++c) {
        spectral_convolve(*plans, grid, 6 + c, f_hat, out.bfield.comp[c]);
        spectral_convolve(*plans, grid, 6 + c, f2_hat, out.bfield_sq.comp[c]);
    }
    spectral_convolve(*plans, grid, 9, f_hat, out.cfield.data);

    const VectorField pg = pair_gradient(f);
    std::array<std::vector<std::complex<double>>, 3> pg_hat;
    for (int c = 0; c < 3; ++c) pg_hat[c] = padded_fft(*plans, grid, pg.comp[c]);
    std::vector<double> tmp(grid.size());
    for (int i = 0; i < 3; ++i) {
        bool first = true;
        for (int j = 0; j < 3; ++j) {
            spectral_convolve(*plans, grid, MatrixField::sym_index(i, j),
                              pg_hat[j], tmp);
            if (first) {
                out.drift.comp[i] = tmp;
                first = false;
            } else {
                for (std::size_t k = 0; k < grid.size(); ++k)
                    out.drift.comp[i][k] += tmp[k];
            }
        }
    }
    return out;
}

CollisionFields compute_fields_direct(const Distribution& f,
                                      const KernelParams& params) {
    const VelocityGrid& grid = f.grid();
    CollisionFields out(grid, params);
    const ScalarField F = f.pauli_factor();
    const VectorField pg = pair_gradient(f);
    const double h3 = std::pow(grid.spacing(), 3);
    const std::size_t sz = grid.size();

    std::vector<Vec3> nodes(sz);
    for (std::size_t i = 0; i < sz; ++i) nodes[i] = grid.node(i);

    for (std::size_t i = 0; i < sz; ++i) {
        double acc_a[6] = {0, 0, 0, 0, 0, 0};
        double acc_bf[3] = {0, 0, 0};
        double acc_bf2[3] = {0, 0, 0};
        double acc_d[3] = {0, 0, 0};
        double acc_c = 0.0;
        const Vec3 vi = nodes[i];
        for (std::size_t j = 0; j < sz; ++j) {
            const double fj = f[j];
            const double Fj = F[j];
            const Vec3 pgj{pg.comp[0][j], pg.comp[1][j], pg.comp[2][j]};
            if (fj == 0.0 && Fj == 0.0 &&
                pgj[0] == 0.0 && pgj[1] == 0.0 && pgj[2] == 0.0)
                continue;
            const Vec3 z{vi[0] - nodes[j][0], vi[1] - nodes[j][1],
                         vi[2] - nodes[j][2]};
            const KernelSample s = sample_kernels(z, params);
            for (int c = 0; c < 6; ++c) acc_a[c] += s.a[c] * Fj;
            const double fj2 = fj * fj;
            for (int c = 0; c < 3; ++c) {
                acc_bf[c] += s.b[c] * fj;
                acc_bf2[c] += s.b[c] * fj2;
            }
            acc_d[0] += s.a[0] * pgj[0] + s.a[1] * pgj[1] + s.a[2] * pgj[2];
            acc_d[1] += s.a[1] * pgj[0] + s.a[3] * pgj[1] + s.a[4] * pgj[2];
            acc_d[2] += s.a[2] * pgj[0] + s.a[4] * pgj[1] + s.a[5] * pgj[2];
            acc_c += s.c * fj;
        }
        for (int c = 0; c < 6; ++c) out.Sigma.comp[c][i] = acc_a[c] * h3;
        for (int c = 0; c < 3; ++c) {
            out.bfield.comp[c][i] = acc_bf[c] * h3;
            out.bfield_sq.comp[c][i] = acc_bf2[c] * h3;
            out.drift.comp[c][i] = acc_d[c] * h3;
        }
        out.cfield.data[i] = acc_c * h3;
    }
    return out;
}

} // namespace

CollisionFields compute_fields(const Distribution& f, const KernelParams& params,
                               ConvBackend backend) {
    if (!params.nu)
        throw ConfigurationError("compute_fields requires a regularization nu");
    return backend == ConvBackend::fft ? compute_fields_fft(f, params)
                                       : compute_fields_direct(f, params);
}

double sym3_min_eig(const Mat3& m) {
    const double p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    if (p1 == 0.0)
        return std::min({m[0][0], m[1][1], m[2][2]});
    const double q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    const double p2 = (m[0][0] - q) * (m[0][0] - q) +
                      (m[1][1] - q) * (m[1][1] - q) +
                      (m[2][2] - q) * (m[2][2] - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    Mat3 b;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            b[r][c] = (m[r][c] - (r == c ? q : 0.0)) / p;
    const double detb =
        b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
        b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
        b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    const double r = std::clamp(detb / 2.0, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    return q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
}

double sym3_max_eig(const Mat3& m) {
    Mat3 neg;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) neg[r][c] = -m[r][c];
    return -sym3_min_eig(neg);
}

ScalarField ellipticity_floor(const CollisionFields& fields, double nu) {
    const VelocityGrid& grid = fields.Sigma.grid;
    ScalarField out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        Mat3 m = fields.sigma_at(i);
        for (int d = 0; d < 3; ++d) m[d][d] += nu;
        out[i] = sym3_min_eig(m);
    }
    return out;
}

} // namespace lfd
