#include "lfd/grid.hpp"

namespace lfd {

VelocityGrid build_grid(double extent_R, int N) { return VelocityGrid(extent_R, N); }

double integrate(const ScalarField& f) {
    const auto& g = f.grid;
    const int n = g.n();
    // Precompute the 1D weights once; the 3D weight is their product.
    std::vector<double> w1(n);
    for (int i = 0; i < n; ++i) w1[i] = g.weight1d(i);

    double total = 0.0;
    std::size_t idx = 0;
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) {
            const double wjk = w1[j] * w1[k];
            double row = 0.0;
            for (int i = 0; i < n; ++i, ++idx) row += w1[i] * f.data[idx];
            total += wjk * row;
        }
    }
    return total;
}

VectorField gradient(const ScalarField& f) {
    const auto& g = f.grid;
    const int n = g.n();
    const double inv2h = 1.0 / (2.0 * g.spacing());
    VectorField out(g);

    const std::size_t sx = 1;
    const std::size_t sy = static_cast<std::size_t>(n);
    const std::size_t sz = static_cast<std::size_t>(n) * n;
    const std::size_t stride[3] = {sx, sy, sz};

    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        auto ijk = g.unpack(idx);
        for (int d = 0; d < 3; ++d) {
            const int p = ijk[d];
            const std::size_t s = stride[d];
            double deriv;
            if (p == 0) {
                deriv = (-3.0 * f.data[idx] + 4.0 * f.data[idx + s] -
                         f.data[idx + 2 * s]) * inv2h;
            } else if (p == n - 1) {
                deriv = (3.0 * f.data[idx] - 4.0 * f.data[idx - s] +
                         f.data[idx - 2 * s]) * inv2h;
            } else {
                deriv = (f.data[idx + s] - f.data[idx - s]) * inv2h;
            }
            out.comp[d][idx] = deriv;
        }
    }
    return out;
}

ScalarField weight_field(const VelocityGrid& grid, double s) {
    ScalarField out(grid);
    const double half_s = 0.5 * s;
    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        const Vec3 v = grid.node(idx);
        out.data[idx] = std::pow(1.0 + norm2(v), half_s);
    }
    return out;
}

} // namespace lfd
