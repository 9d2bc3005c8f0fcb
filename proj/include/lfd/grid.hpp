#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "lfd/errors.hpp"

namespace lfd {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm2(const Vec3& a) { return dot(a, a); }

/// Uniform Cartesian lattice on [-R,R]^3 with N nodes per axis.
/// Node coordinates are implicit (index -> coordinate); quadrature is the
/// trapezoid rule (half-weight on boundary faces), which makes the
/// conservative flux divergence telescope exactly.
class VelocityGrid {
public:
    VelocityGrid(double extent_R, int points_per_axis)
        : extent_(extent_R), n_(points_per_axis) {
        if (!(extent_R > 0.0))
            throw ConfigurationError("grid extent R must be positive");
        if (points_per_axis < 8)
            throw ConfigurationError("grid needs at least 8 points per axis");
        h_ = 2.0 * extent_ / static_cast<double>(n_ - 1);
    }

    double extent() const { return extent_; }
    int n() const { return n_; }
    double spacing() const { return h_; }
    std::size_t size() const {
        return static_cast<std::size_t>(n_) * n_ * n_;
    }

    double coord(int i) const { return -extent_ + h_ * i; }

    /// Linear index with i fastest (matches the checkpoint layout).
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * n_ + j) * n_ + i;
    }
    std::array<int, 3> unpack(std::size_t idx) const {
        int i = static_cast<int>(idx % n_);
        int j = static_cast<int>((idx / n_) % n_);
        int k = static_cast<int>(idx / (static_cast<std::size_t>(n_) * n_));
        return {i, j, k};
    }
    Vec3 node(std::size_t idx) const {
        auto [i, j, k] = unpack(idx);
        return {coord(i), coord(j), coord(k)};
    }

    /// 1D trapezoid weight of axis index i.
    double weight1d(int i) const {
        return (i == 0 || i == n_ - 1) ? 0.5 * h_ : h_;
    }
    double weight(int i, int j, int k) const {
        return weight1d(i) * weight1d(j) * weight1d(k);
    }

    bool operator==(const VelocityGrid& o) const {
        return n_ == o.n_ && extent_ == o.extent_;
    }
    bool operator!=(const VelocityGrid& o) const { return !(*this == o); }

private:
    double extent_;
    int n_;
    double h_;
};

struct ScalarField {
    VelocityGrid grid;
    std::vector<double> data;

    explicit ScalarField(const VelocityGrid& g, double fill = 0.0)
        : grid(g), data(g.size(), fill) {}

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }
    std::size_t size() const { return data.size(); }
};

struct VectorField {
    VelocityGrid grid;
    std::array<std::vector<double>, 3> comp;

    explicit VectorField(const VelocityGrid& g)
        : grid(g), comp{std::vector<double>(g.size(), 0.0),
                        std::vector<double>(g.size(), 0.0),
                        std::vector<double>(g.size(), 0.0)} {}

    Vec3 at(std::size_t i) const { return {comp[0][i], comp[1][i], comp[2][i]}; }
};

/// Symmetric 3x3 per node; stores the six independent entries so that
/// A_ij == A_ji holds exactly. Component order: xx, xy, xz, yy, yz, zz.
struct MatrixField {
    VelocityGrid grid;
    std::array<std::vector<double>, 6> comp;

    explicit MatrixField(const VelocityGrid& g)
        : grid(g), comp{std::vector<double>(g.size(), 0.0),
                        std::vector<double>(g.size(), 0.0),
                        std::vector<double>(g.size(), 0.0),
                        std::vector<double>(g.size(), 0.0),
                        std::vector<double>(g.size(), 0.0),
                        std::vector<double>(g.size(), 0.0)} {}

    static int sym_index(int r, int c) {
        static constexpr int map[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
        return map[r][c];
    }
    double entry(std::size_t node, int r, int c) const {
        return comp[sym_index(r, c)][node];
    }
};

/// Trapezoid quadrature over [-R,R]^3.
double integrate(const ScalarField& f);

/// Second-order central differences in the interior, second-order one-sided
/// stencils on the domain faces.
VectorField gradient(const ScalarField& f);

/// <v>^s = (1+|v|^2)^{s/2} sampled on the grid.
ScalarField weight_field(const VelocityGrid& grid, double s);

VelocityGrid build_grid(double extent_R, int N);

} // namespace lfd
