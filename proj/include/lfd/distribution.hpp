#pragma once

#include <algorithm>

#include "lfd/grid.hpp"

namespace lfd {

/// Grid samples of f together with the quantum parameter.
/// Admissibility means 0 <= f <= 1/eps at every node (f >= 0 when eps = 0).
struct Distribution {
    ScalarField values;
    double epsilon = 0.0;

    Distribution(const VelocityGrid& g, double eps)
        : values(g, 0.0), epsilon(eps) {}
    Distribution(ScalarField f, double eps)
        : values(std::move(f)), epsilon(eps) {}

    const VelocityGrid& grid() const { return values.grid; }
    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }

    double max_value() const {
        return *std::max_element(values.data.begin(), values.data.end());
    }
    double min_value() const {
        return *std::min_element(values.data.begin(), values.data.end());
    }

    /// 1 - eps * sup f; the no-saturation gap.
    double kappa0() const { return 1.0 - epsilon * max_value(); }

    /// Floor below which log/sqrt/ratio evaluations treat f as vacuum.
    double value_floor() const {
        if (epsilon > 0.0) return 1e-12 / epsilon;
        const double m = max_value();
        return 1e-12 * (m > 0.0 ? m : 1.0);
    }

    /// f(1-eps f) sampled on the grid.
    ScalarField pauli_factor() const {
        ScalarField out(values.grid);
        for (std::size_t i = 0; i < values.size(); ++i)
            out[i] = values[i] * (1.0 - epsilon * values[i]);
        return out;
    }
};

} // namespace lfd
