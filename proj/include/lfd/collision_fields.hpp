#pragma once

#include "lfd/distribution.hpp"
#include "lfd/kernels.hpp"

namespace lfd {

enum class ConvBackend { direct, fft };

/// Convolution fields of one time level:
///   Sigma   = a^nu * (f(1-eps f))
///   bfield  = b^nu * f
///   bfield_sq = b^nu * f^2      (so that B[f] = bfield - eps * bfield_sq)
///   cfield  = c^nu * f
///   drift   = a^nu * (f(1-eps f) grad h),  h = log(f/(1-eps f))
/// All convolutions carry the plain h^3 quadrature weight.
///
/// `drift` is the drift coefficient in the pair form of the collision
/// operator. In the continuum it coincides with bfield f(1-eps f) after
/// integration by parts; computing it as a convolution against the same
/// kernel a and the same quadrature as Sigma keeps the discrete flux
///   U = F (Sigma grad h - drift)
/// antisymmetric under exchange of the colliding pair, which is what gives
/// the time stepper its conservation and entropy-dissipation structure.
struct CollisionFields {
    MatrixField Sigma;
    VectorField bfield;
    VectorField bfield_sq;
    ScalarField cfield;
    VectorField drift;
    KernelParams params;

    explicit CollisionFields(const VelocityGrid& g, const KernelParams& p)
        : Sigma(g), bfield(g), bfield_sq(g), cfield(g), drift(g), params(p) {}

    Mat3 sigma_at(std::size_t node) const {
        Mat3 m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                m[r][c] = Sigma.entry(node, r, c);
        return m;
    }
};

CollisionFields compute_fields(const Distribution& f, const KernelParams& params,
                               ConvBackend backend = ConvBackend::fft);

/// Per-node smallest eigenvalue of Sigma + nu I (closed-form symmetric
/// eigensolve); used as a runtime assertion field.
ScalarField ellipticity_floor(const CollisionFields& fields, double nu);

/// Smallest / largest eigenvalue of a symmetric 3x3 matrix.
double sym3_min_eig(const Mat3& m);
double sym3_max_eig(const Mat3& m);

} // namespace lfd
