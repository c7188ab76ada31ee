// Seedable random generation: Gaussian vectors with a given covariance,
// Wishart and projective Wishart samples, Haar rotations and the
// conjugated stabilizer of a covariance parameter.

#pragma once

#include <vector>

#include "projwish/geometry.hpp"
#include "projwish/rng.hpp"

namespace projwish {

/// Parameters (Sigma, n) of a Wishart distribution over the given field.
struct WishartParams {
    WishartParams(SpdPoint sigma_in, int n_in, Field field_in);

    SpdPoint sigma;
    int n;
    Field field;

    int dim() const { return sigma.dim(); }
    int k() const { return field_constant(field); }
};

/// One draw from N(0, Sigma): L z with L the Cholesky factor of Sigma and
/// z i.i.d. standard entries (circularly symmetric in the complex field,
/// so E[Y Y*] = Sigma in both cases).
std::vector<Scalar> sample_gaussian(const SpdPoint& sigma, Field field, RngStream& rng);

/// Sum of n outer products of independent N(0, Sigma) vectors. Requires
/// n >= d so the sample is positive definite almost surely.
SpdPoint sample_wishart(const WishartParams& p, RngStream& rng);

/// Determinant-1 representative of a Wishart draw.
UnitDetPoint sample_projective_wishart(const WishartParams& p, RngStream& rng);

/// Haar-random rotation in SO_d (real) or SU_d (complex): QR of a standard
/// Gaussian matrix with the R-diagonal phase correction, determinant fixed
/// through the last column.
GroupElement sample_stabilizer(Field field, int dim, RngStream& rng);

/// Conjugated stabilizer element Sigma^{1/2} R Sigma^{-1/2}; leaves Sigma
/// fixed under the congruence action. R must satisfy R R* = I, det R = 1.
GroupElement conjugate_stabilizer(const GroupElement& r, const SpdPoint& sigma);

/// Random element of the unit-determinant group, built as
/// rotation * exp(diag(u - mean(u))) * rotation with uniform u. Spread is
/// moderate by construction, which keeps congruence actions well
/// conditioned in double precision.
GroupElement random_unit_det(int dim, Field field, RngStream& rng);

/// Random positive matrix rotation * diag(exp(u)) * rotation* with u
/// uniform in [-1, 1]; condition number at most e^2.
SpdPoint random_spd(int dim, Field field, RngStream& rng);

}  // namespace projwish
