// Closed-form density evaluators with respect to the invariant volume:
// Wishart density, projective density in trace form (any dimension) and
// cosh form (2x2), and the radial law of distances used for statistical
// verification. Everything is returned in log space; normalizing
// constants come from 1-D quadrature, never from gamma identities.

#pragma once

#include "projwish/quadrature.hpp"
#include "projwish/rng.hpp"
#include "projwish/sampling.hpp"

namespace projwish {

struct DensityValue {
    double log_value = 0.0;
    bool normalized = false;
};

/// log of det(X)^{kn/2} e^{-(k/2) tr(Sigma^{-1} X)}, the Wishart density
/// with respect to the invariant volume on the cone, up to a constant.
/// The complex case uses rate k/2 = 1 in the exponential, matching the
/// circularly-symmetric sampling convention.
DensityValue wishart_logdensity_invariant(const SpdPoint& x, const WishartParams& p);

/// log of (2 / tr(Sigma^{-1} x))^{dkn/2}: the projective Wishart density
/// in trace form, valid in any dimension, up to a constant.
DensityValue projective_logdensity_trace(const UnitDetPoint& x, const WishartParams& p);

/// log of cosh(d(x, projected Sigma))^{-kn} with the distance at the
/// canonical 1/sqrt(2) normalization. 2x2 only.
DensityValue projective_logdensity_cosh(const UnitDetPoint& x, const WishartParams& p);

/// Distribution of the distance r = d(x, projected Sigma) under the 2x2
/// projective Wishart law: pdf(r) = sinh(r)^k cosh(r)^{-kn} / Z with Z
/// fixed by adaptive quadrature.
class RadialLaw {
  public:
    RadialLaw(Field field, int n);

    int k() const { return k_; }
    int n() const { return n_; }
    /// Z with pdf = sinh^k cosh^{-kn} / Z.
    double normalizing_constant() const { return z_; }

    double log_pdf(double r) const;
    double pdf(double r) const;
    double cdf(double r) const;
    /// cdf at every element of an ascending vector, accumulated
    /// incrementally so the whole batch costs one sweep of quadratures.
    std::vector<double> cdf_at_sorted(const std::vector<double>& sorted_r) const;

  private:
    double shape(double r) const;
    int k_;
    int n_;
    double z_;
};

/// Radial law for the given 2x2 parameters; rejects non-integrable
/// combinations (k (n - 1) < 1).
RadialLaw radial_law(const WishartParams& p);

/// The constant c making c cosh(r)^{-kn} a probability density with
/// respect to the invariant volume on the 2x2 slice. The scale argument
/// selects the metric normalization carried by the reference volume; the
/// cosh form itself stays pinned to the canonical 1/sqrt(2) radius.
double normalize_density_2d(const WishartParams& p, double scale = kDefaultDistanceScale);

/// Importance-weighted draw from the invariant volume restricted to a
/// ball of canonical radius `cap` around the identity (2x2 only): the
/// radius is uniform on [0, cap] and the weight carries the shell density
/// cap * S_k * sinh(r)^k; the direction comes from a Haar stabilizer
/// orbit. The mean of weight * f(point) estimates the volume integral of
/// f over the ball.
struct InvariantBallSample {
    UnitDetPoint point;
    double radius = 0.0;
    double weight = 0.0;
};
InvariantBallSample sample_invariant_ball_importance(double cap, Field field, RngStream& rng);

}  // namespace projwish
