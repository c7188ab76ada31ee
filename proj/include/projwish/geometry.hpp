// The space of unit-determinant positive matrices: projection, the
// (point, log-det) product identification, affine-invariant distance,
// exponential/logarithm maps and congruence group actions.

#pragma once

#include <numbers>
#include <utility>

#include "projwish/matrix.hpp"

namespace projwish {

/// Default multiplicative constant of the affine-invariant distance. With
/// this choice the 2x2 projective density is exactly cosh(d)^{-kn}.
inline constexpr double kDefaultDistanceScale = std::numbers::sqrt2 / 2.0;

/// Positive definite matrix (checked at construction).
class SpdPoint {
  public:
    explicit SpdPoint(HermMatrix m);
    static SpdPoint identity(int dim, Field field);

    const HermMatrix& mat() const { return mat_; }
    int dim() const { return mat_.dim(); }
    Field field() const { return mat_.field(); }

  private:
    HermMatrix mat_;
};

/// Positive definite matrix with determinant 1, the class representative
/// of a ray of positive matrices. Construction renormalizes small
/// determinant drift and rejects inputs whose determinant deviates from 1
/// by more than 1e-6.
class UnitDetPoint {
  public:
    explicit UnitDetPoint(HermMatrix m);
    static UnitDetPoint identity(int dim, Field field);

    const HermMatrix& mat() const { return mat_; }
    int dim() const { return mat_.dim(); }
    Field field() const { return mat_.field(); }

  private:
    HermMatrix mat_;
};

/// Tangent vector at a unit-determinant base point: a Hermitian matrix v
/// with trace(base^{-1} v) = 0, so geodesics through it stay inside the
/// determinant-1 slice.
class TangentVec {
  public:
    TangentVec(UnitDetPoint base, HermMatrix m);

    const UnitDetPoint& base() const { return base_; }
    const HermMatrix& mat() const { return mat_; }

  private:
    UnitDetPoint base_;
    HermMatrix mat_;
};

/// Invertible matrix acting by congruence X -> G X G*. unit_det records
/// whether |det(G) - 1| <= 1e-10, the condition under which the action
/// preserves the determinant-1 slice.
class GroupElement {
  public:
    GroupElement(Mat m, Field field);

    const Mat& mat() const { return mat_; }
    Field field() const { return field_; }
    int dim() const { return mat_.rows(); }
    bool unit_det() const { return unit_det_; }
    Scalar determinant() const { return det_; }

  private:
    Mat mat_;
    Field field_;
    Scalar det_;
    bool unit_det_;
};

/// Canonical projection onto the determinant-1 representative:
/// X -> det(X)^{-1/d} X.
UnitDetPoint project(const SpdPoint& x);

/// Identification of the positive cone with (det-1 slice) x R:
/// X -> (project(X), log det X).
std::pair<UnitDetPoint, double> theta(const SpdPoint& x);

/// Inverse identification: (x, t) -> e^{t/d} x.
SpdPoint theta_inverse(const UnitDetPoint& x, double t);

SpdPoint group_act(const GroupElement& g, const SpdPoint& x);

/// Congruence action on the determinant-1 slice; requires g.unit_det().
UnitDetPoint group_act(const GroupElement& g, const UnitDetPoint& x);

/// Affine-invariant distance scale * ||log(x^{-1/2} y x^{-1/2})||_F.
double distance(const UnitDetPoint& x, const UnitDetPoint& y,
                double scale = kDefaultDistanceScale);

/// Distance to the identity from eigenvalues only (no matrix logarithm):
/// scale * sqrt(sum_i log^2 lambda_i). Agrees with distance(x, I, scale)
/// on the determinant-1 slice.
double distance_to_identity_eigen(const UnitDetPoint& x, double scale = kDefaultDistanceScale);

/// Riemannian logarithm x^{1/2} log(x^{-1/2} y x^{-1/2}) x^{1/2}.
TangentVec log_map(const UnitDetPoint& x, const UnitDetPoint& y);

/// Riemannian exponential; inverse of log_map. v must be based at x.
UnitDetPoint exp_map(const UnitDetPoint& x, const TangentVec& v);

/// Norm of a tangent vector in the metric at its base point:
/// scale * ||base^{-1/2} v base^{-1/2}||_F.
double tangent_norm(const TangentVec& v, double scale = kDefaultDistanceScale);

}  // namespace projwish
