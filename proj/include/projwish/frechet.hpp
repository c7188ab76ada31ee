// Karcher (Fréchet) mean solver on the determinant-1 slice: fixed-point
// iteration x <- exp_x(step * mean of log_x(y_i)) with a step-halving
// safeguard on objective increase.

#pragma once

#include <vector>

#include "projwish/geometry.hpp"

namespace projwish {

struct MeanConfig {
    int max_iters = 200;
    double grad_tol = 1e-9;  // tangent-norm threshold at the current iterate
    double step = 1.0;       // in (0, 1]
    double scale = kDefaultDistanceScale;
};

struct MeanResult {
    UnitDetPoint mean;
    int iterations = 0;
    double final_grad_norm = 0.0;
    bool converged = false;
    /// Objective value before each accepted update plus the final value;
    /// non-increasing along the iteration.
    std::vector<double> objective_history;
};

/// Weighted sum of squared distances sum_i w_i d(x, y_i)^2. Weights must
/// be nonnegative with unit sum; empty weights mean uniform.
double frechet_objective(const UnitDetPoint& x, const std::vector<UnitDetPoint>& points,
                         const std::vector<double>& weights = {},
                         double scale = kDefaultDistanceScale);

/// Karcher mean of the weighted empirical measure. Starts from the
/// projected Euclidean average; a non-converged result is reported through
/// MeanResult::converged, never silently.
MeanResult karcher_mean(const std::vector<UnitDetPoint>& points,
                        const std::vector<double>& weights = {}, const MeanConfig& cfg = {});

/// d(G . mean(points), mean(G . points)); small for any unit-determinant G
/// since the mean is equivariant under isometries.
double equivariance_check(const std::vector<UnitDetPoint>& points, const GroupElement& g,
                          const MeanConfig& cfg = {});

}  // namespace projwish
