// 1-D adaptive quadrature: Gauss-Kronrod 7/15 panels with bisection, plus
// a semi-infinite driver that doubles interval widths until the tail
// contribution falls below 1e-12.

#pragma once

#include <functional>

namespace projwish {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Single Gauss-Kronrod 7/15 panel on [a, b].
QuadResult gauss_kronrod_15(const std::function<double(double)>& f, double a, double b);

/// Adaptive bisection until the summed error estimate is below
/// max(abs_tol, rel_tol * |integral|).
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol = 1e-12, double rel_tol = 1e-12);

/// Integral over [a, infinity): consecutive panels of doubling width,
/// stopping once a panel contributes less than 1e-12 in absolute value.
QuadResult integrate_semi_infinite(const std::function<double(double)>& f, double a,
                                   double abs_tol = 1e-12);

}  // namespace projwish
