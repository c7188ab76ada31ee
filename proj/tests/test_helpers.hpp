// Shared generators and matchers for the test suites.

#pragma once

#include <cmath>
#include <vector>

#include "projwish/geometry.hpp"
#include "projwish/rng.hpp"
#include "projwish/sampling.hpp"

namespace projwish::testing {

inline HermMatrix random_hermitian(int dim, Field field, RngStream& rng) {
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = rng.next_standard_scalar(field);
    return HermMatrix::from(m, field);
}

inline UnitDetPoint random_unit_det_point(int dim, Field field, RngStream& rng) {
    return project(random_spd(dim, field, rng));
}

inline double max_entry_diff(const Mat& a, const Mat& b) {
    double worst = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
    return worst;
}

inline double rel_frobenius_diff(const Mat& a, const Mat& b) {
    return (a - b).frobenius_norm() / std::max(1.0, b.frobenius_norm());
}

inline Mat herm2x2(double a, Scalar b, double d, Field field) {
    Mat m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = std::conj(b);
    m(1, 1) = d;
    (void)field;
    return m;
}

}  // namespace projwish::testing
