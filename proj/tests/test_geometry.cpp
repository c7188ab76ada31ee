#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "projwish/geometry.hpp"
#include "projwish/sampling.hpp"
#include "test_helpers.hpp"

using namespace projwish;
using namespace projwish::testing;

namespace {

const double kE = std::exp(1.0);

UnitDetPoint diag_point(std::vector<double> d, Field field = Field::Real) {
    return UnitDetPoint(HermMatrix::diagonal(d, field));
}

}  // namespace

TEST_CASE("projection onto the determinant-1 slice") {
    const UnitDetPoint a = project(SpdPoint(HermMatrix::diagonal({2.0, 2.0}, Field::Real)));
    CHECK(max_entry_diff(a.mat().mat(), Mat::identity(2)) <= 1e-14);

    const UnitDetPoint b = project(SpdPoint(HermMatrix::diagonal({2.0, 0.5}, Field::Real)));
    CHECK(b.mat()(0, 0).real() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(b.mat()(1, 1).real() == doctest::Approx(0.5).epsilon(1e-14));

    // det diag(8,2) = 16, divide by 16^{1/2} = 4.
    const UnitDetPoint c = project(SpdPoint(HermMatrix::diagonal({8.0, 2.0}, Field::Real)));
    CHECK(c.mat()(0, 0).real() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c.mat()(1, 1).real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(det(c.mat()) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("theta identification and its inverse") {
    const auto [p0, t0] = theta(SpdPoint::identity(2, Field::Real));
    CHECK(t0 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(max_entry_diff(p0.mat().mat(), Mat::identity(2)) <= 1e-14);

    const auto [p1, t1] = theta(SpdPoint(HermMatrix::diagonal({kE, kE}, Field::Real)));
    CHECK(t1 == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(max_entry_diff(p1.mat().mat(), Mat::identity(2)) <= 1e-13);

    const auto [p2, t2] = theta(SpdPoint(HermMatrix::diagonal({8.0, 2.0}, Field::Real)));
    CHECK(t2 == doctest::Approx(std::log(16.0)).epsilon(1e-13));
    CHECK(p2.mat()(0, 0).real() == doctest::Approx(2.0).epsilon(1e-13));

    const SpdPoint inv0 = theta_inverse(UnitDetPoint::identity(2, Field::Real), 0.0);
    CHECK(max_entry_diff(inv0.mat().mat(), Mat::identity(2)) <= 1e-14);
    const SpdPoint inv1 = theta_inverse(UnitDetPoint::identity(2, Field::Real), 2.0);
    CHECK(inv1.mat()(0, 0).real() == doctest::Approx(kE).epsilon(1e-14));
    const SpdPoint inv2 = theta_inverse(diag_point({2.0, 0.5}), std::log(16.0));
    CHECK(inv2.mat()(0, 0).real() == doctest::Approx(8.0).epsilon(1e-13));
    CHECK(inv2.mat()(1, 1).real() == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("theta round trip on random points") {
    RngStream rng(31, 0);
    for (Field field : {Field::Real, Field::Complex}) {
        for (int rep = 0; rep < 50; ++rep) {
            const SpdPoint x = random_spd(3, field, rng);
            const auto [u, t] = theta(x);
            const SpdPoint back = theta_inverse(u, t);
            CHECK(rel_frobenius_diff(back.mat().mat(), x.mat().mat()) <= 1e-12);
        }
    }
}

TEST_CASE("group action on fixed inputs") {
    const GroupElement id(Mat::identity(2), Field::Real);
    const UnitDetPoint x = diag_point({2.0, 0.5});
    CHECK(max_entry_diff(group_act(id, x).mat().mat(), x.mat().mat()) <= 1e-15);

    Mat stretch(2, 2);
    stretch(0, 0) = std::sqrt(2.0);
    stretch(1, 1) = 1.0 / std::sqrt(2.0);
    const GroupElement g(stretch, Field::Real);
    REQUIRE(g.unit_det());
    const UnitDetPoint stretched = group_act(g, UnitDetPoint::identity(2, Field::Real));
    CHECK(stretched.mat()(0, 0).real() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(stretched.mat()(1, 1).real() == doctest::Approx(0.5).epsilon(1e-14));

    // Rotation by 45 degrees on diag(2, 1/2): direct 2x2 multiplication
    // gives [[5/4, 3/4], [3/4, 5/4]].
    const double c = std::cos(std::numbers::pi / 4.0);
    const double s = std::sin(std::numbers::pi / 4.0);
    Mat rot(2, 2);
    rot(0, 0) = c;
    rot(0, 1) = -s;
    rot(1, 0) = s;
    rot(1, 1) = c;
    const UnitDetPoint rotated = group_act(GroupElement(rot, Field::Real), x);
    CHECK(rotated.mat()(0, 0).real() == doctest::Approx(1.25).epsilon(1e-14));
    CHECK(rotated.mat()(0, 1).real() == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(rotated.mat()(1, 1).real() == doctest::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("non-unit-determinant elements cannot act on the slice") {
    Mat twice(2, 2);
    twice(0, 0) = 2.0;
    twice(1, 1) = 2.0;
    const GroupElement g(twice, Field::Real);
    CHECK(!g.unit_det());
    CHECK_THROWS_AS(group_act(g, UnitDetPoint::identity(2, Field::Real)), std::invalid_argument);
    // The cone overload accepts it.
    const SpdPoint moved = group_act(g, SpdPoint::identity(2, Field::Real));
    CHECK(moved.mat()(0, 0).real() == doctest::Approx(4.0));
}

TEST_CASE("unit-determinant action preserves the determinant") {
    RngStream rng(77, 2);
    for (Field field : {Field::Real, Field::Complex}) {
        for (int rep = 0; rep < 20; ++rep) {
            const GroupElement g = random_unit_det(3, field, rng);
            REQUIRE(g.unit_det());
            const UnitDetPoint x = random_unit_det_point(3, field, rng);
            CHECK(std::abs(det(group_act(g, x).mat()) - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("distance on fixed inputs") {
    const UnitDetPoint x = diag_point({kE, 1.0 / kE});
    const UnitDetPoint id = UnitDetPoint::identity(2, Field::Real);
    CHECK(distance(x, x) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(distance(id, x, 1.0 / std::sqrt(2.0)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(distance(id, x, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    CHECK(distance(x, id) == doctest::Approx(distance(id, x)).epsilon(1e-13));
    CHECK(distance(id, x) > 0.0);
}

TEST_CASE("eigenvalue fast path to the identity") {
    CHECK(distance_to_identity_eigen(UnitDetPoint::identity(3, Field::Real)) == 0.0);
    CHECK(distance_to_identity_eigen(diag_point({kE, 1.0 / kE}), 1.0 / std::sqrt(2.0)) ==
          doctest::Approx(1.0).epsilon(1e-13));
    const UnitDetPoint y = diag_point({kE * kE, 1.0, 1.0 / (kE * kE)});
    CHECK(distance_to_identity_eigen(y, 1.0) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-13));
}

TEST_CASE("eigenvalue fast path agrees with the matrix-log distance") {
    RngStream rng(13, 1);
    for (Field field : {Field::Real, Field::Complex}) {
        const UnitDetPoint id = UnitDetPoint::identity(2, field);
        for (int rep = 0; rep < 500; ++rep) {
            const UnitDetPoint x = random_unit_det_point(2, field, rng);
            CHECK(std::abs(distance_to_identity_eigen(x) - distance(x, id)) <= 1e-9);
        }
    }
}

TEST_CASE("log and exp maps on fixed inputs") {
    const UnitDetPoint id = UnitDetPoint::identity(2, Field::Real);
    const UnitDetPoint y = diag_point({kE, 1.0 / kE});

    const TangentVec zero = log_map(y, y);
    CHECK(frobenius_norm(zero.mat()) <= 1e-13);
    CHECK(max_entry_diff(exp_map(y, zero).mat().mat(), y.mat().mat()) <= 1e-13);

    const TangentVec v = log_map(id, y);
    CHECK(v.mat()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(v.mat()(1, 1).real() == doctest::Approx(-1.0).epsilon(1e-13));

    const UnitDetPoint there =
        exp_map(id, TangentVec(id, HermMatrix::diagonal({1.0, -1.0}, Field::Real)));
    CHECK(there.mat()(0, 0).real() == doctest::Approx(kE).epsilon(1e-13));

    // Geodesic linearity: t * direction moves distance t.
    for (double t : {0.1, 0.5}) {
        const UnitDetPoint pt =
            exp_map(id, TangentVec(id, HermMatrix::diagonal({t, -t}, Field::Real)));
        CHECK(pt.mat()(0, 0).real() == doctest::Approx(std::exp(t)).epsilon(1e-13));
        CHECK(distance(id, pt) == doctest::Approx(t).epsilon(1e-12));
    }
}

TEST_CASE("log/exp round trip at 1e-10") {
    RngStream rng(99, 4);
    for (Field field : {Field::Real, Field::Complex}) {
        for (int d : {2, 3}) {
            for (int rep = 0; rep < 50; ++rep) {
                const UnitDetPoint x = random_unit_det_point(d, field, rng);
                const UnitDetPoint y = random_unit_det_point(d, field, rng);
                const TangentVec v = log_map(x, y);
                CHECK(std::abs(tangent_norm(v) - distance(x, y)) <= 1e-10);
                const UnitDetPoint back = exp_map(x, v);
                CHECK(rel_frobenius_diff(back.mat().mat(), y.mat().mat()) <= 1e-10);
                CHECK(std::abs(det(back.mat()) - 1.0) <= 1e-10);
            }
        }
    }
}

TEST_CASE("exp_map rejects a tangent vector from another base") {
    const UnitDetPoint id = UnitDetPoint::identity(2, Field::Real);
    const UnitDetPoint y = diag_point({2.0, 0.5});
    const TangentVec at_y = log_map(y, id);
    CHECK_THROWS_AS(exp_map(id, at_y), std::invalid_argument);
}

TEST_CASE("tangency is enforced at construction") {
    const UnitDetPoint id = UnitDetPoint::identity(2, Field::Real);
    CHECK_THROWS_AS(TangentVec(id, HermMatrix::identity(2, Field::Real)), std::invalid_argument);
    CHECK_NOTHROW(TangentVec(id, HermMatrix::diagonal({3.0, -3.0}, Field::Real)));
}

TEST_CASE("isometry of the distance under the unit-determinant group") {
    RngStream rng(2718, 0);
    for (Field field : {Field::Real, Field::Complex}) {
        for (int d : {2, 3, 4}) {
            for (int rep = 0; rep < 30; ++rep) {
                const GroupElement g = random_unit_det(d, field, rng);
                const UnitDetPoint x = random_unit_det_point(d, field, rng);
                const UnitDetPoint y = random_unit_det_point(d, field, rng);
                const double before = distance(x, y);
                const double after = distance(group_act(g, x), group_act(g, y));
                CHECK(std::abs(after - before) <= 1e-9);
            }
        }
    }
}

TEST_CASE("projection commutes with the unit-determinant action") {
    RngStream rng(424242, 0);
    for (Field field : {Field::Real, Field::Complex}) {
        for (int rep = 0; rep < 40; ++rep) {
            const GroupElement g = random_unit_det(3, field, rng);
            const SpdPoint x = random_spd(3, field, rng);
            const UnitDetPoint lhs = project(group_act(g, x));
            const UnitDetPoint rhs = group_act(g, project(x));
            CHECK(max_entry_diff(lhs.mat().mat(), rhs.mat().mat()) <= 1e-10);
        }
    }
}

TEST_CASE("triangle inequality on random triples") {
    RngStream rng(555, 1);
    for (Field field : {Field::Real, Field::Complex}) {
        for (int rep = 0; rep < 200; ++rep) {
            const UnitDetPoint x = random_unit_det_point(2, field, rng);
            const UnitDetPoint y = random_unit_det_point(2, field, rng);
            const UnitDetPoint z = random_unit_det_point(2, field, rng);
            CHECK(distance(x, y) + distance(y, z) - distance(x, z) >= -1e-9);
        }
    }
}

TEST_CASE("geodesic midpoint is equidistant") {
    RngStream rng(808, 3);
    for (Field field : {Field::Real, Field::Complex}) {
        for (int rep = 0; rep < 40; ++rep) {
            const UnitDetPoint x = random_unit_det_point(3, field, rng);
            const UnitDetPoint y = random_unit_det_point(3, field, rng);
            const TangentVec half = TangentVec(x, log_map(x, y).mat().scaled(0.5));
            const UnitDetPoint m = exp_map(x, half);
            CHECK(std::abs(distance(x, m) - distance(m, y)) <= 1e-9);
            CHECK(std::abs(distance(x, m) + distance(m, y) - distance(x, y)) <= 1e-9);
        }
    }
}

TEST_CASE("unit-determinant construction renormalizes drift and rejects junk") {
    // Slight drift is absorbed.
    const UnitDetPoint ok(HermMatrix::diagonal({1.0 + 1e-8, 1.0}, Field::Real));
    CHECK(std::abs(det(ok.mat()) - 1.0) <= 1e-10);
    // A determinant far from 1 is a caller error.
    CHECK_THROWS_AS(UnitDetPoint(HermMatrix::diagonal({2.0, 1.0}, Field::Real)),
                    std::invalid_argument);
    // Non-positive matrices are rejected outright.
    CHECK_THROWS_AS(UnitDetPoint(HermMatrix::diagonal({-1.0, -1.0}, Field::Real)),
                    NotPositiveDefinite);
    CHECK_THROWS_AS(SpdPoint(HermMatrix::diagonal({1.0, 0.0}, Field::Real)), NotPositiveDefinite);
}

TEST_CASE("group elements reject singular matrices") {
    Mat singular(2, 2);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(GroupElement(singular, Field::Real), std::invalid_argument);
}
