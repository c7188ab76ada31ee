#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "projwish/sampling.hpp"
#include "projwish/stats.hpp"
#include "test_helpers.hpp"

using namespace projwish;
using namespace projwish::testing;

TEST_CASE("Gaussian draws reproduce the covariance") {
    for (Field field : {Field::Real, Field::Complex}) {
        RngStream rng(42, 0);
        const SpdPoint sigma = SpdPoint::identity(2, field);
        const int n = 100000;
        Mat cov(2, 2);
        for (int i = 0; i < n; ++i) {
            const auto y = sample_gaussian(sigma, field, rng);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) cov(a, b) += y[a] * std::conj(y[b]);
        }
        cov = cov.scaled(1.0 / n);
        CHECK(max_entry_diff(cov, Mat::identity(2)) <= 0.05);
    }
}

TEST_CASE("Gaussian first-coordinate variance follows sigma") {
    RngStream rng(7, 1);
    const SpdPoint sigma(HermMatrix::diagonal({4.0, 1.0}, Field::Real));
    const int n = 100000;
    double var = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto y = sample_gaussian(sigma, Field::Real, rng);
        var += y[0].real() * y[0].real();
    }
    var /= n;
    CHECK(std::abs(var - 4.0) <= 0.15);
}

TEST_CASE("fixed seeds reproduce identical draws") {
    for (Field field : {Field::Real, Field::Complex}) {
        RngStream a(123, 9);
        RngStream b(123, 9);
        const SpdPoint sigma = random_spd(3, field, a);
        const SpdPoint sigma2 = random_spd(3, field, b);
        CHECK(max_entry_diff(sigma.mat().mat(), sigma2.mat().mat()) == 0.0);
        for (int rep = 0; rep < 5; ++rep) {
            const auto ya = sample_gaussian(sigma, field, a);
            const auto yb = sample_gaussian(sigma2, field, b);
            for (int i = 0; i < 3; ++i) {
                CHECK(ya[i].real() == yb[i].real());
                CHECK(ya[i].imag() == yb[i].imag());
            }
        }
    }
}

TEST_CASE("Wishart mean is n sigma") {
    RngStream rng(99, 0);
    const WishartParams p(SpdPoint::identity(2, Field::Real), 5, Field::Real);
    const int n = 100000;
    Mat mean(2, 2);
    for (int i = 0; i < n; ++i) mean = mean + sample_wishart(p, rng).mat().mat();
    mean = mean.scaled(1.0 / n);
    CHECK(max_entry_diff(mean, Mat::identity(2).scaled(5.0)) <= 0.1);
}

TEST_CASE("Wishart requires n >= d") {
    RngStream rng(1, 0);
    const WishartParams p(SpdPoint::identity(2, Field::Real), 1, Field::Real);
    CHECK_THROWS_AS(sample_wishart(p, rng), std::invalid_argument);
    CHECK_THROWS_AS(WishartParams(SpdPoint::identity(2, Field::Real), 0, Field::Real),
                    std::invalid_argument);
}

TEST_CASE("Wishart determinant mean matches an independent simulation") {
    // Library sampler, 1e5 draws.
    RngStream rng(2025, 0);
    const WishartParams p(SpdPoint::identity(2, Field::Real), 2, Field::Real);
    const int n_lib = 100000;
    double lib_mean = 0.0, lib_sq = 0.0;
    for (int i = 0; i < n_lib; ++i) {
        const double d = det(sample_wishart(p, rng).mat());
        lib_mean += d;
        lib_sq += d * d;
    }
    lib_mean /= n_lib;
    const double lib_se = std::sqrt((lib_sq / n_lib - lib_mean * lib_mean) / n_lib);

    // Oracle: direct simulation from the definition with a different
    // generator (mt19937_64), 1e6 draws.
    std::mt19937_64 gen(7777);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int n_oracle = 1000000;
    double oracle_mean = 0.0, oracle_sq = 0.0;
    for (int i = 0; i < n_oracle; ++i) {
        double a = 0.0, b = 0.0, c = 0.0;
        for (int rep = 0; rep < 2; ++rep) {
            const double y0 = normal(gen);
            const double y1 = normal(gen);
            a += y0 * y0;
            b += y0 * y1;
            c += y1 * y1;
        }
        const double d = a * c - b * b;
        oracle_mean += d;
        oracle_sq += d * d;
    }
    oracle_mean /= n_oracle;
    const double oracle_se = std::sqrt((oracle_sq / n_oracle - oracle_mean * oracle_mean) / n_oracle);

    const double gap = std::abs(lib_mean - oracle_mean);
    CHECK(gap <= 3.0 * std::sqrt(lib_se * lib_se + oracle_se * oracle_se));
    // Sanity anchor: E det = n (n - 1) det(Sigma) = 2 for d = 2, n = 2.
    CHECK(std::abs(oracle_mean - 2.0) <= 5.0 * oracle_se);
}

TEST_CASE("projective samples carry determinant 1") {
    RngStream rng(55, 0);
    for (Field field : {Field::Real, Field::Complex}) {
        const WishartParams p(SpdPoint::identity(3, field), 5, field);
        for (int i = 0; i < 200; ++i) {
            const UnitDetPoint x = sample_projective_wishart(p, rng);
            CHECK(std::abs(det(x.mat()) - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("projection kills the scale of sigma exactly under a shared seed") {
    for (Field field : {Field::Real, Field::Complex}) {
        const WishartParams p1(SpdPoint::identity(2, field), 5, field);
        const WishartParams p2(SpdPoint(HermMatrix::diagonal({3.7, 3.7}, field)), 5, field);
        RngStream a(31337, 2);
        RngStream b(31337, 2);
        for (int i = 0; i < 50; ++i) {
            const UnitDetPoint xa = sample_projective_wishart(p1, a);
            const UnitDetPoint xb = sample_projective_wishart(p2, b);
            CHECK(max_entry_diff(xa.mat().mat(), xb.mat().mat()) <= 1e-12);
        }
    }
}

TEST_CASE("scale equivariance at the sample level for diagonal maps") {
    // With Y = L z and Cholesky, a positive diagonal A satisfies
    // chol(A Sigma A*) = A chol(Sigma), so shared seeds commute with the
    // action sample by sample.
    for (Field field : {Field::Real, Field::Complex}) {
        Mat a_mat(2, 2);
        a_mat(0, 0) = 2.0;
        a_mat(1, 1) = 0.25;
        const GroupElement a_diag(a_mat, field);

        const SpdPoint sigma = SpdPoint::identity(2, field);
        const SpdPoint sigma_moved = group_act(a_diag, sigma);
        const WishartParams p(sigma, 4, field);
        const WishartParams p_moved(sigma_moved, 4, field);

        RngStream r1(8080, 5);
        RngStream r2(8080, 5);
        for (int i = 0; i < 50; ++i) {
            const SpdPoint x = sample_wishart(p, r1);
            const SpdPoint x_moved = sample_wishart(p_moved, r2);
            const UnitDetPoint lhs = project(group_act(a_diag, x));
            const UnitDetPoint rhs = project(x_moved);
            CHECK(max_entry_diff(lhs.mat().mat(), rhs.mat().mat()) <= 1e-12);
        }
    }
}

TEST_CASE("Haar stabilizer draws are orthonormal with unit determinant") {
    RngStream rng(4242, 0);
    for (Field field : {Field::Real, Field::Complex}) {
        for (int d : {2, 3, 4}) {
            for (int rep = 0; rep < 100; ++rep) {
                const GroupElement r = sample_stabilizer(field, d, rng);
                CHECK((r.mat() * r.mat().adjoint() - Mat::identity(d)).frobenius_norm() <= 1e-10);
                CHECK(std::abs(r.determinant() - Scalar(1.0)) <= 1e-10);
            }
        }
    }
}

TEST_CASE("stabilizer of the identity fixes it") {
    RngStream rng(5, 0);
    const GroupElement r = sample_stabilizer(Field::Complex, 3, rng);
    const UnitDetPoint id = UnitDetPoint::identity(3, Field::Complex);
    CHECK(max_entry_diff(group_act(r, id).mat().mat(), Mat::identity(3)) <= 1e-10);
}

TEST_CASE("Haar symmetry: first entry has zero mean") {
    RngStream rng(616, 0);
    const int n = 100000;
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += sample_stabilizer(Field::Real, 2, rng).mat()(0, 0).real();
    mean /= n;
    // Sign symmetry of the Haar measure forces a zero mean; 0.01 is a
    // comfortable 3-sigma band at this sample count.
    CHECK(std::abs(mean) <= 0.01);
}

TEST_CASE("conjugated stabilizer fixes sigma") {
    RngStream rng(303, 1);
    for (Field field : {Field::Real, Field::Complex}) {
        const SpdPoint sigma = random_spd(2, field, rng);
        const UnitDetPoint sigma_bar = project(sigma);

        const GroupElement r0 = sample_stabilizer(field, 2, rng);
        const GroupElement r_id = conjugate_stabilizer(r0, SpdPoint::identity(2, field));
        CHECK(max_entry_diff(r_id.mat(), r0.mat()) <= 1e-12);

        for (int rep = 0; rep < 50; ++rep) {
            const GroupElement rs =
                conjugate_stabilizer(sample_stabilizer(field, 2, rng), sigma);
            CHECK(std::abs(rs.determinant() - Scalar(1.0)) <= 1e-10);
            const SpdPoint moved = group_act(rs, sigma);
            CHECK(max_entry_diff(moved.mat().mat(), sigma.mat().mat()) <= 1e-9);
            CHECK(max_entry_diff(group_act(rs, sigma_bar).mat().mat(), sigma_bar.mat().mat()) <=
                  1e-9);

            const UnitDetPoint x = random_unit_det_point(2, field, rng);
            CHECK(std::abs(distance(group_act(rs, x), sigma_bar) - distance(x, sigma_bar)) <= 1e-9);
        }
    }
}

TEST_CASE("conjugation rejects non-orthonormal input") {
    RngStream rng(1, 1);
    const SpdPoint sigma = SpdPoint::identity(2, Field::Real);
    Mat shear(2, 2);
    shear(0, 0) = 1.0;
    shear(0, 1) = 0.5;
    shear(1, 1) = 1.0;
    CHECK_THROWS_AS(conjugate_stabilizer(GroupElement(shear, Field::Real), sigma),
                    std::invalid_argument);
}

TEST_CASE("streams are reproducible and pairwise decorrelated") {
    RngStream a1(99, 1), a2(99, 1);
    for (int i = 0; i < 1000; ++i) CHECK(a1.next_u64() == a2.next_u64());

    // Lag correlation between distinct streams of the same seed.
    RngStream s0(99, 0), s1(99, 1);
    const int n = 100000;
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        const double x = s0.next_uniform();
        const double y = s1.next_uniform();
        sx += x;
        sy += y;
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
    }
    const double cov = sxy / n - (sx / n) * (sy / n);
    const double rho = cov / std::sqrt((sxx / n - (sx / n) * (sx / n)) *
                                       (syy / n - (sy / n) * (sy / n)));
    CHECK(std::abs(rho) < 0.01);
}

TEST_CASE("pushforward by the stabilizer preserves the law (Lemma 1 forms)") {
    const Field field = Field::Real;
    const SpdPoint sigma(HermMatrix::from(herm2x2(2.0, 0.7, 1.0, field), field));
    const UnitDetPoint sigma_bar = project(sigma);
    const WishartParams p(sigma, 5, field);

    RngStream group_rng(14, 100);
    const GroupElement r_sigma =
        conjugate_stabilizer(sample_stabilizer(field, 2, group_rng), sigma);

    // Deterministic form: the distance multiset is preserved bin for bin.
    RngStream rng(14, 0);
    std::vector<double> base, moved;
    for (int i = 0; i < 2000; ++i) {
        const UnitDetPoint x = sample_projective_wishart(p, rng);
        base.push_back(distance(x, sigma_bar));
        moved.push_back(distance(group_act(r_sigma, x), sigma_bar));
    }
    auto sorted_base = base;
    auto sorted_moved = moved;
    std::sort(sorted_base.begin(), sorted_base.end());
    std::sort(sorted_moved.begin(), sorted_moved.end());
    double worst = 0.0;
    for (size_t i = 0; i < sorted_base.size(); ++i)
        worst = std::max(worst, std::abs(sorted_base[i] - sorted_moved[i]));
    CHECK(worst <= 1e-9);

    // Statistical form: two-sample KS on the first diagonal entry.
    RngStream rng_b(14, 1);
    std::vector<double> diag_a, diag_b;
    for (int i = 0; i < 10000; ++i) {
        diag_a.push_back(sample_projective_wishart(p, rng).mat()(0, 0).real());
        diag_b.push_back(
            group_act(r_sigma, sample_projective_wishart(p, rng_b)).mat()(0, 0).real());
    }
    const KsResult ks = ks_two_sample(diag_a, diag_b);
    CHECK(ks.p_value >= 0.01);
}
