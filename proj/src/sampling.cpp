#include "projwish/sampling.hpp"

#include <cmath>
#include <sstream>

namespace projwish {

namespace {

void require_degrees_of_freedom(const WishartParams& p) {
    if (p.n < p.dim()) {
        std::ostringstream msg;
        msg << "Wishart sampling requires n >= d for positive definite samples (n = " << p.n
            << ", d = " << p.dim() << ")";
        throw std::invalid_argument(msg.str());
    }
}

std::vector<Scalar> standard_vector(int dim, Field field, RngStream& rng) {
    std::vector<Scalar> z(dim);
    for (int i = 0; i < dim; ++i) z[i] = rng.next_standard_scalar(field);
    return z;
}

std::vector<Scalar> lower_triangular_apply(const Mat& l, const std::vector<Scalar>& z) {
    const int d = l.rows();
    std::vector<Scalar> y(d, Scalar(0.0));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= i; ++j) y[i] += l(i, j) * z[j];
    return y;
}

}  // namespace

WishartParams::WishartParams(SpdPoint sigma_in, int n_in, Field field_in)
    : sigma(std::move(sigma_in)), n(n_in), field(field_in) {
    if (n < 1) throw std::invalid_argument("Wishart degrees of freedom must be >= 1");
    if (sigma.field() != field)
        throw std::invalid_argument("WishartParams field does not match sigma's field");
}

std::vector<Scalar> sample_gaussian(const SpdPoint& sigma, Field field, RngStream& rng) {
    if (field != sigma.field()) throw std::invalid_argument("field mismatch in Gaussian sampling");
    const Mat l = cholesky(sigma.mat());
    return lower_triangular_apply(l, standard_vector(sigma.dim(), field, rng));
}

SpdPoint sample_wishart(const WishartParams& p, RngStream& rng) {
    require_degrees_of_freedom(p);
    const int d = p.dim();
    const Mat l = cholesky(p.sigma.mat());
    Mat sum(d, d);
    for (int draw = 0; draw < p.n; ++draw) {
        const std::vector<Scalar> y = lower_triangular_apply(l, standard_vector(d, p.field, rng));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) sum(i, j) += y[i] * std::conj(y[j]);
    }
    return SpdPoint(HermMatrix::from(sum, p.field));
}

UnitDetPoint sample_projective_wishart(const WishartParams& p, RngStream& rng) {
    return project(sample_wishart(p, rng));
}

GroupElement sample_stabilizer(Field field, int dim, RngStream& rng) {
    if (dim < 2) throw std::invalid_argument("stabilizer sampling requires d >= 2");

    Mat g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g(i, j) = rng.next_standard_scalar(field);

    // Modified Gram-Schmidt; columns become orthonormal.
    Mat q(dim, dim);
    std::vector<Scalar> r_diag(dim);
    for (int j = 0; j < dim; ++j) {
        std::vector<Scalar> col(dim);
        for (int i = 0; i < dim; ++i) col[i] = g(i, j);
        for (int k = 0; k < j; ++k) {
            Scalar proj = 0.0;
            for (int i = 0; i < dim; ++i) proj += std::conj(q(i, k)) * col[i];
            for (int i = 0; i < dim; ++i) col[i] -= proj * q(i, k);
        }
        double norm = 0.0;
        for (int i = 0; i < dim; ++i) norm += std::norm(col[i]);
        norm = std::sqrt(norm);
        if (norm < 1e-300) throw std::runtime_error("degenerate Gaussian matrix in Haar sampling");
        for (int i = 0; i < dim; ++i) q(i, j) = col[i] / norm;
        // Phase of the implicit R diagonal, used for the Haar correction.
        Scalar diag = 0.0;
        for (int i = 0; i < dim; ++i) diag += std::conj(q(i, j)) * g(i, j);
        r_diag[j] = diag;
    }

    // Multiply each column by the phase of its R pivot so the draw is Haar
    // over the full orthogonal/unitary group.
    for (int j = 0; j < dim; ++j) {
        const double mag = std::abs(r_diag[j]);
        const Scalar phase = mag > 0.0 ? r_diag[j] / mag : Scalar(1.0);
        for (int i = 0; i < dim; ++i) q(i, j) *= phase;
    }

    // Fix the determinant through the last column: sign flip for SO_d,
    // conjugate phase for SU_d.
    const Scalar detq = q.determinant();
    const Scalar correction = std::conj(detq) / std::abs(detq);
    for (int i = 0; i < dim; ++i) q(i, dim - 1) *= correction;

    return GroupElement(std::move(q), field);
}

GroupElement conjugate_stabilizer(const GroupElement& r, const SpdPoint& sigma) {
    if (r.dim() != sigma.dim() || r.field() != sigma.field())
        throw std::invalid_argument("dimension/field mismatch in stabilizer conjugation");
    const double ortho = (r.mat() * r.mat().adjoint() - Mat::identity(r.dim())).frobenius_norm();
    if (ortho > 1e-8)
        throw std::invalid_argument("stabilizer conjugation requires an orthonormal input, ||RR* - I|| = " +
                                    std::to_string(ortho));
    if (std::abs(r.determinant() - Scalar(1.0)) > 1e-8)
        throw std::invalid_argument("stabilizer conjugation requires det R = 1");
    const HermMatrix sq = matrix_sqrt(sigma.mat());
    const HermMatrix isq = matrix_inv_sqrt(sigma.mat());
    return GroupElement(sq.mat() * r.mat() * isq.mat(), sigma.field());
}

SpdPoint random_spd(int dim, Field field, RngStream& rng) {
    const GroupElement r = sample_stabilizer(field, dim, rng);
    Mat d(dim, dim);
    for (int i = 0; i < dim; ++i) d(i, i) = std::exp(2.0 * rng.next_uniform() - 1.0);
    return SpdPoint(HermMatrix::from(r.mat() * d * r.mat().adjoint(), field));
}

GroupElement random_unit_det(int dim, Field field, RngStream& rng) {
    const GroupElement r1 = sample_stabilizer(field, dim, rng);
    const GroupElement r2 = sample_stabilizer(field, dim, rng);
    std::vector<double> u(dim);
    double mean = 0.0;
    for (int i = 0; i < dim; ++i) {
        u[i] = 2.4 * rng.next_uniform() - 1.2;
        mean += u[i];
    }
    mean /= dim;
    Mat d(dim, dim);
    for (int i = 0; i < dim; ++i) d(i, i) = std::exp(u[i] - mean);
    return GroupElement(r1.mat() * d * r2.mat(), field);
}

}  // namespace projwish
