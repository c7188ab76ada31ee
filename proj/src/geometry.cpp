#include "projwish/geometry.hpp"

#include <cmath>
#include <sstream>

namespace projwish {

namespace {

void require_compatible(const HermMatrix& a, const HermMatrix& b, const char* op) {
    if (!a.same_shape(b)) throw std::invalid_argument(std::string("dimension/field mismatch in ") + op);
}

bool bitwise_equal(const Mat& a, const Mat& b) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

}  // namespace

SpdPoint::SpdPoint(HermMatrix m) : mat_(std::move(m)) {
    cholesky(mat_);  // positive definiteness check; throws otherwise
}

SpdPoint SpdPoint::identity(int dim, Field field) {
    return SpdPoint(HermMatrix::identity(dim, field));
}

UnitDetPoint::UnitDetPoint(HermMatrix m) : mat_(std::move(m)) {
    cholesky(mat_);
    const double d = det(mat_);
    if (!(std::abs(d - 1.0) <= 1e-6)) {
        std::ostringstream msg;
        msg << "determinant " << d << " deviates from 1 beyond the 1e-6 tolerance;"
            << " project the point first";
        throw std::invalid_argument(msg.str());
    }
    // Below 1e-13 the factor is a no-op up to rounding; skipping it keeps
    // reconstruction of an already-normalized point bitwise stable.
    if (std::abs(d - 1.0) > 1e-13) {
        mat_ = mat_.scaled(std::exp(-std::log(d) / mat_.dim()));
    }
}

UnitDetPoint UnitDetPoint::identity(int dim, Field field) {
    return UnitDetPoint(HermMatrix::identity(dim, field));
}

TangentVec::TangentVec(UnitDetPoint base, HermMatrix m) : base_(std::move(base)), mat_(std::move(m)) {
    require_compatible(base_.mat(), mat_, "tangent vector");
    const double t = (matrix_inverse(base_.mat()).mat() * mat_.mat()).trace().real();
    if (std::abs(t) > 1e-10 * std::max(1.0, frobenius_norm(mat_))) {
        std::ostringstream msg;
        msg << "tangent vector is not trace-compatible with the determinant-1 slice:"
            << " trace(base^{-1} v) = " << t;
        throw std::invalid_argument(msg.str());
    }
}

GroupElement::GroupElement(Mat m, Field field) : mat_(std::move(m)), field_(field) {
    if (mat_.rows() != mat_.cols()) throw std::invalid_argument("group element must be square");
    if (field_ == Field::Real) {
        for (int i = 0; i < mat_.rows(); ++i)
            for (int j = 0; j < mat_.cols(); ++j)
                if (std::abs(mat_(i, j).imag()) > 1e-12 * std::max(1.0, mat_.frobenius_norm()))
                    throw std::invalid_argument("real-field group element has complex entries");
    }
    det_ = mat_.determinant();
    if (std::abs(det_) < 1e-300) throw std::invalid_argument("group element is singular");
    unit_det_ = std::abs(det_ - Scalar(1.0)) <= 1e-10;
}

UnitDetPoint project(const SpdPoint& x) {
    const double d = det(x.mat());
    return UnitDetPoint(x.mat().scaled(std::exp(-std::log(d) / x.dim())));
}

std::pair<UnitDetPoint, double> theta(const SpdPoint& x) {
    return {project(x), std::log(det(x.mat()))};
}

SpdPoint theta_inverse(const UnitDetPoint& x, double t) {
    return SpdPoint(x.mat().scaled(std::exp(t / x.dim())));
}

SpdPoint group_act(const GroupElement& g, const SpdPoint& x) {
    if (g.dim() != x.dim() || g.field() != x.field())
        throw std::invalid_argument("dimension/field mismatch in group action");
    return SpdPoint(HermMatrix::from(g.mat() * x.mat().mat() * g.mat().adjoint(), x.field()));
}

UnitDetPoint group_act(const GroupElement& g, const UnitDetPoint& x) {
    if (g.dim() != x.dim() || g.field() != x.field())
        throw std::invalid_argument("dimension/field mismatch in group action");
    if (!g.unit_det())
        throw std::invalid_argument(
            "group element must have unit determinant to act on the determinant-1 slice");
    return UnitDetPoint(HermMatrix::from(g.mat() * x.mat().mat() * g.mat().adjoint(), x.field()));
}

double distance(const UnitDetPoint& x, const UnitDetPoint& y, double scale) {
    require_compatible(x.mat(), y.mat(), "distance");
    if (!(scale > 0.0)) throw std::invalid_argument("distance scale must be positive");
    if (bitwise_equal(x.mat().mat(), y.mat().mat())) return 0.0;
    const HermMatrix isq = matrix_inv_sqrt(x.mat());
    const HermMatrix m = HermMatrix::from(isq.mat() * y.mat().mat() * isq.mat(), x.field());
    const EigenDecomp e = herm_eigen(m);
    double s = 0.0;
    for (double lambda : e.eigenvalues) {
        if (!(lambda > 0.0)) throw std::domain_error("whitened matrix lost positive definiteness");
        const double l = std::log(lambda);
        s += l * l;
    }
    return scale * std::sqrt(s);
}

double distance_to_identity_eigen(const UnitDetPoint& x, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("distance scale must be positive");
    const EigenDecomp e = herm_eigen(x.mat());
    double s = 0.0;
    for (double lambda : e.eigenvalues) {
        const double l = std::log(lambda);
        s += l * l;
    }
    return scale * std::sqrt(s);
}

TangentVec log_map(const UnitDetPoint& x, const UnitDetPoint& y) {
    require_compatible(x.mat(), y.mat(), "log_map");
    const HermMatrix sq = matrix_sqrt(x.mat());
    const HermMatrix isq = matrix_inv_sqrt(x.mat());
    const HermMatrix w = matrix_log(HermMatrix::from(isq.mat() * y.mat().mat() * isq.mat(), x.field()));
    return TangentVec(x, HermMatrix::from(sq.mat() * w.mat() * sq.mat(), x.field()));
}

UnitDetPoint exp_map(const UnitDetPoint& x, const TangentVec& v) {
    const double drift = (v.base().mat() - x.mat()).mat().frobenius_norm();
    if (drift > 1e-12 * std::max(1.0, frobenius_norm(x.mat())))
        throw std::invalid_argument("tangent vector is based at a different point");
    const HermMatrix sq = matrix_sqrt(x.mat());
    const HermMatrix isq = matrix_inv_sqrt(x.mat());
    const HermMatrix w = matrix_exp(HermMatrix::from(isq.mat() * v.mat().mat() * isq.mat(), x.field()));
    return UnitDetPoint(HermMatrix::from(sq.mat() * w.mat() * sq.mat(), x.field()));
}

double tangent_norm(const TangentVec& v, double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("distance scale must be positive");
    const HermMatrix isq = matrix_inv_sqrt(v.base().mat());
    return scale * (isq.mat() * v.mat().mat() * isq.mat()).frobenius_norm();
}

}  // namespace projwish
