#include "projwish/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace projwish {

namespace {

void require_same_shape(const Mat& a, const Mat& b, const char* op) {
    if (!a.same_shape(b)) throw std::invalid_argument(std::string("shape mismatch in ") + op);
}

double off_diagonal_norm(const Mat& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace

Mat Mat::operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("shape mismatch in matrix product");
    Mat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const Scalar aik = (*this)(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
        }
    }
    return r;
}

Mat Mat::operator+(const Mat& o) const {
    require_same_shape(*this, o, "matrix sum");
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    require_same_shape(*this, o, "matrix difference");
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

Mat Mat::scaled(Scalar s) const {
    Mat r(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
}

Mat Mat::adjoint() const {
    Mat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
    return r;
}

Scalar Mat::trace() const {
    if (rows_ != cols_) throw std::invalid_argument("trace of a non-square matrix");
    Scalar t = 0.0;
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

double Mat::frobenius_norm() const {
    double s = 0.0;
    for (const Scalar& v : a_) s += std::norm(v);
    return std::sqrt(s);
}

Scalar Mat::determinant() const {
    if (rows_ != cols_) throw std::invalid_argument("determinant of a non-square matrix");
    const int n = rows_;
    Mat lu = *this;
    Scalar detv = 1.0;
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::abs(lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double m = std::abs(lu(i, k));
            if (m > best) {
                best = m;
                pivot = i;
            }
        }
        if (best == 0.0) return 0.0;
        if (pivot != k) {
            for (int j = 0; j < n; ++j) std::swap(lu(k, j), lu(pivot, j));
            detv = -detv;
        }
        detv *= lu(k, k);
        for (int i = k + 1; i < n; ++i) {
            const Scalar factor = lu(i, k) / lu(k, k);
            for (int j = k + 1; j < n; ++j) lu(i, j) -= factor * lu(k, j);
        }
    }
    return detv;
}

HermMatrix HermMatrix::identity(int dim, Field field) {
    return HermMatrix(Mat::identity(dim), field);
}

HermMatrix HermMatrix::diagonal(const std::vector<double>& diag, Field field) {
    Mat m(static_cast<int>(diag.size()), static_cast<int>(diag.size()));
    for (size_t i = 0; i < diag.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = diag[i];
    return HermMatrix(std::move(m), field);
}

HermMatrix HermMatrix::from(const Mat& m, Field field) {
    if (m.rows() != m.cols()) throw std::invalid_argument("Hermitian matrix must be square");
    const int d = m.rows();
    Mat h(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    if (field == Field::Real) {
        double worst = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) worst = std::max(worst, std::abs(h(i, j).imag()));
        if (worst > 1e-9 * std::max(1.0, h.frobenius_norm()))
            throw std::invalid_argument("real-field matrix has a non-negligible imaginary part");
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) h(i, j) = Scalar(h(i, j).real(), 0.0);
    } else {
        // Averaging already makes the diagonal exactly real.
        for (int i = 0; i < d; ++i) h(i, i) = Scalar(h(i, i).real(), 0.0);
    }
    return HermMatrix(std::move(h), field);
}

HermMatrix HermMatrix::operator+(const HermMatrix& o) const {
    if (!same_shape(o)) throw std::invalid_argument("shape/field mismatch in Hermitian sum");
    return HermMatrix(m_ + o.m_, field_);
}

HermMatrix HermMatrix::operator-(const HermMatrix& o) const {
    if (!same_shape(o)) throw std::invalid_argument("shape/field mismatch in Hermitian difference");
    return HermMatrix(m_ - o.m_, field_);
}

HermMatrix HermMatrix::scaled(double s) const { return HermMatrix(m_.scaled(s), field_); }

double HermMatrix::trace() const { return m_.trace().real(); }

EigenDecomp herm_eigen(const HermMatrix& a) {
    const int d = a.dim();
    Mat work = a.mat();
    Mat vec = Mat::identity(d);

    const double anorm = work.frobenius_norm();
    const double stop = 1e-14 * std::max(1.0, anorm);
    constexpr int kMaxSweeps = 100;

    bool converged = false;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        if (off_diagonal_norm(work) <= stop) {
            converged = true;
            break;
        }
        for (int p = 0; p < d - 1; ++p) {
            for (int q = p + 1; q < d; ++q) {
                const Scalar apq = work(p, q);
                const double mag = std::abs(apq);
                if (mag == 0.0) continue;

                // Unitary plane rotation annihilating the (p,q) entry:
                // a phase factor reduces the 2x2 block to a real symmetric
                // one, then a classical Jacobi rotation applies.
                const Scalar phase = apq / mag;
                const double app = work(p, p).real();
                const double aqq = work(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = tau >= 0.0 ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                            : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                const Scalar upp = c;
                const Scalar upq = s;
                const Scalar uqp = -s * std::conj(phase);
                const Scalar uqq = c * std::conj(phase);

                for (int j = 0; j < d; ++j) {
                    const Scalar rp = std::conj(upp) * work(p, j) + std::conj(uqp) * work(q, j);
                    const Scalar rq = std::conj(upq) * work(p, j) + std::conj(uqq) * work(q, j);
                    work(p, j) = rp;
                    work(q, j) = rq;
                }
                for (int i = 0; i < d; ++i) {
                    const Scalar cp = work(i, p) * upp + work(i, q) * uqp;
                    const Scalar cq = work(i, p) * upq + work(i, q) * uqq;
                    work(i, p) = cp;
                    work(i, q) = cq;
                }
                work(p, q) = 0.0;
                work(q, p) = 0.0;
                work(p, p) = Scalar(work(p, p).real(), 0.0);
                work(q, q) = Scalar(work(q, q).real(), 0.0);

                for (int i = 0; i < d; ++i) {
                    const Scalar vp = vec(i, p) * upp + vec(i, q) * uqp;
                    const Scalar vq = vec(i, p) * upq + vec(i, q) * uqq;
                    vec(i, p) = vp;
                    vec(i, q) = vq;
                }
            }
        }
    }
    if (!converged && off_diagonal_norm(work) > stop) {
        std::ostringstream msg;
        msg << "Jacobi eigensolver did not converge after " << kMaxSweeps
            << " sweeps; off-diagonal residual " << off_diagonal_norm(work);
        throw std::runtime_error(msg.str());
    }

    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return work(i, i).real() < work(j, j).real(); });

    EigenDecomp out;
    out.eigenvalues.resize(d);
    out.eigenvectors = Mat(d, d);
    for (int j = 0; j < d; ++j) {
        out.eigenvalues[j] = work(order[j], order[j]).real();
        for (int i = 0; i < d; ++i) out.eigenvectors(i, j) = vec(i, order[j]);
    }
    return out;
}

HermMatrix matrix_function(const HermMatrix& a, const std::function<double(double)>& f,
                           bool require_positive_spectrum) {
    const EigenDecomp e = herm_eigen(a);
    if (require_positive_spectrum) {
        const double top = e.eigenvalues.back();
        const double floor = 1e-13 * std::max(top, 0.0);
        if (e.eigenvalues.front() <= floor) {
            std::ostringstream msg;
            msg << "matrix function requires a positive spectrum; smallest eigenvalue "
                << e.eigenvalues.front() << " is at or below the floor " << floor;
            throw std::domain_error(msg.str());
        }
    }
    const int d = a.dim();
    Mat scaled_vec(d, d);
    for (int j = 0; j < d; ++j) {
        const double fj = f(e.eigenvalues[j]);
        for (int i = 0; i < d; ++i) scaled_vec(i, j) = e.eigenvectors(i, j) * fj;
    }
    return HermMatrix::from(scaled_vec * e.eigenvectors.adjoint(), a.field());
}

HermMatrix matrix_log(const HermMatrix& a) {
    return matrix_function(a, [](double x) { return std::log(x); }, true);
}

HermMatrix matrix_exp(const HermMatrix& a) {
    return matrix_function(a, [](double x) { return std::exp(x); });
}

HermMatrix matrix_sqrt(const HermMatrix& a) {
    return matrix_function(a, [](double x) { return std::sqrt(x); }, true);
}

HermMatrix matrix_inv_sqrt(const HermMatrix& a) {
    return matrix_function(a, [](double x) { return 1.0 / std::sqrt(x); }, true);
}

HermMatrix matrix_inverse(const HermMatrix& a) {
    return matrix_function(a, [](double x) { return 1.0 / x; }, true);
}

Mat cholesky(const HermMatrix& a) {
    const int d = a.dim();
    const Mat& m = a.mat();
    Mat l(d, d);
    for (int j = 0; j < d; ++j) {
        double pivot = m(j, j).real();
        for (int k = 0; k < j; ++k) pivot -= std::norm(l(j, k));
        if (!(pivot > 0.0)) {
            std::ostringstream msg;
            msg << "Cholesky pivot " << pivot << " at index " << j << ": input is not positive definite";
            throw NotPositiveDefinite(msg.str());
        }
        const double diag = std::sqrt(pivot);
        l(j, j) = diag;
        for (int i = j + 1; i < d; ++i) {
            Scalar s = m(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
            l(i, j) = s / diag;
        }
    }
    return l;
}

double det(const HermMatrix& a) {
    try {
        const Mat l = cholesky(a);
        double root = 1.0;
        for (int i = 0; i < a.dim(); ++i) root *= l(i, i).real();
        return root * root;
    } catch (const NotPositiveDefinite&) {
        const EigenDecomp e = herm_eigen(a);
        double p = 1.0;
        for (double lambda : e.eigenvalues) p *= lambda;
        return p;
    }
}

double frobenius_norm(const HermMatrix& a) { return a.mat().frobenius_norm(); }

}  // namespace projwish
