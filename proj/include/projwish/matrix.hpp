// Dense linear algebra kernel for small symmetric/Hermitian matrices:
// Jacobi eigendecomposition, matrix functions, Cholesky, determinants.
// Everything here is a pure function over immutable values.

#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "projwish/field.hpp"

namespace projwish {

/// Cholesky pivot failure: the input was not positive definite.
class NotPositiveDefinite : public std::domain_error {
  public:
    explicit NotPositiveDefinite(const std::string& what) : std::domain_error(what) {}
};

/// General dense complex matrix, row-major. Used for group elements,
/// Cholesky factors and intermediate products; Hermitian values live in
/// HermMatrix which enforces its invariants at construction.
class Mat {
  public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Scalar& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    const Scalar& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    Mat operator*(const Mat& o) const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    Mat scaled(Scalar s) const;

    Mat adjoint() const;
    Scalar trace() const;
    double frobenius_norm() const;

    /// Determinant by LU factorization with partial pivoting.
    Scalar determinant() const;

    bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Scalar> a_;
};

/// d x d symmetric (real field) or Hermitian (complex field) matrix.
/// Construction averages the input with its adjoint, so entries[i][j] ==
/// conj(entries[j][i]) holds exactly and diagonal entries are real.
class HermMatrix {
  public:
    HermMatrix(int dim, Field field) : m_(dim, dim), field_(field) {
        if (dim < 1) throw std::invalid_argument("HermMatrix dimension must be >= 1");
    }

    static HermMatrix identity(int dim, Field field);
    static HermMatrix diagonal(const std::vector<double>& diag, Field field);

    /// Hermitian-enforcing factory: symmetrizes (m + m*)/2. For the real
    /// field the imaginary parts must already be negligible; they are
    /// dropped after the check.
    static HermMatrix from(const Mat& m, Field field);

    int dim() const { return m_.rows(); }
    Field field() const { return field_; }
    const Mat& mat() const { return m_; }

    Scalar operator()(int i, int j) const { return m_(i, j); }

    HermMatrix operator+(const HermMatrix& o) const;
    HermMatrix operator-(const HermMatrix& o) const;
    HermMatrix scaled(double s) const;

    double trace() const;
    bool same_shape(const HermMatrix& o) const {
        return dim() == o.dim() && field_ == o.field_;
    }

  private:
    HermMatrix(Mat m, Field field) : m_(std::move(m)), field_(field) {}
    Mat m_;
    Field field_;
};

/// Spectral factorization A = V diag(lambda) V* with real eigenvalues
/// sorted ascending and orthonormal eigenvector columns.
struct EigenDecomp {
    std::vector<double> eigenvalues;
    Mat eigenvectors;
};

/// Cyclic Jacobi eigensolver for Hermitian matrices (complex rotations in
/// the complex field). Fixed sweep order, so the output is deterministic
/// for bit-identical input. Stops when the off-diagonal Frobenius mass
/// falls below 1e-14 relative to the input norm; throws after 100 sweeps
/// without convergence.
EigenDecomp herm_eigen(const HermMatrix& a);

/// V diag(f(lambda)) V*, re-symmetrized. With require_positive_spectrum,
/// eigenvalues at or below 1e-13 * max eigenvalue are rejected.
HermMatrix matrix_function(const HermMatrix& a, const std::function<double(double)>& f,
                           bool require_positive_spectrum = false);

HermMatrix matrix_log(const HermMatrix& a);
HermMatrix matrix_exp(const HermMatrix& a);
HermMatrix matrix_sqrt(const HermMatrix& a);
HermMatrix matrix_inv_sqrt(const HermMatrix& a);
HermMatrix matrix_inverse(const HermMatrix& a);

/// Lower-triangular L with L L* = A and real positive diagonal.
/// Throws NotPositiveDefinite on a non-positive pivot.
Mat cholesky(const HermMatrix& a);

/// Determinant of a Hermitian matrix; real by construction. Uses the
/// Cholesky diagonal product when positive definite, the eigenvalue
/// product otherwise.
double det(const HermMatrix& a);

double frobenius_norm(const HermMatrix& a);

}  // namespace projwish
