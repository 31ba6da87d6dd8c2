#pragma once

// Dense products, norms, and the factorization kernels every other module
// builds on: Householder-QR, Cholesky, polar, triangular solves.

#include <vector>

#include "ortho/matrix.hpp"

namespace ortho {

// ---- products ---------------------------------------------------------------

/// a * b
template <class T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b);

/// a^H * b
template <class T>
Matrix<T> matmul_ah(const Matrix<T>& a, const Matrix<T>& b);

/// c = alpha * a * b + beta * c
template <class T>
void gemm(Matrix<T>& c, T alpha, const Matrix<T>& a, const Matrix<T>& b, T beta);

/// c = alpha * a^H * b + beta * c
template <class T>
void gemm_ah(Matrix<T>& c, T alpha, const Matrix<T>& a, const Matrix<T>& b, T beta);

/// Euclidean norm of n contiguous entries, scaled to avoid over/underflow.
template <class T>
double nrm2(Index n, const T* x);

// ---- spectral quantities (SVD based) ----------------------------------------

/// Singular values in descending order. Throws ConvergenceError.
template <class T>
std::vector<double> singular_values(const Matrix<T>& a);

/// Spectral norm; 0 for an empty matrix.
template <class T>
double norm2(const Matrix<T>& a);

/// sigma_max / sigma_min; +inf when sigma_min is zero.
template <class T>
double cond2(const Matrix<T>& a);

/// ||q^H q - I||_2
template <class T>
double orthonormality_defect(const Matrix<T>& q);

// ---- factorizations ---------------------------------------------------------

template <class T>
struct QRPair {
  Matrix<T> q;  ///< m x n, orthonormal columns
  Matrix<T> r;  ///< n x n upper triangular, exact zeros below the diagonal
};

/// Column-wise Householder-QR of an m x n matrix (m >= n) with an explicitly
/// formed thin Q. With nonneg_diag, column phases are moved from R into Q so
/// every R(j, j) is real and nonnegative.
template <class T>
QRPair<T> householder_qr(const Matrix<T>& a, bool nonneg_diag = false);

/// Lower-triangular L with a = L L^H. The input is symmetrized first; a
/// non-positive pivot throws NotPositiveDefinite carrying the step index.
template <class T>
Matrix<T> cholesky(const Matrix<T>& a);

template <class T>
struct PolarPair {
  Matrix<T> unitary;
  Matrix<T> hermitian;  ///< positive semidefinite
};

/// a = unitary * hermitian, computed from a full SVD.
template <class T>
PolarPair<T> polar(const Matrix<T>& a);

enum class Uplo { Upper, Lower };
enum class Op { None, ConjTrans };
enum class Side { Left, Right };
enum class Diag { NonUnit, Unit };

/// Solves op(t) x = b (Side::Left) or x op(t) = b (Side::Right) for triangular t.
/// Throws SingularError on an exactly zero diagonal entry.
template <class T>
Matrix<T> tri_solve(const Matrix<T>& t, const Matrix<T>& b, Uplo uplo, Op op = Op::None, Side side = Side::Left,
                    Diag diag = Diag::NonUnit);

/// LU with partial (row) pivoting, kept in packed LAPACK form.
template <class T>
struct PivotedLU {
  Matrix<T> lu;
  std::vector<Index> perm;  ///< row i of P*A is row perm[i] of A

  Matrix<T> solve(const Matrix<T>& b) const;          ///< A x = b
  Matrix<T> solve_adjoint(const Matrix<T>& b) const;  ///< A^H x = b
  Matrix<T> reconstruct() const;
};

template <class T>
PivotedLU<T> lu_partial(const Matrix<T>& a);

/// Shifted Cholesky-QR followed by two plain Cholesky-QR passes. When b is
/// given, orthonormality is with respect to x^H b y. Throws NotPositiveDefinite
/// when any Gram matrix fails to factor.
template <class T>
QRPair<T> shifted_cholesky_qr(const Matrix<T>& x, const Matrix<T>* b = nullptr);

}  // namespace ortho
