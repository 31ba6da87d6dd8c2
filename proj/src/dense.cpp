#include "ortho/dense.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ortho/kernels.hpp"

namespace ortho {

namespace {

template <class T>
using EigenMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor>;

template <class T>
Eigen::Map<const EigenMat<T>> as_eigen(const Matrix<T>& a) {
  return Eigen::Map<const EigenMat<T>>(a.data(), a.rows(), a.cols());
}

template <class T>
Matrix<T> from_eigen(const EigenMat<T>& e) {
  Matrix<T> out(e.rows(), e.cols());
  std::copy_n(e.data(), e.size(), out.data());
  return out;
}

}  // namespace

template <class T>
void gemm(Matrix<T>& c, T alpha, const Matrix<T>& a, const Matrix<T>& b, T beta) {
  if (a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols())
    throw DimensionError("gemm: inconsistent shapes");
  if (c.empty()) return;
  kernels::gemm_nn<T>(a.rows(), b.cols(), a.cols(), alpha, a.data(), std::max<Index>(a.rows(), 1), b.data(),
                      std::max<Index>(b.rows(), 1), beta, c.data(), c.rows());
}

template <class T>
void gemm_ah(Matrix<T>& c, T alpha, const Matrix<T>& a, const Matrix<T>& b, T beta) {
  if (a.rows() != b.rows() || c.rows() != a.cols() || c.cols() != b.cols())
    throw DimensionError("gemm_ah: inconsistent shapes");
  if (c.empty()) return;
  kernels::gemm_hn<T>(a.cols(), b.cols(), a.rows(), alpha, a.data(), std::max<Index>(a.rows(), 1), b.data(),
                      std::max<Index>(b.rows(), 1), beta, c.data(), c.rows());
}

template <class T>
Matrix<T> matmul(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> c(a.rows(), b.cols());
  gemm(c, T(1), a, b, T(0));
  return c;
}

template <class T>
Matrix<T> matmul_ah(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> c(a.cols(), b.cols());
  gemm_ah(c, T(1), a, b, T(0));
  return c;
}

template <class T>
double nrm2(Index n, const T* x) {
  double scale = 0.0;
  for (Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(x[i]));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  if (scale > 1e-140 && scale < 1e140) return std::sqrt(real_part(kernels::dot<T>(n, x, x)));
  double sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double v = std::abs(x[i]) / scale;
    sum += v * v;
  }
  return scale * std::sqrt(sum);
}

// ---- SVD-based quantities ---------------------------------------------------

template <class T>
std::vector<double> singular_values(const Matrix<T>& a) {
  if (a.empty()) return {};
  if (!all_finite(a)) throw ConvergenceError("singular_values: non-finite input");
  Eigen::BDCSVD<EigenMat<T>> svd(as_eigen(a));
  if (svd.info() != Eigen::Success) throw ConvergenceError("singular_values: SVD did not converge");
  const auto& s = svd.singularValues();
  return std::vector<double>(s.data(), s.data() + s.size());
}

template <class T>
double norm2(const Matrix<T>& a) {
  if (a.empty()) return 0.0;
  if (a.rows() == 1 || a.cols() == 1) return nrm2(a.size(), a.data());
  return singular_values(a).front();
}

template <class T>
double cond2(const Matrix<T>& a) {
  if (a.empty()) throw DimensionError("cond2: empty matrix");
  if (!all_finite(a)) throw ConvergenceError("cond2: non-finite input");
  // BDCSVD deflates singular values below eps * ||a|| to zero; Jacobi keeps them
  Eigen::JacobiSVD<EigenMat<T>, Eigen::ColPivHouseholderQRPreconditioner> svd(as_eigen(a));
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

template <class T>
double orthonormality_defect(const Matrix<T>& q) {
  Matrix<T> g = matmul_ah(q, q);
  for (Index i = 0; i < g.rows(); ++i) g(i, i) -= T(1);
  return norm2(g);
}

// ---- Householder-QR ---------------------------------------------------------

template <class T>
QRPair<T> householder_qr(const Matrix<T>& a, bool nonneg_diag) {
  const Index m = a.rows();
  const Index n = a.cols();
  if (m < n) throw DimensionError("householder_qr: requires rows >= cols");

  Matrix<T> work = a;
  std::vector<T> tau(static_cast<std::size_t>(n), T(0));
  std::vector<T> wrow(static_cast<std::size_t>(std::max<Index>(n, 1)));

  for (Index j = 0; j < n; ++j) {
    const Index len = m - j;
    T* x = work.col(j) + j;
    const T alpha = x[0];
    const double xnorm = nrm2(len - 1, x + 1);
    double alpha_im = 0.0;
    if constexpr (is_complex_v<T>) alpha_im = alpha.imag();
    if (xnorm == 0.0 && alpha_im == 0.0) continue;  // H_j = I

    const double alpha_re = real_part(alpha);
    const double mag = std::hypot(std::abs(alpha), xnorm);
    const double beta = alpha_re >= 0.0 ? -mag : mag;
    T t;
    if constexpr (is_complex_v<T>) {
      t = T((beta - alpha_re) / beta, -alpha_im / beta);
    } else {
      t = (beta - alpha) / beta;
    }
    tau[static_cast<std::size_t>(j)] = t;
    const T inv = T(1) / (alpha - T(beta));
    for (Index i = 1; i < len; ++i) x[i] *= inv;
    x[0] = T(1);

    // Trailing update with H_j^H = I - conj(tau) v v^H.
    const Index nc = n - j - 1;
    if (nc > 0) {
      T* trailing = work.col(j + 1) + j;
      kernels::gemm_hn<T>(1, nc, len, T(1), x, len, trailing, m, T(0), wrow.data(), 1);
      kernels::gemm_nn<T>(len, nc, 1, -conj(t), x, len, wrow.data(), 1, T(1), trailing, m);
    }
    x[0] = T(beta);
  }

  QRPair<T> out;
  out.r = Matrix<T>(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i <= j; ++i) out.r(i, j) = work(i, j);

  // Q = H_0 H_1 ... H_{n-1} [I; 0], accumulated back to front.
  out.q = Matrix<T>::identity(m, n);
  for (Index j = n - 1; j >= 0; --j) {
    const T t = tau[static_cast<std::size_t>(j)];
    if (t == T(0)) continue;
    const Index len = m - j;
    T* v = work.col(j) + j;
    const T saved = v[0];
    v[0] = T(1);
    const Index nc = n - j;
    T* qsub = out.q.col(j) + j;
    kernels::gemm_hn<T>(1, nc, len, T(1), v, len, qsub, m, T(0), wrow.data(), 1);
    kernels::gemm_nn<T>(len, nc, 1, -t, v, len, wrow.data(), 1, T(1), qsub, m);
    v[0] = saved;
  }

  if (nonneg_diag) {
    for (Index j = 0; j < n; ++j) {
      const T d = phase(out.r(j, j));
      if (d == T(1)) continue;
      const T dc = conj(d);
      for (Index c = j; c < n; ++c) out.r(j, c) *= dc;
      out.r(j, j) = T(std::abs(out.r(j, j)));
      T* qc = out.q.col(j);
      for (Index i = 0; i < m; ++i) qc[i] *= d;
    }
  }
  return out;
}

// ---- Cholesky -----------------------------------------------------------------

template <class T>
Matrix<T> cholesky(const Matrix<T>& a) {
  const Index n = a.rows();
  if (a.cols() != n) throw DimensionError("cholesky: matrix must be square");
  const double anorm = norm_fro(a);
  Matrix<T> h = a;
  double skew = 0.0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) {
      const T avg = (a(i, j) + conj(a(j, i))) * 0.5;
      skew = std::max(skew, std::abs(a(i, j) - conj(a(j, i))));
      h(i, j) = avg;
      h(j, i) = conj(avg);
    }
  }
  if (skew > 1e-12 * anorm) throw PreconditionError("cholesky: input is not Hermitian");

  Matrix<T> l(n, n);
  std::vector<T> rowj(static_cast<std::size_t>(std::max<Index>(n, 1)));
  for (Index j = 0; j < n; ++j) {
    // column j of L: h(j:n, j) - L(j:n, 0:j) * conj(L(j, 0:j))^T
    T* lj = l.col(j) + j;
    std::copy_n(h.col(j) + j, n - j, lj);
    if (j > 0) {
      for (Index c = 0; c < j; ++c) rowj[static_cast<std::size_t>(c)] = conj(l(j, c));
      kernels::gemm_nn<T>(n - j, 1, j, T(-1), l.data() + j, n, rowj.data(), j, T(1), lj, n);
    }
    const double d = real_part(lj[0]);
    if (!(d > 0.0) || !std::isfinite(d))
      throw NotPositiveDefinite("cholesky: non-positive pivot at step " + std::to_string(j), static_cast<long>(j));
    const double ljj = std::sqrt(d);
    lj[0] = T(ljj);
    for (Index i = 1; i < n - j; ++i) lj[i] /= ljj;
  }
  return l;
}

// ---- polar ------------------------------------------------------------------

template <class T>
PolarPair<T> polar(const Matrix<T>& a) {
  if (a.rows() != a.cols()) throw DimensionError("polar: matrix must be square");
  const Index n = a.rows();
  if (n == 0) return {};
  if (!all_finite(a)) throw ConvergenceError("polar: non-finite input");
  Eigen::BDCSVD<EigenMat<T>> svd(as_eigen(a), Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw ConvergenceError("polar: SVD did not converge");
  const EigenMat<T> u = svd.matrixU();
  const EigenMat<T> v = svd.matrixV();
  const auto& s = svd.singularValues();
  EigenMat<T> unitary = u * v.adjoint();
  EigenMat<T> herm = v * s.template cast<T>().asDiagonal() * v.adjoint();
  herm = (0.5 * (herm + herm.adjoint())).eval();
  return {from_eigen<T>(unitary), from_eigen<T>(herm)};
}

// ---- triangular solve -----------------------------------------------------------

template <class T>
Matrix<T> tri_solve(const Matrix<T>& t, const Matrix<T>& b, Uplo uplo, Op op, Side side, Diag diag) {
  const Index k = t.rows();
  if (t.cols() != k) throw DimensionError("tri_solve: t must be square");
  if (side == Side::Right) {
    // x op(t) = b  <=>  op(t)^H x^H = b^H
    const Op flipped = op == Op::None ? Op::ConjTrans : Op::None;
    return adjoint(tri_solve(t, adjoint(b), uplo, flipped, Side::Left, diag));
  }
  if (b.rows() != k) throw DimensionError("tri_solve: right-hand side has wrong row count");
  if (diag == Diag::NonUnit) {
    for (Index i = 0; i < k; ++i)
      if (t(i, i) == T(0)) throw SingularError("tri_solve: zero diagonal entry at " + std::to_string(i));
  }
  Matrix<T> x = b;
  for (Index c = 0; c < x.cols(); ++c) {
    T* xc = x.col(c);
    if (op == Op::None && uplo == Uplo::Upper) {
      for (Index j = k - 1; j >= 0; --j) {
        if (diag == Diag::NonUnit) xc[j] /= t(j, j);
        if (xc[j] != T(0)) kernels::axpy<T>(j, -xc[j], t.col(j), xc);
      }
    } else if (op == Op::None && uplo == Uplo::Lower) {
      for (Index j = 0; j < k; ++j) {
        if (diag == Diag::NonUnit) xc[j] /= t(j, j);
        if (xc[j] != T(0)) kernels::axpy<T>(k - j - 1, -xc[j], t.col(j) + j + 1, xc + j + 1);
      }
    } else if (uplo == Uplo::Upper) {
      // t^H is lower: x_i = (b_i - sum_{l<i} conj(t(l,i)) x_l) / conj(t(i,i))
      for (Index i = 0; i < k; ++i) {
        T s = xc[i] - kernels::dot<T>(i, t.col(i), xc);
        xc[i] = diag == Diag::NonUnit ? s / conj(t(i, i)) : s;
      }
    } else {
      // t^H is upper
      for (Index i = k - 1; i >= 0; --i) {
        T s = xc[i] - kernels::dot<T>(k - i - 1, t.col(i) + i + 1, xc + i + 1);
        xc[i] = diag == Diag::NonUnit ? s / conj(t(i, i)) : s;
      }
    }
  }
  return x;
}

// ---- pivoted LU -----------------------------------------------------------------

template <class T>
PivotedLU<T> lu_partial(const Matrix<T>& a) {
  const Index n = a.rows();
  if (a.cols() != n) throw DimensionError("lu_partial: matrix must be square");
  PivotedLU<T> f{a, std::vector<Index>(static_cast<std::size_t>(n))};
  for (Index i = 0; i < n; ++i) f.perm[static_cast<std::size_t>(i)] = i;
  Matrix<T>& lu = f.lu;
  for (Index j = 0; j < n; ++j) {
    Index p = j;
    for (Index i = j + 1; i < n; ++i)
      if (std::abs(lu(i, j)) > std::abs(lu(p, j))) p = i;
    if (lu(p, j) == T(0)) throw SingularError("lu_partial: matrix is singular");
    if (p != j) {
      for (Index c = 0; c < n; ++c) std::swap(lu(p, c), lu(j, c));
      std::swap(f.perm[static_cast<std::size_t>(p)], f.perm[static_cast<std::size_t>(j)]);
    }
    const T piv = lu(j, j);
    for (Index i = j + 1; i < n; ++i) lu(i, j) /= piv;
    for (Index c = j + 1; c < n; ++c) {
      const T s = lu(j, c);
      if (s != T(0)) kernels::axpy<T>(n - j - 1, -s, lu.col(j) + j + 1, lu.col(c) + j + 1);
    }
  }
  return f;
}

template <class T>
Matrix<T> PivotedLU<T>::solve(const Matrix<T>& b) const {
  const Index n = lu.rows();
  Matrix<T> pb(n, b.cols());
  for (Index c = 0; c < b.cols(); ++c)
    for (Index i = 0; i < n; ++i) pb(i, c) = b(perm[static_cast<std::size_t>(i)], c);
  Matrix<T> y = tri_solve(lu, pb, Uplo::Lower, Op::None, Side::Left, Diag::Unit);
  return tri_solve(lu, y, Uplo::Upper);
}

template <class T>
Matrix<T> PivotedLU<T>::solve_adjoint(const Matrix<T>& b) const {
  // A = P^T L U  =>  A^H = U^H L^H P
  const Index n = lu.rows();
  Matrix<T> y = tri_solve(lu, b, Uplo::Upper, Op::ConjTrans);
  Matrix<T> z = tri_solve(lu, y, Uplo::Lower, Op::ConjTrans, Side::Left, Diag::Unit);
  Matrix<T> x(n, b.cols());
  for (Index c = 0; c < b.cols(); ++c)
    for (Index i = 0; i < n; ++i) x(perm[static_cast<std::size_t>(i)], c) = z(i, c);
  return x;
}

template <class T>
Matrix<T> PivotedLU<T>::reconstruct() const {
  const Index n = lu.rows();
  Matrix<T> l = Matrix<T>::identity(n);
  Matrix<T> u(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) (i > j ? l(i, j) : u(i, j)) = lu(i, j);
  Matrix<T> pa = matmul(l, u);
  Matrix<T> out(n, n);
  for (Index c = 0; c < n; ++c)
    for (Index i = 0; i < n; ++i) out(perm[static_cast<std::size_t>(i)], c) = pa(i, c);
  return out;
}

// ---- shifted Cholesky-QR ----------------------------------------------------------

namespace {
template <class T>
Matrix<T> weighted_gram(const Matrix<T>& x, const Matrix<T>* b) {
  if (b == nullptr) return matmul_ah(x, x);
  return matmul_ah(x, matmul(*b, x));
}
}  // namespace

template <class T>
QRPair<T> shifted_cholesky_qr(const Matrix<T>& x, const Matrix<T>* b) {
  const Index m = x.rows();
  const Index k = x.cols();
  if (m < k) throw DimensionError("shifted_cholesky_qr: requires rows >= cols");
  if (b != nullptr && (b->rows() != m || b->cols() != m)) throw DimensionError("shifted_cholesky_qr: B shape");

  Matrix<T> g = weighted_gram(x, b);
  const double shift =
      11.0 * (static_cast<double>(m * k) + static_cast<double>(k * (k + 1))) * unit_roundoff * norm2(g);
  for (Index i = 0; i < k; ++i) g(i, i) += T(shift);
  Matrix<T> r = adjoint(cholesky(g));
  Matrix<T> q = tri_solve(r, x, Uplo::Upper, Op::None, Side::Right);
  for (int pass = 0; pass < 2; ++pass) {
    Matrix<T> rp = adjoint(cholesky(weighted_gram(q, b)));
    q = tri_solve(rp, q, Uplo::Upper, Op::None, Side::Right);
    r = matmul(rp, r);
  }
  zero_lower(r);
  return {std::move(q), std::move(r)};
}

#define ORTHO_INSTANTIATE(T)                                                                        \
  template Matrix<T> matmul<T>(const Matrix<T>&, const Matrix<T>&);                                 \
  template Matrix<T> matmul_ah<T>(const Matrix<T>&, const Matrix<T>&);                              \
  template void gemm<T>(Matrix<T>&, T, const Matrix<T>&, const Matrix<T>&, T);                      \
  template void gemm_ah<T>(Matrix<T>&, T, const Matrix<T>&, const Matrix<T>&, T);                   \
  template double nrm2<T>(Index, const T*);                                                         \
  template std::vector<double> singular_values<T>(const Matrix<T>&);                                \
  template double norm2<T>(const Matrix<T>&);                                                       \
  template double cond2<T>(const Matrix<T>&);                                                       \
  template double orthonormality_defect<T>(const Matrix<T>&);                                       \
  template QRPair<T> householder_qr<T>(const Matrix<T>&, bool);                                     \
  template Matrix<T> cholesky<T>(const Matrix<T>&);                                                 \
  template PolarPair<T> polar<T>(const Matrix<T>&);                                                 \
  template Matrix<T> tri_solve<T>(const Matrix<T>&, const Matrix<T>&, Uplo, Op, Side, Diag);        \
  template struct PivotedLU<T>;                                                                     \
  template PivotedLU<T> lu_partial<T>(const Matrix<T>&);                                            \
  template QRPair<T> shifted_cholesky_qr<T>(const Matrix<T>&, const Matrix<T>*);

ORTHO_INSTANTIATE(double)
ORTHO_INSTANTIATE(cplx)
#undef ORTHO_INSTANTIATE

}  // namespace ortho
